// Domain types for one vehicle's sensor stream: accelerometer and
// ultrasonic samples, raw NMEA lines, decoded GPS fixes, detection events
// and the responder registry entries that notifications go to.
//
// All types are plain values. Validation never coerces: out-of-range input
// is returned as a typed error, in-range input is returned unchanged.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "crashlink/result.hpp"

namespace crashlink {

// Milliseconds since the start of the trace. Replay never consults a wall
// clock, so equal traces produce equal runs.
struct Timestamp {
    std::int64_t millis = 0;
    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

inline constexpr int kAdcMax = 1023;  // 10-bit converter

// Raw tilt readings, one count per axis.
struct AccelSample {
    Timestamp t;
    int x = 0;
    int y = 0;
    int z = 0;
    friend bool operator==(const AccelSample&, const AccelSample&) = default;
};

enum class SensorPosition { Front, Rear };

struct UltrasonicSample {
    Timestamp t;
    SensorPosition sensor = SensorPosition::Front;
    double range_cm = 0.0;
    friend bool operator==(const UltrasonicSample&, const UltrasonicSample&) = default;
};

// An undecoded receiver line. `raw` starts with '$'; CR/LF may appear only
// as a trailing terminator.
struct NmeaLine {
    Timestamp t;
    std::string raw;
    friend bool operator==(const NmeaLine&, const NmeaLine&) = default;
};

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
    friend bool operator==(const LatLon&, const LatLon&) = default;
};

// Decoded position. `stale` marks a fix older than the staleness window at
// the moment it is attached to an event.
struct GeoFix {
    double lat = 0.0;
    double lon = 0.0;
    Timestamp t;
    bool stale = false;
    friend bool operator==(const GeoFix&, const GeoFix&) = default;
};

enum class Axis { X, Y, Z };

enum class EventKind { TiltAccident, ProximityWarning };

struct DetectionEvent {
    Timestamp t;
    EventKind kind = EventKind::TiltAccident;
    std::optional<Axis> axis;                // set only for tilt events
    std::optional<SensorPosition> sensor;    // set only for proximity events
    double trigger_value = 0.0;              // ADC counts or centimeters
    friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

enum class ResponderKind { Hospital, Police };

struct Responder {
    std::string id;
    ResponderKind kind = ResponderKind::Hospital;
    std::string name;
    std::string phone;  // '+' followed by 8..15 digits
    LatLon location;
    friend bool operator==(const Responder&, const Responder&) = default;
};

using SensorRecord = std::variant<AccelSample, UltrasonicSample, NmeaLine>;

Timestamp record_time(const SensorRecord& record);

bool valid_phone(std::string_view phone);
bool valid_lat_lon(double lat, double lon);

// Validation is total and idempotent: any input yields either the value
// unchanged or an error, never a mutated value.
Result<AccelSample> validate(const AccelSample& sample);
Result<UltrasonicSample> validate(const UltrasonicSample& sample);
Result<NmeaLine> validate(const NmeaLine& line);
Result<SensorRecord> validate(const SensorRecord& record);
Result<Responder> validate(const Responder& responder);

const char* to_string(Axis axis);
const char* to_string(EventKind kind);
const char* to_string(SensorPosition sensor);
const char* to_string(ResponderKind kind);

Result<SensorPosition> sensor_position_from_string(std::string_view text);
Result<ResponderKind> responder_kind_from_string(std::string_view text);

}  // namespace crashlink

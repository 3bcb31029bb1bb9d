// Accident and proximity detection over a single ordered sample stream.
//
// Tilt: each configured axis keeps a run counter of consecutive samples at
// or above its threshold. When the counter first reaches debounce_samples
// while the axis is armed, one TiltAccident fires and the axis disarms.
// Below-threshold samples reset the counter; the axis re-arms only once a
// sample falls below threshold - rearm_below_margin, so hovering around the
// threshold cannot retrigger.
//
// Proximity: each ultrasonic sensor latches one ProximityWarning when its
// range drops below proximity_cm; the latch clears once the range recovers
// to at least twice that distance.
#pragma once

#include <optional>
#include <vector>

#include "crashlink/result.hpp"
#include "crashlink/telemetry.hpp"

namespace crashlink::detection {

struct DetectionConfig {
    int threshold_x = 310;          // ADC counts, compared with >=
    int threshold_y = 340;
    std::optional<int> threshold_z; // z is ingested but only compared when set
    double proximity_cm = 5.0;      // strict <
    int debounce_samples = 3;
    int rearm_below_margin = 10;
    friend bool operator==(const DetectionConfig&, const DetectionConfig&) = default;
};

bool valid(const DetectionConfig& cfg);

struct AxisState {
    int run = 0;       // consecutive at-or-above samples, capped at debounce
    bool armed = true;
    friend bool operator==(const AxisState&, const AxisState&) = default;
};

struct DetectorState {
    AxisState x;
    AxisState y;
    AxisState z;
    bool front_latched = false;
    bool rear_latched = false;
    std::optional<Timestamp> last_t;
    friend bool operator==(const DetectorState&, const DetectorState&) = default;
};

class Detector {
public:
    explicit Detector(DetectionConfig cfg = {});

    // Samples must arrive in non-decreasing timestamp order across both
    // overloads; a regression yields OutOfOrder and leaves state untouched.
    // Returns every event the sample causes (possibly several for one
    // accelerometer sample when multiple axes cross together).
    Result<std::vector<DetectionEvent>> ingest(const AccelSample& sample);
    Result<std::vector<DetectionEvent>> ingest(const UltrasonicSample& sample);

    void reset();

    const DetectorState& state() const { return state_; }
    const DetectionConfig& config() const { return cfg_; }

private:
    Result<std::vector<DetectionEvent>> check_order(Timestamp t);
    void step_axis(AxisState& axis, Axis which, int value, int threshold,
                   Timestamp t, std::vector<DetectionEvent>& out);

    DetectionConfig cfg_;
    DetectorState state_;
};

}  // namespace crashlink::detection

#include "crashlink/telemetry.hpp"

#include <cctype>

namespace crashlink {

namespace {

Error range_error(std::string message) {
    return Error{ErrCode::RangeError, std::move(message)};
}

Error format_error(std::string message) {
    return Error{ErrCode::FormatError, std::move(message)};
}

bool adc_in_range(int v) {
    return v >= 0 && v <= kAdcMax;
}

}  // namespace

const char* to_string(ErrCode code) {
    switch (code) {
        case ErrCode::RangeError: return "RangeError";
        case ErrCode::FormatError: return "FormatError";
        case ErrCode::ChecksumMismatch: return "ChecksumMismatch";
        case ErrCode::Malformed: return "Malformed";
        case ErrCode::Unsupported: return "Unsupported";
        case ErrCode::NoFix: return "NoFix";
        case ErrCode::FieldError: return "FieldError";
        case ErrCode::OutOfOrder: return "OutOfOrder";
        case ErrCode::EmptyKind: return "EmptyKind";
        case ErrCode::EmptyTrials: return "EmptyTrials";
        case ErrCode::DuplicatePlace: return "DuplicatePlace";
        case ErrCode::ParseError: return "ParseError";
        case ErrCode::VersionError: return "VersionError";
        case ErrCode::OrderError: return "OrderError";
        case ErrCode::IoError: return "IoError";
    }
    return "UnknownError";
}

Timestamp record_time(const SensorRecord& record) {
    return std::visit([](const auto& r) { return r.t; }, record);
}

bool valid_phone(std::string_view phone) {
    if (phone.size() < 9 || phone.size() > 16 || phone[0] != '+') {
        return false;
    }
    for (char c : phone.substr(1)) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

bool valid_lat_lon(double lat, double lon) {
    return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

Result<AccelSample> validate(const AccelSample& sample) {
    if (sample.t.millis < 0) {
        return range_error("negative timestamp");
    }
    if (!adc_in_range(sample.x) || !adc_in_range(sample.y) || !adc_in_range(sample.z)) {
        return range_error("accel count outside 0..1023");
    }
    return sample;
}

Result<UltrasonicSample> validate(const UltrasonicSample& sample) {
    if (sample.t.millis < 0) {
        return range_error("negative timestamp");
    }
    if (!(sample.range_cm >= 0.0)) {  // also rejects NaN
        return range_error("negative ultrasonic range");
    }
    return sample;
}

Result<NmeaLine> validate(const NmeaLine& line) {
    if (line.t.millis < 0) {
        return range_error("negative timestamp");
    }
    if (line.raw.empty() || line.raw[0] != '$') {
        return format_error("nmea line must start with '$'");
    }
    // CR/LF bytes are allowed only as one trailing terminator.
    std::string_view raw = line.raw;
    std::size_t cut = raw.find_first_of("\r\n");
    if (cut != std::string_view::npos) {
        std::string_view tail = raw.substr(cut);
        if (tail != "\r\n" && tail != "\n" && tail != "\r") {
            return format_error("nmea line contains interior CR/LF");
        }
    }
    return line;
}

Result<SensorRecord> validate(const SensorRecord& record) {
    // Dispatch through the typed validators so the variant stays total.
    return std::visit(
        [&](const auto& r) -> Result<SensorRecord> {
            auto checked = validate(r);
            if (!checked.ok()) {
                return checked.error();
            }
            return record;
        },
        record);
}

Result<Responder> validate(const Responder& responder) {
    if (responder.id.empty()) {
        return format_error("responder id is empty");
    }
    if (responder.name.empty()) {
        return format_error("responder name is empty");
    }
    if (!valid_phone(responder.phone)) {
        return format_error("phone must be '+' followed by 8..15 digits: " + responder.phone);
    }
    if (!valid_lat_lon(responder.location.lat, responder.location.lon)) {
        return range_error("responder position outside lat/lon bounds");
    }
    return responder;
}

const char* to_string(Axis axis) {
    switch (axis) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        case Axis::Z: return "z";
    }
    return "?";
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::TiltAccident: return "tilt_accident";
        case EventKind::ProximityWarning: return "proximity_warning";
    }
    return "?";
}

const char* to_string(SensorPosition sensor) {
    switch (sensor) {
        case SensorPosition::Front: return "front";
        case SensorPosition::Rear: return "rear";
    }
    return "?";
}

const char* to_string(ResponderKind kind) {
    switch (kind) {
        case ResponderKind::Hospital: return "hospital";
        case ResponderKind::Police: return "police";
    }
    return "?";
}

Result<SensorPosition> sensor_position_from_string(std::string_view text) {
    if (text == "front") {
        return SensorPosition::Front;
    }
    if (text == "rear") {
        return SensorPosition::Rear;
    }
    return format_error("unknown sensor position: " + std::string(text));
}

Result<ResponderKind> responder_kind_from_string(std::string_view text) {
    if (text == "hospital") {
        return ResponderKind::Hospital;
    }
    if (text == "police") {
        return ResponderKind::Police;
    }
    return format_error("unknown responder kind: " + std::string(text));
}

}  // namespace crashlink

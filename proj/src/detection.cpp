#include "crashlink/detection.hpp"

#include <cassert>
#include <string>

namespace crashlink::detection {

bool valid(const DetectionConfig& cfg) {
    auto threshold_ok = [](int t) { return t > 0 && t <= kAdcMax; };
    if (!threshold_ok(cfg.threshold_x) || !threshold_ok(cfg.threshold_y)) {
        return false;
    }
    if (cfg.threshold_z && !threshold_ok(*cfg.threshold_z)) {
        return false;
    }
    return cfg.proximity_cm > 0.0 && cfg.debounce_samples >= 1 &&
           cfg.rearm_below_margin >= 0;
}

Detector::Detector(DetectionConfig cfg) : cfg_(cfg) {
    assert(valid(cfg_));
}

Result<std::vector<DetectionEvent>> Detector::check_order(Timestamp t) {
    if (state_.last_t && t < *state_.last_t) {
        return Error{ErrCode::OutOfOrder,
                     "sample at " + std::to_string(t.millis) +
                         "ms arrived after " + std::to_string(state_.last_t->millis) + "ms"};
    }
    state_.last_t = t;
    return std::vector<DetectionEvent>{};
}

void Detector::step_axis(AxisState& axis, Axis which, int value, int threshold,
                         Timestamp t, std::vector<DetectionEvent>& out) {
    if (value >= threshold) {
        if (axis.run < cfg_.debounce_samples) {
            ++axis.run;
            if (axis.run == cfg_.debounce_samples && axis.armed) {
                axis.armed = false;
                DetectionEvent event;
                event.t = t;
                event.kind = EventKind::TiltAccident;
                event.axis = which;
                event.trigger_value = value;
                out.push_back(event);
            }
        }
    } else {
        axis.run = 0;
        if (!axis.armed && value < threshold - cfg_.rearm_below_margin) {
            axis.armed = true;
        }
    }
}

Result<std::vector<DetectionEvent>> Detector::ingest(const AccelSample& sample) {
    auto events = check_order(sample.t);
    if (!events.ok()) {
        return events;
    }
    auto& out = events.value();
    step_axis(state_.x, Axis::X, sample.x, cfg_.threshold_x, sample.t, out);
    step_axis(state_.y, Axis::Y, sample.y, cfg_.threshold_y, sample.t, out);
    if (cfg_.threshold_z) {
        step_axis(state_.z, Axis::Z, sample.z, *cfg_.threshold_z, sample.t, out);
    }
    return events;
}

Result<std::vector<DetectionEvent>> Detector::ingest(const UltrasonicSample& sample) {
    auto events = check_order(sample.t);
    if (!events.ok()) {
        return events;
    }
    bool& latched = sample.sensor == SensorPosition::Front ? state_.front_latched
                                                           : state_.rear_latched;
    if (sample.range_cm < cfg_.proximity_cm) {
        if (!latched) {
            latched = true;
            DetectionEvent event;
            event.t = sample.t;
            event.kind = EventKind::ProximityWarning;
            event.sensor = sample.sensor;
            event.trigger_value = sample.range_cm;
            events.value().push_back(event);
        }
    } else if (sample.range_cm >= 2.0 * cfg_.proximity_cm) {
        latched = false;
    }
    return events;
}

void Detector::reset() {
    state_ = DetectorState{};
}

}  // namespace crashlink::detection

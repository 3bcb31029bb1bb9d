// Deterministic scenario generator for replay and test traces.
//
// Same scenario and seed always give the same trace, byte for byte once
// serialized. Scenarios:
//
//   clean_crash     nominal driving, one sustained tilt excursion, live GPS
//   no_gps_crash    the excursion, but the receiver never gets a fix
//   spike_crash     an accident the debounce filter is blind to: bursts one
//                   sample shorter than the debounce length
//   proximity_only  every ultrasonic range below the warning distance, no
//                   accident
//   quiet           nominal driving only
//
// clean_crash, no_gps_crash and spike_crash carry `staged 1`; the others
// carry no staged accidents.
#pragma once

#include <cstdint>
#include <string_view>

#include "crashlink/result.hpp"
#include "crashlink/trace.hpp"

namespace crashlink::synth {

enum class Scenario { CleanCrash, NoGpsCrash, SpikeCrash, ProximityOnly, Quiet };

const char* to_string(Scenario scenario);
Result<Scenario> scenario_from_string(std::string_view text);

trace::TraceFile synthesize_trace(Scenario scenario, std::uint32_t seed);

}  // namespace crashlink::synth

// Trace replay: detection, location tracking and notification wired
// together, plus the report and transcript text formats the CLI emits.
//
// Replay walks the trace in order, keeps the most recent decoded fix, and
// on each accident event sends one SMS to the nearest hospital and one to
// the nearest police station. An event strictly within dedup_window_ms of
// the previous reported accident is suppressed. A fix older than
// staleness_window_ms still goes out, marked STALE, but counts as a
// location miss; if no fix was ever decoded the notification is aborted.
// Nothing here reads a clock or other ambient state: trace in, same bytes
// out, every time.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crashlink/detection.hpp"
#include "crashlink/geo_notify.hpp"
#include "crashlink/gsm.hpp"
#include "crashlink/metrics.hpp"
#include "crashlink/result.hpp"
#include "crashlink/trace.hpp"

namespace crashlink::pipeline {

struct PipelineConfig {
    detection::DetectionConfig detection;
    std::int64_t staleness_window_ms = 30'000;
    std::int64_t dedup_window_ms = 5'000;
    gsm::DialogueConfig dialogue;
    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

bool valid(const PipelineConfig& cfg);

// JSON with the same field names and nesting as the struct; every key is
// optional, unknown keys are rejected. "threshold_z": null disables the z
// axis comparison.
Result<PipelineConfig> parse_config(std::string_view json_text);
Result<PipelineConfig> load_config(const std::string& path);

struct RunResult {
    std::vector<DetectionEvent> events;  // all events, including suppressed
    std::vector<geo_notify::Notification> notifications;
    std::vector<gsm::DeliveryReport> deliveries;
    std::vector<metrics::TrialRecord> trials;  // one per reported accident
    int proximity_warnings = 0;
    std::vector<std::string> log;
};

RunResult run(const trace::TraceFile& trace, const PipelineConfig& cfg,
              const geo_notify::ResponderRegistry& registry,
              gsm::SerialTransport& transport);

// Trial rows plus the proximity count, with text form:
//
//   # replay report
//   trials 2
//   place detected located notified
//   1 yes yes yes
//   2 yes no yes
//   counts detected 2 0 located 1 1 notified 2 0
//   detection_accuracy 1.000000
//   ...
//   proximity_warnings 0
//
// Ratio lines print n/a when there are no trials. parse() accepts exactly
// what to_text() writes and recomputes the ratios from the counts.
struct ReplayReport {
    std::vector<metrics::TrialRecord> rows;
    int proximity_warnings = 0;

    // Requires unique place numbers (all reports produced by this module
    // have them). All-zero when rows is empty.
    metrics::AccuracyReport counts() const;
    std::string to_text() const;
    static Result<ReplayReport> parse(std::string_view text);
    static Result<ReplayReport> load(const std::string& path);

    friend bool operator==(const ReplayReport&, const ReplayReport&) = default;
};

// Rows straight from the run, padded with one miss row per staged accident
// the run never reported (detected no, located and notified yes, matching
// how a missed accident scores: those stages never got a chance to fail).
ReplayReport make_report(const RunResult& result, const trace::TraceFile& trace);

// Concatenates rows in argument order, renumbering places from 1.
ReplayReport merge_reports(std::span<const ReplayReport> parts);

// Human-readable byte log of every delivery, one ">>"/"<<" line per
// transport call, bytes escaped C-style. Deterministic for equal inputs.
std::string format_transcripts(std::span<const gsm::DeliveryReport> deliveries);

}  // namespace crashlink::pipeline

// Sensor trace files: the line-oriented capture format replay consumes.
//
//   # comment
//   version 1
//   vehicle BUS-42
//   staged 1
//   accel 100 280 301 381
//   ultra 500 front 143.2
//   nmea 1000 $GPGGA,120000,2221.4140,N,09146.9920,E,1,08,0.9,12.0,M,0.0,M,,*49
//
// `version` must come first, then `vehicle`, then an optional `staged`
// count: the number of genuine accidents the trace is known to contain,
// used to score detection misses. Records follow in non-decreasing
// timestamp order (milliseconds since trace start).
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "crashlink/result.hpp"
#include "crashlink/telemetry.hpp"

namespace crashlink::trace {

inline constexpr int kTraceVersion = 1;

struct TraceRecord {
    long line_no = 0;  // source line, for diagnostics
    SensorRecord sample;
    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct TraceFile {
    int version = kTraceVersion;
    std::string vehicle_id;
    int staged = 0;
    std::vector<TraceRecord> records;
    friend bool operator==(const TraceFile&, const TraceFile&) = default;
};

// Errors: ParseError (with line) for structure or value problems,
// VersionError for an unknown version, OrderError (with line) for a
// timestamp regression.
Result<TraceFile> parse_trace(std::string_view text);
Result<TraceFile> load_trace(const std::string& path);

// Canonical text form; parse_trace(serialize_trace(t)) reproduces t except
// for line numbers. Doubles are written in shortest round-trip form.
std::string serialize_trace(const TraceFile& trace);

}  // namespace crashlink::trace

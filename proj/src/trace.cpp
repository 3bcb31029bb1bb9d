#include "crashlink/trace.hpp"

#include <charconv>
#include <cstdint>
#include <vector>

#include "crashlink/io.hpp"

namespace crashlink::trace {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

Error at_line(ErrCode code, long line, std::string message) {
    Error err{code, std::move(message)};
    err.line = line;
    return err;
}

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && p == text.data() + text.size();
}

bool parse_double(std::string_view text, double& out) {
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && p == text.data() + text.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) {
            tokens.push_back(line.substr(start, i - start));
        }
    }
    return tokens;
}

// Doubles in shortest form that still parses back to the same value.
std::string format_double(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

}  // namespace

Result<TraceFile> parse_trace(std::string_view text) {
    TraceFile out;
    long line_no = 0;
    std::size_t pos = 0;
    enum class Expect { Version, Vehicle, Records } expect = Expect::Version;
    bool staged_allowed = false;
    std::int64_t prev_millis = -1;

    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        std::string_view raw = end == std::string_view::npos
                                   ? text.substr(pos)
                                   : text.substr(pos, end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }

        auto tokens = split_ws(line);
        std::string_view keyword = tokens[0];

        if (expect == Expect::Version) {
            if (keyword != "version" || tokens.size() != 2) {
                return at_line(ErrCode::ParseError, line_no, "trace must start with 'version <n>'");
            }
            int version = 0;
            if (!parse_int(tokens[1], version)) {
                return at_line(ErrCode::ParseError, line_no, "version is not a number");
            }
            if (version != kTraceVersion) {
                return at_line(ErrCode::VersionError, line_no,
                               "unsupported trace version: " + std::string(tokens[1]));
            }
            out.version = version;
            expect = Expect::Vehicle;
            continue;
        }

        if (expect == Expect::Vehicle) {
            if (keyword != "vehicle" || tokens.size() < 2) {
                return at_line(ErrCode::ParseError, line_no, "expected 'vehicle <id>'");
            }
            out.vehicle_id = std::string(trim(line.substr(keyword.size())));
            expect = Expect::Records;
            staged_allowed = true;
            continue;
        }

        if (keyword == "staged") {
            if (!staged_allowed) {
                return at_line(ErrCode::ParseError, line_no,
                               "'staged' must appear directly after the header");
            }
            if (tokens.size() != 2 || !parse_int(tokens[1], out.staged) || out.staged < 0) {
                return at_line(ErrCode::ParseError, line_no, "expected 'staged <count>'");
            }
            staged_allowed = false;
            continue;
        }
        staged_allowed = false;

        std::int64_t millis = 0;
        if (tokens.size() < 2 || !parse_int(tokens[1], millis)) {
            return at_line(ErrCode::ParseError, line_no, "record needs a millisecond timestamp");
        }
        Timestamp t{millis};

        SensorRecord record;
        if (keyword == "accel") {
            if (tokens.size() != 5) {
                return at_line(ErrCode::ParseError, line_no, "expected 'accel <t> <x> <y> <z>'");
            }
            AccelSample sample;
            sample.t = t;
            if (!parse_int(tokens[2], sample.x) || !parse_int(tokens[3], sample.y) ||
                !parse_int(tokens[4], sample.z)) {
                return at_line(ErrCode::ParseError, line_no, "accel counts are not integers");
            }
            record = sample;
        } else if (keyword == "ultra") {
            if (tokens.size() != 4) {
                return at_line(ErrCode::ParseError, line_no,
                               "expected 'ultra <t> <front|rear> <cm>'");
            }
            UltrasonicSample sample;
            sample.t = t;
            auto position = sensor_position_from_string(tokens[2]);
            if (!position.ok()) {
                return at_line(ErrCode::ParseError, line_no, position.error().message);
            }
            sample.sensor = position.value();
            if (!parse_double(tokens[3], sample.range_cm)) {
                return at_line(ErrCode::ParseError, line_no, "range is not a number");
            }
            record = sample;
        } else if (keyword == "nmea") {
            // The sentence is everything after the timestamp token.
            std::size_t ts_pos = line.find(tokens[1]);
            std::string_view rest = trim(line.substr(ts_pos + tokens[1].size()));
            if (rest.empty()) {
                return at_line(ErrCode::ParseError, line_no, "expected 'nmea <t> <sentence>'");
            }
            record = NmeaLine{t, std::string(rest)};
        } else {
            return at_line(ErrCode::ParseError, line_no,
                           "unknown record keyword: " + std::string(keyword));
        }

        auto checked = validate(record);
        if (!checked.ok()) {
            return at_line(ErrCode::ParseError, line_no, checked.error().message);
        }
        if (millis < prev_millis) {
            return at_line(ErrCode::OrderError, line_no,
                           "timestamp " + std::to_string(millis) + "ms is before " +
                               std::to_string(prev_millis) + "ms");
        }
        prev_millis = millis;
        out.records.push_back(TraceRecord{line_no, std::move(record)});
    }

    if (expect == Expect::Version) {
        return Error{ErrCode::ParseError, "empty trace: missing 'version' header"};
    }
    if (expect == Expect::Vehicle) {
        return Error{ErrCode::ParseError, "trace is missing the 'vehicle' header"};
    }
    return out;
}

Result<TraceFile> load_trace(const std::string& path) {
    auto text = read_file(path);
    if (!text.ok()) {
        return text.error();
    }
    return parse_trace(text.value());
}

std::string serialize_trace(const TraceFile& trace) {
    std::string out;
    out += "version " + std::to_string(trace.version) + "\n";
    out += "vehicle " + trace.vehicle_id + "\n";
    if (trace.staged > 0) {
        out += "staged " + std::to_string(trace.staged) + "\n";
    }
    for (const auto& record : trace.records) {
        std::visit(
            [&](const auto& sample) {
                using T = std::decay_t<decltype(sample)>;
                if constexpr (std::is_same_v<T, AccelSample>) {
                    out += "accel " + std::to_string(sample.t.millis) + " " +
                           std::to_string(sample.x) + " " + std::to_string(sample.y) +
                           " " + std::to_string(sample.z) + "\n";
                } else if constexpr (std::is_same_v<T, UltrasonicSample>) {
                    out += "ultra " + std::to_string(sample.t.millis) + " " +
                           to_string(sample.sensor) + " " +
                           format_double(sample.range_cm) + "\n";
                } else {
                    out += "nmea " + std::to_string(sample.t.millis) + " " + sample.raw + "\n";
                }
            },
            record.sample);
    }
    return out;
}

}  // namespace crashlink::trace

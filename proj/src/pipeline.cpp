#include "crashlink/pipeline.hpp"

#include <cassert>
#include <charconv>
#include <cstdio>
#include <optional>

#include "json.hpp"

#include "crashlink/io.hpp"
#include "crashlink/nmea.hpp"

namespace crashlink::pipeline {

namespace {

std::string format_double(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

std::string stamp(Timestamp t) {
    return "t=" + std::to_string(t.millis) + "ms ";
}

bool all_succeeded(std::span<const gsm::DeliveryReport> reports) {
    for (const auto& r : reports) {
        if (!r.success) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool valid(const PipelineConfig& cfg) {
    return detection::valid(cfg.detection) && cfg.staleness_window_ms > 0 &&
           cfg.dedup_window_ms > 0 && cfg.dialogue.max_retries >= 0 &&
           cfg.dialogue.response_deadline_ms >= 0 && cfg.dialogue.retry_backoff_ms >= 0;
}

RunResult run(const trace::TraceFile& trace, const PipelineConfig& cfg,
              const geo_notify::ResponderRegistry& registry,
              gsm::SerialTransport& transport) {
    assert(valid(cfg));
    RunResult rr;
    detection::Detector detector(cfg.detection);
    std::optional<GeoFix> last_fix;
    std::optional<Timestamp> last_reported;
    int next_place = 1;

    auto log = [&](std::string line) { rr.log.push_back(std::move(line)); };

    auto handle_tilt = [&](const DetectionEvent& event) {
        if (last_reported &&
            event.t.millis - last_reported->millis < cfg.dedup_window_ms) {
            log(stamp(event.t) + "duplicate tilt suppressed, " +
                std::to_string(event.t.millis - last_reported->millis) +
                "ms since previous");
            return;
        }
        last_reported = event.t;

        metrics::TrialRecord trial;
        trial.place_no = next_place++;
        trial.detected = true;

        if (!last_fix) {
            trial.located = false;
            trial.notified = true;  // no delivery attempted, none failed
            log(stamp(event.t) + "no position fix ever received, notification aborted");
            rr.trials.push_back(trial);
            return;
        }

        GeoFix fix = *last_fix;
        std::int64_t age = event.t.millis - fix.t.millis;
        fix.stale = age > cfg.staleness_window_ms;
        if (fix.stale) {
            log(stamp(event.t) + "stale fix, age " + std::to_string(age) +
                "ms exceeds " + std::to_string(cfg.staleness_window_ms) + "ms");
        }

        auto note = geo_notify::compose(event, fix, registry, trace.vehicle_id);
        if (!note.ok()) {
            // Only reachable with a registry that skipped validation.
            trial.located = !fix.stale;
            trial.notified = true;
            log(stamp(event.t) + "notification aborted: " + note.error().message);
            rr.trials.push_back(trial);
            return;
        }
        rr.notifications.push_back(note.value());

        auto deliveries = gsm::notify_all(transport, note.value(), cfg.dialogue);
        for (std::size_t i = 0; i < deliveries.size(); ++i) {
            const auto& d = deliveries[i];
            const char* role = i == 0 ? "hospital" : "police";
            std::string who = std::string(role) + " " +
                              (i == 0 ? note.value().hospital.id : note.value().police.id) +
                              " " + d.recipient;
            if (d.success) {
                log(stamp(event.t) + "sms to " + who + " delivered, attempts=" +
                    std::to_string(d.attempts));
            } else {
                log(stamp(event.t) + "sms to " + who + " failed, attempts=" +
                    std::to_string(d.attempts) + ": " + d.last_error);
            }
        }

        trial.located = !fix.stale;
        trial.notified = all_succeeded(deliveries);
        rr.trials.push_back(trial);
        for (auto& d : deliveries) {
            rr.deliveries.push_back(std::move(d));
        }
    };

    for (const auto& record : trace.records) {
        std::visit(
            [&](const auto& sample) {
                using T = std::decay_t<decltype(sample)>;
                if constexpr (std::is_same_v<T, NmeaLine>) {
                    auto sentence = nmea::parse_sentence(sample);
                    if (!sentence.ok()) {
                        log(stamp(sample.t) + "nmea rejected: " +
                            to_string(sentence.error().code) + ": " +
                            sentence.error().message);
                        return;
                    }
                    auto fix = nmea::to_geo_fix(sentence.value(), sample.t);
                    if (!fix.ok()) {
                        if (fix.error().code == ErrCode::NoFix) {
                            log(stamp(sample.t) + "no fix: " + fix.error().message);
                        } else {
                            log(stamp(sample.t) + "fix rejected: " + fix.error().message);
                        }
                        return;
                    }
                    last_fix = fix.value();
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "fix %.6f,%.6f",
                                  last_fix->lat, last_fix->lon);
                    log(stamp(sample.t) + buf);
                } else {
                    auto events = detector.ingest(sample);
                    if (!events.ok()) {
                        log(stamp(sample.t) + "sample rejected: " + events.error().message);
                        return;
                    }
                    for (const auto& event : events.value()) {
                        rr.events.push_back(event);
                        if (event.kind == EventKind::TiltAccident) {
                            log(stamp(event.t) + "tilt_accident axis=" +
                                to_string(*event.axis) + " value=" +
                                format_double(event.trigger_value));
                            handle_tilt(event);
                        } else {
                            ++rr.proximity_warnings;
                            log(stamp(event.t) + "proximity_warning " +
                                to_string(*event.sensor) + " " +
                                format_double(event.trigger_value) + "cm");
                        }
                    }
                }
            },
            record.sample);
    }
    return rr;
}

metrics::AccuracyReport ReplayReport::counts() const {
    if (rows.empty()) {
        return metrics::AccuracyReport{};
    }
    auto report = metrics::accumulate(rows);
    assert(report.ok());  // rows built by this module have unique places
    return report.ok() ? report.value() : metrics::AccuracyReport{};
}

std::string ReplayReport::to_text() const {
    auto yn = [](bool v) { return v ? "yes" : "no"; };
    metrics::AccuracyReport c = counts();

    std::string out = "# replay report\n";
    out += "trials " + std::to_string(rows.size()) + "\n";
    out += "place detected located notified\n";
    for (const auto& row : rows) {
        out += std::to_string(row.place_no);
        out += " ";
        out += yn(row.detected);
        out += " ";
        out += yn(row.located);
        out += " ";
        out += yn(row.notified);
        out += "\n";
    }
    out += "counts detected " + std::to_string(c.detect_hits) + " " +
           std::to_string(c.detect_misses) + " located " +
           std::to_string(c.locate_hits) + " " + std::to_string(c.locate_misses) +
           " notified " + std::to_string(c.notify_hits) + " " +
           std::to_string(c.notify_misses) + "\n";

    auto ratio_line = [&](const char* name, double value) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", value);
        return std::string(name) + " " + (rows.empty() ? "n/a" : buf) + "\n";
    };
    out += ratio_line("detection_accuracy", rows.empty() ? 0.0 : c.detection_accuracy());
    out += ratio_line("location_accuracy", rows.empty() ? 0.0 : c.location_accuracy());
    out += ratio_line("notification_accuracy", rows.empty() ? 0.0 : c.notification_accuracy());
    out += "proximity_warnings " + std::to_string(proximity_warnings) + "\n";
    return out;
}

namespace {

struct LineCursor {
    std::string_view text;
    std::size_t pos = 0;
    long line_no = 0;

    // Next non-blank, non-comment line, trimmed; false at end of input.
    bool next(std::string_view& line) {
        while (pos <= text.size()) {
            std::size_t end = text.find('\n', pos);
            std::string_view raw = end == std::string_view::npos
                                       ? text.substr(pos)
                                       : text.substr(pos, end - pos);
            pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
            ++line_no;
            while (!raw.empty() && (raw.back() == '\r' || raw.back() == ' ')) {
                raw.remove_suffix(1);
            }
            while (!raw.empty() && raw.front() == ' ') {
                raw.remove_prefix(1);
            }
            if (raw.empty() || raw.front() == '#') {
                continue;
            }
            line = raw;
            return true;
        }
        return false;
    }
};

Error report_error(long line, std::string message) {
    Error err{ErrCode::ParseError, std::move(message)};
    err.line = line;
    return err;
}

bool parse_int_token(std::string_view text, int& out) {
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && p == text.data() + text.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

Result<bool> parse_yes_no(std::string_view token, long line) {
    if (token == "yes") return true;
    if (token == "no") return false;
    return report_error(line, "expected yes or no, got: " + std::string(token));
}

}  // namespace

Result<ReplayReport> ReplayReport::parse(std::string_view text) {
    LineCursor cursor{text};
    std::string_view line;

    auto expect_line = [&](std::string_view& out) -> std::optional<Error> {
        if (!cursor.next(out)) {
            return Error{ErrCode::ParseError, "report ended early"};
        }
        return std::nullopt;
    };

    if (auto err = expect_line(line)) return *err;
    auto header = split_ws(line);
    int n_trials = 0;
    if (header.size() != 2 || header[0] != "trials" || !parse_int_token(header[1], n_trials) ||
        n_trials < 0) {
        return report_error(cursor.line_no, "expected 'trials <count>'");
    }

    if (auto err = expect_line(line)) return *err;
    if (line != "place detected located notified") {
        return report_error(cursor.line_no, "expected the trial table header");
    }

    ReplayReport report;
    for (int i = 0; i < n_trials; ++i) {
        if (auto err = expect_line(line)) return *err;
        auto cols = split_ws(line);
        if (cols.size() != 4) {
            return report_error(cursor.line_no, "trial row needs 4 columns");
        }
        metrics::TrialRecord row;
        if (!parse_int_token(cols[0], row.place_no)) {
            return report_error(cursor.line_no, "bad place number");
        }
        auto detected = parse_yes_no(cols[1], cursor.line_no);
        auto located = parse_yes_no(cols[2], cursor.line_no);
        auto notified = parse_yes_no(cols[3], cursor.line_no);
        if (!detected.ok()) return detected.error();
        if (!located.ok()) return located.error();
        if (!notified.ok()) return notified.error();
        row.detected = detected.value();
        row.located = located.value();
        row.notified = notified.value();
        report.rows.push_back(row);
    }

    if (auto err = expect_line(line)) return *err;
    auto counts = split_ws(line);
    int stated[6] = {0, 0, 0, 0, 0, 0};
    if (counts.size() != 10 || counts[0] != "counts" || counts[1] != "detected" ||
        counts[4] != "located" || counts[7] != "notified" ||
        !parse_int_token(counts[2], stated[0]) || !parse_int_token(counts[3], stated[1]) ||
        !parse_int_token(counts[5], stated[2]) || !parse_int_token(counts[6], stated[3]) ||
        !parse_int_token(counts[8], stated[4]) || !parse_int_token(counts[9], stated[5])) {
        return report_error(cursor.line_no, "expected the counts line");
    }
    metrics::AccuracyReport derived;
    if (!report.rows.empty()) {
        auto accumulated = metrics::accumulate(report.rows);
        if (!accumulated.ok()) {
            return report_error(cursor.line_no, accumulated.error().message);
        }
        derived = accumulated.value();
    }
    if (stated[0] != derived.detect_hits || stated[1] != derived.detect_misses ||
        stated[2] != derived.locate_hits || stated[3] != derived.locate_misses ||
        stated[4] != derived.notify_hits || stated[5] != derived.notify_misses) {
        return report_error(cursor.line_no, "counts disagree with the trial rows");
    }

    for (const char* name :
         {"detection_accuracy", "location_accuracy", "notification_accuracy"}) {
        if (auto err = expect_line(line)) return *err;
        auto cols = split_ws(line);
        if (cols.size() != 2 || cols[0] != name) {
            return report_error(cursor.line_no, std::string("expected the ") + name + " line");
        }
        // The value is derived from the counts; only its presence matters.
    }

    if (auto err = expect_line(line)) return *err;
    auto prox = split_ws(line);
    if (prox.size() != 2 || prox[0] != "proximity_warnings" ||
        !parse_int_token(prox[1], report.proximity_warnings) ||
        report.proximity_warnings < 0) {
        return report_error(cursor.line_no, "expected 'proximity_warnings <count>'");
    }

    if (cursor.next(line)) {
        return report_error(cursor.line_no, "unexpected content after the report");
    }
    return report;
}

Result<ReplayReport> ReplayReport::load(const std::string& path) {
    auto text = read_file(path);
    if (!text.ok()) {
        return text.error();
    }
    return parse(text.value());
}

ReplayReport make_report(const RunResult& result, const trace::TraceFile& trace) {
    ReplayReport report;
    report.rows = result.trials;
    report.proximity_warnings = result.proximity_warnings;
    int next_place = static_cast<int>(report.rows.size()) + 1;
    // Staged accidents the run never reported become miss rows: detection
    // failed, so location and notification were never put to the test.
    for (int i = static_cast<int>(report.rows.size()); i < trace.staged; ++i) {
        metrics::TrialRecord row;
        row.place_no = next_place++;
        row.detected = false;
        row.located = true;
        row.notified = true;
        report.rows.push_back(row);
    }
    return report;
}

ReplayReport merge_reports(std::span<const ReplayReport> parts) {
    ReplayReport merged;
    int next_place = 1;
    for (const auto& part : parts) {
        for (auto row : part.rows) {
            row.place_no = next_place++;
            merged.rows.push_back(row);
        }
        merged.proximity_warnings += part.proximity_warnings;
    }
    return merged;
}

namespace {

std::string escape_bytes(std::string_view bytes) {
    std::string out = "\"";
    for (unsigned char c : bytes) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\r': out += "\\r"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20 || c >= 0x7F) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\x%02x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += "\"";
    return out;
}

}  // namespace

std::string format_transcripts(std::span<const gsm::DeliveryReport> deliveries) {
    std::string out = "# modem transcripts\n";
    for (std::size_t i = 0; i < deliveries.size(); ++i) {
        const auto& d = deliveries[i];
        out += "message " + std::to_string(i + 1) + " to " + d.recipient +
               " attempts " + std::to_string(d.attempts) +
               (d.success ? " delivered" : " failed: " + d.last_error) + "\n";
        for (const auto& entry : d.transcript) {
            out += entry.dir == gsm::Direction::ToModem ? ">> " : "<< ";
            out += escape_bytes(entry.bytes);
            out += "\n";
        }
    }
    return out;
}

Result<PipelineConfig> parse_config(std::string_view json_text) {
    nlohmann::json root = nlohmann::json::parse(json_text, nullptr, false);
    if (root.is_discarded()) {
        return Error{ErrCode::ParseError, "config is not valid JSON"};
    }
    if (!root.is_object()) {
        return Error{ErrCode::ParseError, "config must be a JSON object"};
    }

    PipelineConfig cfg;

    auto bad = [](std::string message) {
        return Error{ErrCode::ParseError, std::move(message)};
    };
    auto get_int = [&](const nlohmann::json& v, const char* key,
                       auto& out) -> std::optional<Error> {
        if (!v.is_number_integer()) {
            return bad(std::string("config key ") + key + " must be an integer");
        }
        out = v.get<std::int64_t>();
        return std::nullopt;
    };

    for (const auto& [key, value] : root.items()) {
        if (key == "detection") {
            if (!value.is_object()) {
                return bad("config key detection must be an object");
            }
            for (const auto& [dkey, dvalue] : value.items()) {
                std::int64_t n = 0;
                if (dkey == "threshold_x") {
                    if (auto e = get_int(dvalue, "threshold_x", n)) return *e;
                    cfg.detection.threshold_x = static_cast<int>(n);
                } else if (dkey == "threshold_y") {
                    if (auto e = get_int(dvalue, "threshold_y", n)) return *e;
                    cfg.detection.threshold_y = static_cast<int>(n);
                } else if (dkey == "threshold_z") {
                    if (dvalue.is_null()) {
                        cfg.detection.threshold_z.reset();
                    } else {
                        if (auto e = get_int(dvalue, "threshold_z", n)) return *e;
                        cfg.detection.threshold_z = static_cast<int>(n);
                    }
                } else if (dkey == "proximity_cm") {
                    if (!dvalue.is_number()) {
                        return bad("config key proximity_cm must be a number");
                    }
                    cfg.detection.proximity_cm = dvalue.get<double>();
                } else if (dkey == "debounce_samples") {
                    if (auto e = get_int(dvalue, "debounce_samples", n)) return *e;
                    cfg.detection.debounce_samples = static_cast<int>(n);
                } else if (dkey == "rearm_below_margin") {
                    if (auto e = get_int(dvalue, "rearm_below_margin", n)) return *e;
                    cfg.detection.rearm_below_margin = static_cast<int>(n);
                } else {
                    return bad("unknown detection config key: " + dkey);
                }
            }
        } else if (key == "staleness_window_ms") {
            if (auto e = get_int(value, "staleness_window_ms", cfg.staleness_window_ms)) return *e;
        } else if (key == "dedup_window_ms") {
            if (auto e = get_int(value, "dedup_window_ms", cfg.dedup_window_ms)) return *e;
        } else if (key == "dialogue") {
            if (!value.is_object()) {
                return bad("config key dialogue must be an object");
            }
            for (const auto& [dkey, dvalue] : value.items()) {
                std::int64_t n = 0;
                if (dkey == "max_retries") {
                    if (auto e = get_int(dvalue, "max_retries", n)) return *e;
                    cfg.dialogue.max_retries = static_cast<int>(n);
                } else if (dkey == "response_deadline_ms") {
                    if (auto e = get_int(dvalue, "response_deadline_ms", n)) return *e;
                    cfg.dialogue.response_deadline_ms = static_cast<int>(n);
                } else if (dkey == "retry_backoff_ms") {
                    if (auto e = get_int(dvalue, "retry_backoff_ms", n)) return *e;
                    cfg.dialogue.retry_backoff_ms = static_cast<int>(n);
                } else {
                    return bad("unknown dialogue config key: " + dkey);
                }
            }
        } else {
            return bad("unknown config key: " + key);
        }
    }

    if (!valid(cfg)) {
        return bad("config values are out of range");
    }
    return cfg;
}

Result<PipelineConfig> load_config(const std::string& path) {
    auto text = read_file(path);
    if (!text.ok()) {
        return text.error();
    }
    return parse_config(text.value());
}

}  // namespace crashlink::pipeline

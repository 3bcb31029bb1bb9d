#include "crashlink/gsm.hpp"

#include <cassert>

namespace crashlink::gsm {

namespace {

constexpr char kBodyTerminator = '\x1A';

bool error_line(std::string_view line) {
    return line == "ERROR" || line.starts_with("+CMS ERROR") ||
           line.starts_with("+CME ERROR");
}

// Buffers transport reads and hands out CRLF-delimited lines, recording
// every byte that arrives. Unrelated lines (unsolicited modem chatter,
// garbage) are skipped, not treated as protocol errors.
class LineReader {
public:
    LineReader(SerialTransport& transport, DeliveryReport& report, int deadline_ms)
        : transport_(transport), report_(report), deadline_ms_(deadline_ms) {}

    enum class Status { Ok, ModemError, Timeout };

    // Waits for a line starting with `prefix`. ERROR-class lines fail the
    // attempt immediately.
    Status await_line(std::string_view prefix, std::string& detail) {
        while (true) {
            std::string line;
            while (pop_line(line)) {
                if (line.empty()) {
                    continue;
                }
                if (line.starts_with(prefix)) {
                    return Status::Ok;
                }
                if (error_line(line)) {
                    detail = line;
                    return Status::ModemError;
                }
                // Anything else is chatter; keep waiting.
            }
            if (!fill()) {
                detail = std::string("timeout waiting for ") + std::string(prefix);
                return Status::Timeout;
            }
        }
    }

    // Waits for the "> " body prompt, which arrives without a CRLF tail.
    Status await_prompt(std::string& detail) {
        while (true) {
            std::string line;
            while (peek_line(line)) {
                if (line.empty()) {
                    drop_line();
                    continue;
                }
                if (error_line(line)) {
                    drop_line();
                    detail = line;
                    return Status::ModemError;
                }
                drop_line();  // chatter
            }
            std::size_t start = buf_.find_first_not_of("\r\n");
            std::string_view pending =
                start == std::string::npos ? std::string_view{} : std::string_view(buf_).substr(start);
            if (pending.starts_with("> ")) {
                buf_.erase(0, start + 2);
                return Status::Ok;
            }
            if (!fill()) {
                detail = "timeout waiting for body prompt";
                return Status::Timeout;
            }
        }
    }

    void discard_pending() { buf_.clear(); }

private:
    bool fill() {
        std::string chunk = transport_.read_some(deadline_ms_);
        if (chunk.empty()) {
            return false;
        }
        report_.transcript.push_back({Direction::FromModem, chunk});
        buf_ += chunk;
        return true;
    }

    // A complete line is everything before "\r\n". Returns false while no
    // full line is buffered.
    bool peek_line(std::string& line) {
        std::size_t nl = buf_.find('\n');
        if (nl == std::string::npos) {
            return false;
        }
        line = buf_.substr(0, nl);
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        line_end_ = nl + 1;
        return true;
    }

    void drop_line() { buf_.erase(0, line_end_); }

    bool pop_line(std::string& line) {
        if (!peek_line(line)) {
            return false;
        }
        drop_line();
        return true;
    }

    SerialTransport& transport_;
    DeliveryReport& report_;
    int deadline_ms_;
    std::string buf_;
    std::size_t line_end_ = 0;
};

void send(SerialTransport& transport, DeliveryReport& report, std::string bytes) {
    report.transcript.push_back({Direction::ToModem, bytes});
    transport.write(bytes);
}

// Pull in bytes left over from an earlier failed attempt so they cannot be
// mistaken for replies to the commands of this one. Drained bytes are still
// transcribed.
void drain(SerialTransport& transport, DeliveryReport& report) {
    while (true) {
        std::string chunk = transport.read_some(0);
        if (chunk.empty()) {
            return;
        }
        report.transcript.push_back({Direction::FromModem, chunk});
    }
}

}  // namespace

DeliveryReport send_sms(SerialTransport& transport, std::string_view recipient,
                        std::string_view body, const DialogueConfig& cfg) {
    assert(valid_phone(recipient));
    assert(body.size() <= geo_notify::kSmsMaxBytes);
    assert(body.find(kBodyTerminator) == std::string_view::npos);
    assert(body.find_first_of("\r\n") == std::string_view::npos);

    DeliveryReport report;
    report.recipient = std::string(recipient);
    report.body = std::string(body);

    int total_attempts = cfg.max_retries + 1;
    for (int attempt = 1; attempt <= total_attempts; ++attempt) {
        report.attempts = attempt;
        if (attempt > 1) {
            transport.wait_ms(cfg.retry_backoff_ms);
        }
        drain(transport, report);
        LineReader reader(transport, report, cfg.response_deadline_ms);
        std::string detail;

        send(transport, report, "AT+CMGF=1\r");
        if (reader.await_line("OK", detail) != LineReader::Status::Ok) {
            report.last_error = "text mode setup failed: " + detail;
            continue;
        }

        send(transport, report, "AT+CMGS=\"" + report.recipient + "\"\r");
        if (reader.await_prompt(detail) != LineReader::Status::Ok) {
            report.last_error = "send command rejected: " + detail;
            continue;
        }

        send(transport, report, report.body + kBodyTerminator);
        if (reader.await_line("+CMGS:", detail) != LineReader::Status::Ok) {
            report.last_error = "no send confirmation: " + detail;
            continue;
        }
        if (reader.await_line("OK", detail) != LineReader::Status::Ok) {
            report.last_error = "no final OK: " + detail;
            continue;
        }

        report.success = true;
        report.last_error.clear();
        return report;
    }
    return report;
}

std::vector<DeliveryReport> notify_all(SerialTransport& transport,
                                       const geo_notify::Notification& notification,
                                       const DialogueConfig& cfg) {
    std::vector<DeliveryReport> reports;
    reports.push_back(send_sms(transport, notification.hospital.phone,
                               notification.body, cfg));
    reports.push_back(send_sms(transport, notification.police.phone,
                               notification.body, cfg));
    return reports;
}

std::string transcript_bytes(const std::vector<TranscriptEntry>& transcript,
                             Direction dir) {
    std::string out;
    for (const auto& entry : transcript) {
        if (entry.dir == dir) {
            out += entry.bytes;
        }
    }
    return out;
}

bool transcript_shows_delivery(const std::vector<TranscriptEntry>& transcript) {
    std::string from_modem = transcript_bytes(transcript, Direction::FromModem);
    std::size_t confirm = from_modem.rfind("\r\n+CMGS:");
    if (confirm == std::string::npos) {
        return false;
    }
    return from_modem.find("\r\nOK\r\n", confirm) != std::string::npos;
}

}  // namespace crashlink::gsm

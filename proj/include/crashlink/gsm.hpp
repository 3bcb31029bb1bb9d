// Text-mode SMS dialogue over a byte-oriented serial transport.
//
// One delivery attempt is the fixed exchange:
//
//   -> AT+CMGF=1\r
//   <- \r\nOK\r\n
//   -> AT+CMGS="<recipient>"\r
//   <- \r\n>␠
//   -> <body>\x1A
//   <- \r\n+CMGS: <n>\r\n\r\nOK\r\n
//
// A timeout or an ERROR/+CMS ERROR reply fails the attempt; the dialogue
// backs off and retries from the top, up to max_retries extra attempts.
// Every byte written or read is appended to the transcript in order, so a
// transcript replays the whole exchange including failed attempts.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "crashlink/geo_notify.hpp"
#include "crashlink/telemetry.hpp"

namespace crashlink::gsm {

// Byte pipe to a modem. Implementations must preserve byte order but may
// fragment reads arbitrarily; read_some returning an empty string means the
// deadline expired with nothing available.
class SerialTransport {
public:
    virtual ~SerialTransport() = default;
    virtual void write(std::string_view bytes) = 0;
    virtual std::string read_some(int deadline_ms) = 0;
    // Pause between retry attempts. Simulated transports keep the default
    // no-op so replays do not depend on real time.
    virtual void wait_ms(int) {}
};

enum class Direction { ToModem, FromModem };

struct TranscriptEntry {
    Direction dir = Direction::ToModem;
    std::string bytes;
    friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

struct DialogueConfig {
    int max_retries = 3;            // extra attempts after the first
    int response_deadline_ms = 5000;
    int retry_backoff_ms = 2000;
    friend bool operator==(const DialogueConfig&, const DialogueConfig&) = default;
};

struct DeliveryReport {
    std::string recipient;
    std::string body;
    bool success = false;
    int attempts = 0;               // 1..max_retries+1
    std::vector<TranscriptEntry> transcript;
    std::string last_error;         // empty on success
    friend bool operator==(const DeliveryReport&, const DeliveryReport&) = default;
};

// Runs the dialogue until one attempt succeeds or max_retries+1 attempts
// have failed. Never throws; total failure is reported with success=false.
// Preconditions: valid_phone(recipient); body has no 0x1A and no CR/LF and
// fits one segment.
DeliveryReport send_sms(SerialTransport& transport, std::string_view recipient,
                        std::string_view body, const DialogueConfig& cfg = {});

// One message to the nearest hospital, then one to the nearest police
// station. A failed delivery never skips the remaining recipient.
std::vector<DeliveryReport> notify_all(SerialTransport& transport,
                                       const geo_notify::Notification& notification,
                                       const DialogueConfig& cfg = {});

// Bytes of one direction, concatenated in transcript order.
std::string transcript_bytes(const std::vector<TranscriptEntry>& transcript,
                             Direction dir);

// True when the modem side of the transcript contains a completed send:
// a "+CMGS: <n>" line followed by an "OK" line.
bool transcript_shows_delivery(const std::vector<TranscriptEntry>& transcript);

}  // namespace crashlink::gsm

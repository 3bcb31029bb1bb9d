// Deterministic modem stand-in for tests and trace replay.
//
// The simulator answers the text-mode SMS dialogue: AT and AT+CMGF=1 get
// OK, AT+CMGS="..." opens body capture and returns the "> " prompt, the
// 0x1A terminator closes the body and returns "+CMGS: <n>" plus OK with a
// sequence number counting up from 1. Anything else gets ERROR.
//
// Fault injection is scripted per stimulus. A stimulus is any input the
// modem would answer: each command line and each body terminator counts
// once, in arrival order, starting at index 0. Script lines look like
//
//   cmd_index:4 action:error     # reply "+CMS ERROR: 500" instead
//   cmd_index:7 action:drop      # reply nothing (client times out)
//   cmd_index:9 action:garbage   # reply an unrelated line
//
// '#' comments and blank lines are allowed. Identical script plus identical
// input bytes give identical output bytes.
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crashlink/gsm.hpp"
#include "crashlink/result.hpp"

namespace crashlink::gsm {

enum class FaultAction { Error, Drop, Garbage };

struct FaultScript {
    std::map<int, FaultAction> by_stimulus;
    friend bool operator==(const FaultScript&, const FaultScript&) = default;
};

Result<FaultScript> parse_fault_script(std::string_view text);
Result<FaultScript> load_fault_script(const std::string& path);

class ModemSim {
public:
    explicit ModemSim(FaultScript script = {});

    // Consumes raw bytes from the client and returns whatever the modem
    // emits in response (possibly empty). Input may be fragmented at any
    // byte boundary; responses for several stimuli in one chunk are
    // concatenated in order.
    std::string feed(std::string_view incoming);

    struct SentMessage {
        std::string recipient;
        std::string body;
        friend bool operator==(const SentMessage&, const SentMessage&) = default;
    };

    const std::vector<SentMessage>& sent() const { return sent_; }
    int stimuli_seen() const { return next_stimulus_; }

private:
    std::string respond(const std::string& command);
    std::string finish_body();
    std::optional<FaultAction> take_fault();

    FaultScript script_;
    std::string pending_;
    bool capturing_body_ = false;
    std::string body_;
    std::string body_recipient_;
    int next_stimulus_ = 0;
    int next_sequence_ = 1;
    std::vector<SentMessage> sent_;
};

// SerialTransport backed by a ModemSim. Reads return the simulator's queued
// output; an empty queue reads as a timeout. set_max_chunk caps how many
// bytes one read returns, which is how tests exercise fragmentation; a
// chunker callback can vary the cap per read.
class SimTransport : public SerialTransport {
public:
    explicit SimTransport(ModemSim& sim) : sim_(sim) {}

    void write(std::string_view bytes) override;
    std::string read_some(int deadline_ms) override;

    void set_max_chunk(std::size_t max_chunk) { max_chunk_ = max_chunk; }
    void set_chunker(std::function<std::size_t(std::size_t)> chunker) {
        chunker_ = std::move(chunker);
    }

private:
    ModemSim& sim_;
    std::string rx_;
    std::size_t max_chunk_ = std::string::npos;
    std::function<std::size_t(std::size_t)> chunker_;
};

}  // namespace crashlink::gsm

#include "crashlink/modem_sim.hpp"

#include <charconv>

#include "crashlink/io.hpp"

namespace crashlink::gsm {

namespace {

constexpr char kBodyTerminator = '\x1A';

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

Result<FaultAction> action_from_string(std::string_view text) {
    if (text == "error") return FaultAction::Error;
    if (text == "drop") return FaultAction::Drop;
    if (text == "garbage") return FaultAction::Garbage;
    return Error{ErrCode::ParseError, "unknown fault action: " + std::string(text)};
}

}  // namespace

Result<FaultScript> parse_fault_script(std::string_view text) {
    FaultScript script;
    long line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        std::string_view raw = end == std::string_view::npos
                                   ? text.substr(pos)
                                   : text.substr(pos, end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        std::string_view line = trim(raw);
        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            line = trim(line.substr(0, hash));
        }
        if (line.empty()) {
            continue;
        }

        auto fail = [&](std::string message) {
            Error err{ErrCode::ParseError, std::move(message)};
            err.line = line_no;
            return err;
        };

        std::size_t space = line.find(' ');
        if (space == std::string_view::npos) {
            return fail("expected 'cmd_index:<n> action:<name>'");
        }
        std::string_view first = trim(line.substr(0, space));
        std::string_view second = trim(line.substr(space + 1));
        if (!first.starts_with("cmd_index:") || !second.starts_with("action:")) {
            return fail("expected 'cmd_index:<n> action:<name>'");
        }
        std::string_view index_text = first.substr(10);
        int index = 0;
        auto [p, ec] = std::from_chars(index_text.data(),
                                       index_text.data() + index_text.size(), index);
        if (ec != std::errc{} || p != index_text.data() + index_text.size() || index < 0) {
            return fail("bad stimulus index: " + std::string(index_text));
        }
        auto action = action_from_string(second.substr(7));
        if (!action.ok()) {
            return fail(action.error().message);
        }
        if (script.by_stimulus.contains(index)) {
            return fail("duplicate stimulus index: " + std::string(index_text));
        }
        script.by_stimulus[index] = action.value();
    }
    return script;
}

Result<FaultScript> load_fault_script(const std::string& path) {
    auto text = read_file(path);
    if (!text.ok()) {
        return text.error();
    }
    return parse_fault_script(text.value());
}

ModemSim::ModemSim(FaultScript script) : script_(std::move(script)) {}

std::optional<FaultAction> ModemSim::take_fault() {
    auto it = script_.by_stimulus.find(next_stimulus_);
    ++next_stimulus_;
    if (it == script_.by_stimulus.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string ModemSim::feed(std::string_view incoming) {
    pending_.append(incoming);
    std::string out;
    while (true) {
        if (capturing_body_) {
            std::size_t mark = pending_.find(kBodyTerminator);
            if (mark == std::string::npos) {
                body_ += pending_;
                pending_.clear();
                break;
            }
            body_ += pending_.substr(0, mark);
            pending_.erase(0, mark + 1);
            out += finish_body();
            continue;
        }
        std::size_t cr = pending_.find('\r');
        if (cr == std::string::npos) {
            break;
        }
        std::string command = pending_.substr(0, cr);
        pending_.erase(0, cr + 1);
        if (command.empty()) {
            continue;  // bare CR between commands is ignored, not answered
        }
        out += respond(command);
    }
    return out;
}

std::string ModemSim::respond(const std::string& command) {
    if (auto fault = take_fault()) {
        switch (*fault) {
            case FaultAction::Error: return "\r\n+CMS ERROR: 500\r\n";
            case FaultAction::Drop: return "";
            case FaultAction::Garbage: return "\r\n^BOOT:1297,0,0,0,72\r\n";
        }
    }
    if (command == "AT" || command == "AT+CMGF=1") {
        return "\r\nOK\r\n";
    }
    if (command.starts_with("AT+CMGS=\"") && command.ends_with("\"") &&
        command.size() > 10) {
        capturing_body_ = true;
        body_.clear();
        body_recipient_ = command.substr(9, command.size() - 10);
        return "\r\n> ";
    }
    return "\r\nERROR\r\n";
}

std::string ModemSim::finish_body() {
    capturing_body_ = false;
    std::string body;
    body.swap(body_);
    std::string recipient;
    recipient.swap(body_recipient_);
    if (auto fault = take_fault()) {
        switch (*fault) {
            case FaultAction::Error: return "\r\n+CMS ERROR: 500\r\n";
            case FaultAction::Drop: return "";
            case FaultAction::Garbage: return "\r\n^BOOT:1297,0,0,0,72\r\n";
        }
    }
    sent_.push_back({std::move(recipient), std::move(body)});
    std::string reply = "\r\n+CMGS: " + std::to_string(next_sequence_) + "\r\n\r\nOK\r\n";
    ++next_sequence_;
    return reply;
}

void SimTransport::write(std::string_view bytes) {
    rx_ += sim_.feed(bytes);
}

std::string SimTransport::read_some(int /*deadline_ms*/) {
    if (rx_.empty()) {
        return {};  // deadline expires with nothing on the wire
    }
    std::size_t limit = chunker_ ? chunker_(rx_.size()) : max_chunk_;
    if (limit == 0) {
        limit = 1;
    }
    std::size_t take = std::min(limit, rx_.size());
    std::string chunk = rx_.substr(0, take);
    rx_.erase(0, take);
    return chunk;
}

}  // namespace crashlink::gsm

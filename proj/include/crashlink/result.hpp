// Shared error and result types used across the pipeline.
#pragma once

#include <cassert>
#include <string>
#include <utility>
#include <variant>

namespace crashlink {

enum class ErrCode {
    RangeError,        // numeric value outside its domain (ADC counts, ranges)
    FormatError,       // malformed field (phone numbers, missing '$', ...)
    ChecksumMismatch,  // NMEA checksum disagreement
    Malformed,         // sentence structure broken (missing '*', non-ASCII)
    Unsupported,       // structurally valid sentence of an unhandled type
    NoFix,             // sentence carries no valid position fix
    FieldError,        // unparseable coordinate or field content
    OutOfOrder,        // timestamp regression within one stream
    EmptyKind,         // responder registry has no entry of the wanted kind
    EmptyTrials,       // metrics over an empty record set
    DuplicatePlace,    // repeated place number in one trial set
    ParseError,        // file-level parse failure
    VersionError,      // unrecognized file version
    OrderError,        // trace records not in timestamp order
    IoError,           // file could not be read or written
};

const char* to_string(ErrCode code);

// One error payload shared by every module. `line` is the 1-based source
// line for file parse failures; `expected`/`found` carry the two sides of a
// byte-level mismatch (NMEA checksums). Fields stay at their defaults when
// they do not apply.
struct Error {
    ErrCode code;
    std::string message;
    long line = 0;
    int expected = -1;
    int found = -1;
};

template <typename T>
class [[nodiscard]] Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(Error err) : v_(std::move(err)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const& {
        assert(ok());
        return std::get<T>(v_);
    }
    T& value() & {
        assert(ok());
        return std::get<T>(v_);
    }
    T&& take() && {
        assert(ok());
        return std::get<T>(std::move(v_));
    }

    const Error& error() const {
        assert(!ok());
        return std::get<Error>(v_);
    }

private:
    std::variant<T, Error> v_;
};

}  // namespace crashlink

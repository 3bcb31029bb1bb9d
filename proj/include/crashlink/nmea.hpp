// NMEA 0183 sentence codec for the two sentence types the tracker consumes,
// GGA (fix data) and RMC (recommended minimum).
//
// Wire form: $<talker><type>,<field>,...*hh\r\n where hh is the XOR of every
// payload byte between '$' and '*', printed as two uppercase hex digits.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "crashlink/result.hpp"
#include "crashlink/telemetry.hpp"

namespace crashlink::nmea {

// A structurally valid sentence. `checksum` always equals the XOR of the
// payload; parse computes it and make_sentence derives it, so a value built
// through this module cannot hold a stale checksum.
struct NmeaSentence {
    std::string talker;               // two characters, e.g. "GP"
    std::string type;                 // three characters, e.g. "GGA"
    std::vector<std::string> fields;  // everything after the address, empties kept
    std::uint8_t checksum = 0;
    friend bool operator==(const NmeaSentence&, const NmeaSentence&) = default;
};

// XOR fold over `payload`. Total: any byte string has a checksum; the empty
// payload folds to 0x00.
std::uint8_t checksum(std::string_view payload);

NmeaSentence make_sentence(std::string talker, std::string type,
                           std::vector<std::string> fields);

// Payload as it appears between '$' and '*'.
std::string payload_of(const NmeaSentence& sentence);

bool supported(std::string_view type);

// Errors, in the order they are detected:
//   Malformed        missing '*', bad address shape, non-ASCII bytes
//   ChecksumMismatch stated hex differs from the payload fold; the error
//                    carries expected (computed) and found (stated) bytes
//   Unsupported      valid sentence of a type other than GGA/RMC
Result<NmeaSentence> parse_sentence(const NmeaLine& line);

// Extract a fix. GGA with quality 0 and RMC with status other than 'A'
// yield NoFix; unparseable coordinates yield FieldError. `t` stamps the
// returned fix; NMEA wall-clock fields are ignored.
Result<GeoFix> to_geo_fix(const NmeaSentence& sentence, Timestamp t);

// Canonical wire form including "*hh\r\n". The checksum is recomputed from
// the payload, so serialize(parse(x)) reproduces x for canonical x.
std::string serialize(const NmeaSentence& sentence);

}  // namespace crashlink::nmea

#include "crashlink/nmea.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace crashlink::nmea {

namespace {

Error malformed(std::string message) {
    return Error{ErrCode::Malformed, std::move(message)};
}

Error field_error(std::string message) {
    return Error{ErrCode::FieldError, std::move(message)};
}

bool ascii_printable(char c) {
    return c >= 0x20 && c <= 0x7E;
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

// ddmm.mmmm (or dddmm.mmmm) plus hemisphere letter to signed degrees.
// The integer part up to the last two pre-dot digits is whole degrees; the
// remainder is decimal minutes.
Result<double> parse_coordinate(std::string_view field, std::string_view hemi,
                                bool is_lat) {
    if (field.empty() || hemi.empty()) {
        return field_error("empty coordinate field");
    }
    std::size_t dot = field.find('.');
    if (dot == std::string_view::npos || dot < 2 || dot + 1 >= field.size()) {
        return field_error("coordinate not in ddmm.mmmm form: " + std::string(field));
    }
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (i == dot) continue;
        if (!std::isdigit(static_cast<unsigned char>(field[i]))) {
            return field_error("non-digit in coordinate: " + std::string(field));
        }
    }
    std::size_t deg_digits = dot - 2;
    int degrees = 0;
    if (deg_digits > 0) {
        auto [p, ec] = std::from_chars(field.data(), field.data() + deg_digits, degrees);
        if (ec != std::errc{} || p != field.data() + deg_digits) {
            return field_error("bad degree digits in coordinate: " + std::string(field));
        }
    }
    std::string_view mins = field.substr(deg_digits);
    double minutes = 0.0;
    auto [mp, mec] = std::from_chars(mins.data(), mins.data() + mins.size(), minutes);
    if (mec != std::errc{} || mp != mins.data() + mins.size()) {
        return field_error("bad minute digits in coordinate: " + std::string(field));
    }
    if (minutes >= 60.0) {
        return field_error("minutes not below 60: " + std::string(field));
    }
    double value = degrees + minutes / 60.0;

    char h = hemi[0];
    if (hemi.size() != 1) {
        return field_error("bad hemisphere field: " + std::string(hemi));
    }
    if (is_lat) {
        if (h == 'S') value = -value;
        else if (h != 'N') return field_error("latitude hemisphere must be N or S");
        if (value < -90.0 || value > 90.0) {
            return field_error("latitude out of range: " + std::string(field));
        }
    } else {
        if (h == 'W') value = -value;
        else if (h != 'E') return field_error("longitude hemisphere must be E or W");
        if (value < -180.0 || value > 180.0) {
            return field_error("longitude out of range: " + std::string(field));
        }
    }
    return value;
}

Result<GeoFix> fix_from_coords(std::string_view lat_f, std::string_view lat_h,
                               std::string_view lon_f, std::string_view lon_h,
                               Timestamp t) {
    auto lat = parse_coordinate(lat_f, lat_h, /*is_lat=*/true);
    if (!lat.ok()) {
        return lat.error();
    }
    auto lon = parse_coordinate(lon_f, lon_h, /*is_lat=*/false);
    if (!lon.ok()) {
        return lon.error();
    }
    return GeoFix{lat.value(), lon.value(), t, /*stale=*/false};
}

}  // namespace

std::uint8_t checksum(std::string_view payload) {
    std::uint8_t acc = 0;
    for (char c : payload) {
        acc = static_cast<std::uint8_t>(acc ^ static_cast<unsigned char>(c));
    }
    return acc;
}

NmeaSentence make_sentence(std::string talker, std::string type,
                           std::vector<std::string> fields) {
    NmeaSentence s{std::move(talker), std::move(type), std::move(fields), 0};
    s.checksum = checksum(payload_of(s));
    return s;
}

std::string payload_of(const NmeaSentence& sentence) {
    std::string payload = sentence.talker + sentence.type;
    for (const auto& f : sentence.fields) {
        payload += ',';
        payload += f;
    }
    return payload;
}

bool supported(std::string_view type) {
    return type == "GGA" || type == "RMC";
}

Result<NmeaSentence> parse_sentence(const NmeaLine& line) {
    std::string_view raw = line.raw;
    // Tolerate one trailing terminator in any of the three usual shapes.
    if (raw.ends_with("\r\n")) raw.remove_suffix(2);
    else if (raw.ends_with("\n") || raw.ends_with("\r")) raw.remove_suffix(1);

    if (raw.empty() || raw[0] != '$') {
        return malformed("sentence must start with '$'");
    }
    raw.remove_prefix(1);
    for (char c : raw) {
        if (!ascii_printable(c)) {
            return malformed("non-printable byte in sentence");
        }
    }
    std::size_t star = raw.find('*');
    if (star == std::string_view::npos) {
        return malformed("sentence has no checksum delimiter");
    }
    std::string_view payload = raw.substr(0, star);
    std::string_view hex = raw.substr(star + 1);
    if (hex.size() != 2) {
        return malformed("checksum must be exactly two hex digits");
    }
    int hi = hex_value(hex[0]);
    int lo = hex_value(hex[1]);
    if (hi < 0 || lo < 0) {
        return malformed("checksum digits are not hex");
    }
    int stated = hi * 16 + lo;
    int computed = checksum(payload);
    if (stated != computed) {
        char msg[64];
        std::snprintf(msg, sizeof msg, "checksum mismatch: expected %02X, found %02X",
                      computed, stated);
        Error err{ErrCode::ChecksumMismatch, msg};
        err.expected = computed;
        err.found = stated;
        return err;
    }

    // Address field: exactly five characters, two talker plus three type.
    std::size_t comma = payload.find(',');
    std::string_view address = payload.substr(0, comma == std::string_view::npos ? payload.size() : comma);
    if (address.size() != 5) {
        return malformed("address must be five characters: " + std::string(address));
    }
    if (address.find_first_of("*$") != std::string_view::npos) {
        return malformed("address contains reserved characters");
    }

    NmeaSentence sentence;
    sentence.talker = std::string(address.substr(0, 2));
    sentence.type = std::string(address.substr(2));
    sentence.checksum = static_cast<std::uint8_t>(computed);
    if (comma != std::string_view::npos) {
        std::string_view rest = payload.substr(comma + 1);
        while (true) {
            std::size_t next = rest.find(',');
            if (next == std::string_view::npos) {
                sentence.fields.emplace_back(rest);
                break;
            }
            sentence.fields.emplace_back(rest.substr(0, next));
            rest.remove_prefix(next + 1);
        }
    }

    if (!supported(sentence.type)) {
        return Error{ErrCode::Unsupported, "unsupported sentence type: " + sentence.type};
    }
    return sentence;
}

Result<GeoFix> to_geo_fix(const NmeaSentence& sentence, Timestamp t) {
    if (sentence.type == "GGA") {
        // 0:time 1:lat 2:N/S 3:lon 4:E/W 5:quality ...
        if (sentence.fields.size() < 6) {
            return field_error("GGA sentence too short");
        }
        const std::string& quality = sentence.fields[5];
        if (quality.empty() || quality == "0") {
            return Error{ErrCode::NoFix, "GGA reports no fix (quality 0)"};
        }
        return fix_from_coords(sentence.fields[1], sentence.fields[2],
                               sentence.fields[3], sentence.fields[4], t);
    }
    if (sentence.type == "RMC") {
        // 0:time 1:status 2:lat 3:N/S 4:lon 5:E/W ...
        if (sentence.fields.size() < 6) {
            return field_error("RMC sentence too short");
        }
        if (sentence.fields[1] != "A") {
            return Error{ErrCode::NoFix, "RMC status is not active"};
        }
        return fix_from_coords(sentence.fields[2], sentence.fields[3],
                               sentence.fields[4], sentence.fields[5], t);
    }
    return Error{ErrCode::Unsupported, "no fix extraction for type: " + sentence.type};
}

std::string serialize(const NmeaSentence& sentence) {
    std::string payload = payload_of(sentence);
    char tail[8];
    std::snprintf(tail, sizeof tail, "*%02X\r\n", checksum(payload));
    return "$" + payload + tail;
}

}  // namespace crashlink::nmea

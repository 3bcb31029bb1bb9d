#include "support/oracles.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>

#include "crashlink/nmea.hpp"

namespace oracles {

namespace {
constexpr double kRadiusM = 6'371'000.0;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

double law_of_cosines_m(crashlink::LatLon a, crashlink::LatLon b) {
    double p1 = a.lat * kPi / 180.0;
    double p2 = b.lat * kPi / 180.0;
    double dl = (b.lon - a.lon) * kPi / 180.0;
    double c = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return kRadiusM * std::acos(c);
}

long double exact_coordinate(std::string_view field) {
    std::size_t dot = field.find('.');
    assert(dot != std::string_view::npos && dot >= 2);

    long long degrees = 0;
    for (std::size_t i = 0; i + 2 < dot; ++i) {
        degrees = degrees * 10 + (field[i] - '0');
    }
    long long minute_digits = 0;
    long long scale = 1;
    for (std::size_t i = dot - 2; i < field.size(); ++i) {
        if (field[i] == '.') continue;
        minute_digits = minute_digits * 10 + (field[i] - '0');
        if (i > dot) scale *= 10;
    }
    // minutes = minute_digits / scale; degrees + minutes / 60
    return static_cast<long double>(degrees) +
           static_cast<long double>(minute_digits) /
               (60.0L * static_cast<long double>(scale));
}

std::vector<std::size_t> reference_tilt_positions(const std::vector<int>& values,
                                                  int threshold, int debounce,
                                                  int margin) {
    // Collect maximal runs of at-or-above samples.
    struct Run {
        std::size_t start;
        std::size_t length;
    };
    std::vector<Run> runs;
    std::size_t i = 0;
    while (i < values.size()) {
        if (values[i] >= threshold) {
            std::size_t start = i;
            while (i < values.size() && values[i] >= threshold) ++i;
            runs.push_back({start, i - start});
        } else {
            ++i;
        }
    }

    std::vector<std::size_t> positions;
    bool armed = true;
    std::size_t scan_from = 0;
    for (const Run& run : runs) {
        if (!armed) {
            for (std::size_t j = scan_from; j < run.start; ++j) {
                if (values[j] < threshold - margin) {
                    armed = true;
                    break;
                }
            }
        }
        if (armed && run.length >= static_cast<std::size_t>(debounce)) {
            positions.push_back(run.start + debounce - 1);
            armed = false;
            scan_from = run.start + run.length;
        }
    }
    return positions;
}

std::vector<std::size_t> reference_proximity_positions(
    const std::vector<double>& ranges, double proximity_cm) {
    std::vector<std::size_t> positions;
    bool latched = false;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (ranges[i] < proximity_cm && !latched) {
            positions.push_back(i);
            latched = true;
        } else if (latched && ranges[i] >= 2.0 * proximity_cm) {
            latched = false;
        }
    }
    return positions;
}

std::uint8_t xor_fold(std::string_view payload) {
    unsigned acc = 0;
    for (unsigned char c : payload) {
        acc ^= c;
    }
    return static_cast<std::uint8_t>(acc);
}

std::size_t reference_nearest_index(const std::vector<crashlink::Responder>& all,
                                    crashlink::LatLon from,
                                    crashlink::ResponderKind kind) {
    std::size_t best = all.size();
    double best_d = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (all[i].kind != kind) continue;
        double d = law_of_cosines_m(from, all[i].location);
        if (best == all.size() || d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

GeneratedSentence random_fix_sentence(std::mt19937& engine) {
    auto pick = [&](unsigned n) { return static_cast<int>(engine() % n); };

    GeneratedSentence out;
    out.is_gga = pick(2) == 0;
    out.has_fix = pick(10) != 0;  // one in ten carries no fix

    char lat_buf[16];
    char lon_buf[16];
    std::snprintf(lat_buf, sizeof lat_buf, "%02d%02d.%04d", pick(90), pick(60),
                  pick(10000));
    std::snprintf(lon_buf, sizeof lon_buf, "%03d%02d.%04d", pick(180), pick(60),
                  pick(10000));
    bool south = pick(2) == 0;
    bool west = pick(2) == 0;
    out.lat = exact_coordinate(lat_buf) * (south ? -1.0L : 1.0L);
    out.lon = exact_coordinate(lon_buf) * (west ? -1.0L : 1.0L);

    char time_buf[8];
    std::snprintf(time_buf, sizeof time_buf, "%02d%02d%02d", pick(24), pick(60),
                  pick(60));

    const char* talker = pick(3) == 0 ? "GN" : "GP";
    crashlink::nmea::NmeaSentence sentence;
    if (out.is_gga) {
        std::string quality = out.has_fix ? std::to_string(1 + pick(2)) : "0";
        sentence = crashlink::nmea::make_sentence(
            talker, "GGA",
            {time_buf, lat_buf, south ? "S" : "N", lon_buf, west ? "W" : "E",
             quality, "08", "0.9", "12.0", "M", "0.0", "M", "", ""});
    } else {
        sentence = crashlink::nmea::make_sentence(
            talker, "RMC",
            {time_buf, out.has_fix ? "A" : "V", lat_buf, south ? "S" : "N", lon_buf,
             west ? "W" : "E", "0.5", "054.7", "190826", "", ""});
    }
    out.raw = crashlink::nmea::serialize(sentence);
    return out;
}

std::vector<crashlink::metrics::TrialRecord> field_trial_rows() {
    std::vector<crashlink::metrics::TrialRecord> rows;
    for (int place = 1; place <= 20; ++place) {
        crashlink::metrics::TrialRecord row;
        row.place_no = place;
        row.detected = place != 6;
        row.located = place != 9 && place != 15;
        row.notified = true;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace oracles

#include "crashlink/synth.hpp"

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "crashlink/detection.hpp"
#include "crashlink/nmea.hpp"

namespace crashlink::synth {

namespace {

constexpr std::int64_t kDurationMs = 60'000;
constexpr std::int64_t kAccelPeriodMs = 100;
constexpr std::int64_t kUltraPeriodMs = 500;
constexpr std::int64_t kGpsPeriodMs = 1'000;

// Nominal resting counts sit safely below both thresholds and below the
// re-arm bands (thresholds 310/340, margin 10), so a trace returns to a
// fully armed detector after every excursion.
constexpr int kNominalX = 275;
constexpr int kNominalY = 305;
constexpr int kNominalZ = 380;
constexpr int kNominalJitter = 8;

// Draws derive from raw engine output instead of std::*_distribution so the
// byte stream does not depend on the standard library's distribution
// implementations.
struct Rng {
    std::mt19937 engine;

    explicit Rng(std::uint32_t seed) : engine(seed) {}

    int range(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(engine() % static_cast<std::uint32_t>(hi - lo + 1));
    }

    double unit() { return engine() * (1.0 / 4294967296.0); }

    double real(double lo, double hi) { return lo + (hi - lo) * unit(); }
};

std::string ddmm(double value, int degree_digits) {
    int degrees = static_cast<int>(value);
    double minutes = (value - degrees) * 60.0;
    if (minutes >= 59.99995) {  // would print as 60.0000 after rounding
        degrees += 1;
        minutes = 0.0;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%0*d%07.4f", degree_digits, degrees, minutes);
    return buf;
}

std::string gps_time(std::int64_t millis) {
    long seconds = 43'200 + static_cast<long>(millis / 1000);  // noon start
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02ld%02ld%02ld", seconds / 3600,
                  (seconds % 3600) / 60, seconds % 60);
    return buf;
}

std::string fix_sentence(std::int64_t millis, double lat, double lon) {
    std::string time = gps_time(millis);
    std::string lat_f = ddmm(lat, 2);
    std::string lon_f = ddmm(lon, 3);
    nmea::NmeaSentence s;
    if (millis % (2 * kGpsPeriodMs) == 0) {
        s = nmea::make_sentence("GP", "GGA",
                                {time, lat_f, "N", lon_f, "E", "1", "08", "0.9",
                                 "12.0", "M", "0.0", "M", "", ""});
    } else {
        s = nmea::make_sentence("GP", "RMC",
                                {time, "A", lat_f, "N", lon_f, "E", "0.5", "054.7",
                                 "190826", "", ""});
    }
    std::string raw = nmea::serialize(s);
    raw.resize(raw.size() - 2);  // trace lines carry no CRLF of their own
    return raw;
}

std::string no_fix_sentence(std::int64_t millis) {
    std::string time = gps_time(millis);
    nmea::NmeaSentence s;
    if (millis % (2 * kGpsPeriodMs) == 0) {
        s = nmea::make_sentence("GP", "GGA",
                                {time, "", "", "", "", "0", "00", "", "", "M", "",
                                 "M", "", ""});
    } else {
        s = nmea::make_sentence("GP", "RMC", {time, "V", "", "", "", "", "", "",
                                              "190826", "", ""});
    }
    std::string raw = nmea::serialize(s);
    raw.resize(raw.size() - 2);
    return raw;
}

struct Excursion {
    std::int64_t start_ms = -1;
    std::int64_t end_ms = -1;  // half-open
    bool on_x = true;
    int value = 0;

    bool covers(std::int64_t t) const { return t >= start_ms && t < end_ms; }
};

}  // namespace

const char* to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::CleanCrash: return "clean_crash";
        case Scenario::NoGpsCrash: return "no_gps_crash";
        case Scenario::SpikeCrash: return "spike_crash";
        case Scenario::ProximityOnly: return "proximity_only";
        case Scenario::Quiet: return "quiet";
    }
    return "?";
}

Result<Scenario> scenario_from_string(std::string_view text) {
    if (text == "clean_crash") return Scenario::CleanCrash;
    if (text == "no_gps_crash") return Scenario::NoGpsCrash;
    if (text == "spike_crash") return Scenario::SpikeCrash;
    if (text == "proximity_only") return Scenario::ProximityOnly;
    if (text == "quiet") return Scenario::Quiet;
    return Error{ErrCode::FormatError, "unknown scenario: " + std::string(text)};
}

trace::TraceFile synthesize_trace(Scenario scenario, std::uint32_t seed) {
    Rng rng(seed);
    trace::TraceFile out;
    out.vehicle_id = "SIM-" + std::to_string(seed);

    bool gps_live = scenario != Scenario::NoGpsCrash;
    bool gps_present = true;
    bool proximity = scenario == Scenario::ProximityOnly;

    // Excursion placement is aligned to the accelerometer grid.
    std::vector<Excursion> excursions;
    int debounce = detection::DetectionConfig{}.debounce_samples;
    if (scenario == Scenario::CleanCrash || scenario == Scenario::NoGpsCrash) {
        Excursion e;
        e.start_ms = rng.range(200, 400) * kAccelPeriodMs;  // 20s..40s
        int length = debounce + rng.range(1, 3);
        e.end_ms = e.start_ms + length * kAccelPeriodMs;
        e.on_x = rng.range(0, 1) == 0;
        int threshold = e.on_x ? detection::DetectionConfig{}.threshold_x
                               : detection::DetectionConfig{}.threshold_y;
        e.value = threshold + rng.range(10, 60);
        excursions.push_back(e);
        out.staged = 1;
    } else if (scenario == Scenario::SpikeCrash) {
        // Each burst is one sample short of the debounce length.
        std::int64_t first = rng.range(200, 300) * kAccelPeriodMs;
        for (int i = 0; i < 2; ++i) {
            Excursion e;
            e.start_ms = first + i * 5'000;
            e.end_ms = e.start_ms + (debounce - 1) * kAccelPeriodMs;
            e.on_x = rng.range(0, 1) == 0;
            int threshold = e.on_x ? detection::DetectionConfig{}.threshold_x
                                   : detection::DetectionConfig{}.threshold_y;
            e.value = threshold + rng.range(10, 60);
            excursions.push_back(e);
        }
        out.staged = 1;
    }

    double lat = rng.real(22.0, 24.0);
    double lon = rng.real(90.0, 92.0);

    for (std::int64_t t = 0; t <= kDurationMs; t += kAccelPeriodMs) {
        if (gps_present && t % kGpsPeriodMs == 0) {
            lat += rng.real(-0.0004, 0.0004);
            lon += rng.real(-0.0004, 0.0004);
            std::string raw = gps_live ? fix_sentence(t, lat, lon) : no_fix_sentence(t);
            out.records.push_back({0, NmeaLine{Timestamp{t}, std::move(raw)}});
        }
        if (t % kUltraPeriodMs == 0) {
            UltrasonicSample u;
            u.t = Timestamp{t};
            u.sensor = (t / kUltraPeriodMs) % 2 == 0 ? SensorPosition::Front
                                                     : SensorPosition::Rear;
            u.range_cm = proximity ? rng.real(2.0, 4.8) : rng.real(60.0, 250.0);
            out.records.push_back({0, u});
        }
        AccelSample a;
        a.t = Timestamp{t};
        a.x = kNominalX + rng.range(-kNominalJitter, kNominalJitter);
        a.y = kNominalY + rng.range(-kNominalJitter, kNominalJitter);
        a.z = kNominalZ + rng.range(-kNominalJitter, kNominalJitter);
        for (const auto& e : excursions) {
            if (e.covers(t)) {
                (e.on_x ? a.x : a.y) = e.value + rng.range(-3, 3);
            }
        }
        out.records.push_back({0, a});
    }
    return out;
}

}  // namespace crashlink::synth

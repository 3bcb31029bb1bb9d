#include "crashlink/geo_notify.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "crashlink/io.hpp"

namespace crashlink::geo_notify {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

Error parse_error(long line, std::string message) {
    Error err{ErrCode::ParseError, std::move(message)};
    err.line = line;
    return err;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view text, double& out) {
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && p == text.data() + text.size();
}

}  // namespace

double haversine_m(LatLon a, LatLon b) {
    double lat1 = a.lat * kDegToRad;
    double lat2 = b.lat * kDegToRad;
    double dlat = (b.lat - a.lat) * kDegToRad;
    double dlon = (b.lon - a.lon) * kDegToRad;
    double s1 = std::sin(dlat / 2.0);
    double s2 = std::sin(dlon / 2.0);
    double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
    if (h > 1.0) h = 1.0;  // guard asin domain against rounding
    return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

Result<ResponderRegistry> parse_registry(std::string_view text) {
    ResponderRegistry registry;
    long line_no = 0;
    std::size_t pos = 0;
    bool saw_hospital = false;
    bool saw_police = false;

    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        std::string_view raw = end == std::string_view::npos
                                   ? text.substr(pos)
                                   : text.substr(pos, end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }

        std::vector<std::string_view> cols;
        std::string_view rest = line;
        while (true) {
            std::size_t comma = rest.find(',');
            if (comma == std::string_view::npos) {
                cols.push_back(trim(rest));
                break;
            }
            cols.push_back(trim(rest.substr(0, comma)));
            rest.remove_prefix(comma + 1);
        }
        if (cols.size() != 6) {
            return parse_error(line_no, "expected 6 comma-separated fields, got " +
                                            std::to_string(cols.size()));
        }

        Responder r;
        r.id = std::string(cols[0]);
        auto kind = responder_kind_from_string(cols[1]);
        if (!kind.ok()) {
            return parse_error(line_no, kind.error().message);
        }
        r.kind = kind.value();
        r.name = std::string(cols[2]);
        r.phone = std::string(cols[3]);
        if (!parse_double(cols[4], r.location.lat) || !parse_double(cols[5], r.location.lon)) {
            return parse_error(line_no, "latitude/longitude are not numbers");
        }
        auto checked = validate(r);
        if (!checked.ok()) {
            Error err = checked.error();
            err.line = line_no;
            return err;
        }
        for (const auto& existing : registry.responders) {
            if (existing.id == r.id) {
                return parse_error(line_no, "duplicate responder id: " + r.id);
            }
        }
        saw_hospital = saw_hospital || r.kind == ResponderKind::Hospital;
        saw_police = saw_police || r.kind == ResponderKind::Police;
        registry.responders.push_back(std::move(r));
    }

    if (!saw_hospital || !saw_police) {
        return Error{ErrCode::EmptyKind,
                     "registry needs at least one hospital and one police entry"};
    }
    return registry;
}

Result<ResponderRegistry> load_registry(const std::string& path) {
    auto text = read_file(path);
    if (!text.ok()) {
        return text.error();
    }
    return parse_registry(text.value());
}

Result<Responder> nearest(const ResponderRegistry& registry, LatLon from,
                          ResponderKind kind) {
    const Responder* best = nullptr;
    double best_distance = 0.0;
    for (const auto& r : registry.responders) {
        if (r.kind != kind) {
            continue;
        }
        double d = haversine_m(from, r.location);
        if (best == nullptr || d < best_distance) {
            best = &r;
            best_distance = d;
        }
    }
    if (best == nullptr) {
        return Error{ErrCode::EmptyKind,
                     std::string("no responder of kind ") + to_string(kind)};
    }
    return *best;
}

std::string maps_link(const GeoFix& fix) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "http://maps.google.com/?q=%.6f,%.6f", fix.lat,
                  fix.lon);
    return buf;
}

Result<Notification> compose(const DetectionEvent& event, const GeoFix& fix,
                             const ResponderRegistry& registry,
                             std::string_view vehicle_id) {
    assert(event.kind == EventKind::TiltAccident);

    auto hospital = nearest(registry, LatLon{fix.lat, fix.lon}, ResponderKind::Hospital);
    if (!hospital.ok()) {
        return hospital.error();
    }
    auto police = nearest(registry, LatLon{fix.lat, fix.lon}, ResponderKind::Police);
    if (!police.ok()) {
        return police.error();
    }

    Notification n;
    n.event = event;
    n.fix = fix;
    n.hospital = hospital.value();
    n.police = police.value();
    n.link = maps_link(fix);

    char seconds[40];
    std::snprintf(seconds, sizeof seconds, "%.1f", event.t.millis / 1000.0);

    // "ACCIDENT " id " t=" seconds "s " link [" STALE"]
    std::size_t fixed = 9 + 3 + std::char_traits<char>::length(seconds) + 2 +
                        n.link.size() + (fix.stale ? 6 : 0);
    assert(fixed <= kSmsMaxBytes);  // holds for any in-range fix and timestamp
    std::size_t id_budget = kSmsMaxBytes - fixed;
    std::string id(vehicle_id.substr(0, id_budget));

    n.body = "ACCIDENT " + id + " t=" + seconds + "s " + n.link;
    if (fix.stale) {
        n.body += " STALE";
    }
    assert(n.body.size() <= kSmsMaxBytes);
    return n;
}

}  // namespace crashlink::geo_notify

// Great-circle distance, nearest-responder selection and SMS body
// composition.
//
// The responder registry is a CSV file, one entry per line:
//   id,kind,name,phone,lat,lon
// kind is "hospital" or "police"; '#' lines and blank lines are skipped.
// A usable registry holds at least one responder of each kind and ids are
// unique.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "crashlink/result.hpp"
#include "crashlink/telemetry.hpp"

namespace crashlink::geo_notify {

inline constexpr double kEarthRadiusM = 6'371'000.0;
inline constexpr std::size_t kSmsMaxBytes = 160;  // single GSM text segment

// Haversine great-circle distance in meters on a sphere of kEarthRadiusM.
double haversine_m(LatLon a, LatLon b);

struct ResponderRegistry {
    std::vector<Responder> responders;  // in file order
    friend bool operator==(const ResponderRegistry&, const ResponderRegistry&) = default;
};

Result<ResponderRegistry> parse_registry(std::string_view text);
Result<ResponderRegistry> load_registry(const std::string& path);

// Closest responder of `kind` by haversine distance. Ties keep the earliest
// entry in registry order. EmptyKind if no responder of that kind exists.
Result<Responder> nearest(const ResponderRegistry& registry, LatLon from,
                          ResponderKind kind);

// Exactly "http://maps.google.com/?q=<lat>,<lon>" with six decimals each.
std::string maps_link(const GeoFix& fix);

struct Notification {
    DetectionEvent event;
    GeoFix fix;
    Responder hospital;
    Responder police;
    std::string link;
    std::string body;
    friend bool operator==(const Notification&, const Notification&) = default;
};

// Body layout: "ACCIDENT <vehicle_id> t=<seconds>s <link>" with one decimal
// of seconds, plus " STALE" when the fix is stale. Guaranteed to fit in one
// segment: the vehicle id is truncated first, the link never is.
Result<Notification> compose(const DetectionEvent& event, const GeoFix& fix,
                             const ResponderRegistry& registry,
                             std::string_view vehicle_id);

}  // namespace crashlink::geo_notify

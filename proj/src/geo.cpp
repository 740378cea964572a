#include "fairtask/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fairtask {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double dlat = lat2 - lat1;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double s = std::sin(dlat / 2.0);
  const double t = std::sin(dlon / 2.0);
  const double h = s * s + std::cos(lat1) * std::cos(lat2) * t * t;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
}

bool HaversineMetric::within(const GeoPoint& a, const GeoPoint& b,
                             double radius) const {
  // Great-circle distance is at least the latitude arc. The slack factor
  // keeps rounding from rejecting a point on the boundary.
  const double lat_arc = std::abs(a.lat - b.lat) * kDegToRad * kEarthRadiusKm;
  if (lat_arc * (1.0 - 1e-9) > radius) return false;
  return haversine_km(a, b) <= radius;
}

double PlanarMetric::distance(const GeoPoint& a, const GeoPoint& b) const {
  return std::hypot(a.lon - b.lon, a.lat - b.lat);
}

}  // namespace fairtask

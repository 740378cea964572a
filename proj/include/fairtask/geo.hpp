#ifndef FAIRTASK_GEO_HPP_
#define FAIRTASK_GEO_HPP_

#include "fairtask/types.hpp"

namespace fairtask {

inline constexpr double kEarthRadiusKm = 6371.0088;

/// Great-circle distance in km.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

/// Distance function used for disk membership and movement costs. Any
/// implementation must satisfy the triangle inequality, which keeps the
/// acceptance probability within (0, base].
class DistanceMetric {
 public:
  virtual ~DistanceMetric() = default;
  virtual double distance(const GeoPoint& a, const GeoPoint& b) const = 0;
  /// dist(a, b) <= radius, boundary inclusive.
  virtual bool within(const GeoPoint& a, const GeoPoint& b,
                      double radius) const {
    return distance(a, b) <= radius;
  }
};

class HaversineMetric final : public DistanceMetric {
 public:
  double distance(const GeoPoint& a, const GeoPoint& b) const override {
    return haversine_km(a, b);
  }
  // Rejects on the meridional lower bound before paying for the trig.
  bool within(const GeoPoint& a, const GeoPoint& b,
              double radius) const override;
};

/// Euclidean distance treating (lon, lat) as (x, y) in km. Test metric.
class PlanarMetric final : public DistanceMetric {
 public:
  double distance(const GeoPoint& a, const GeoPoint& b) const override;
};

}  // namespace fairtask

#endif  // FAIRTASK_GEO_HPP_

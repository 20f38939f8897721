#include "fleetplace/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fleetplace {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

bool valid(const GeoPoint& p) {
  return p.lat_deg >= -90.0 && p.lat_deg <= 90.0 && p.lon_deg >= -180.0 &&
         p.lon_deg <= 180.0;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b, double radius_km) {
  const double phi_a = a.lat_deg * kDegToRad;
  const double phi_b = b.lat_deg * kDegToRad;
  // Absolute differences keep the result exactly symmetric in a and b.
  const double half_dphi = 0.5 * std::abs(b.lat_deg - a.lat_deg) * kDegToRad;
  const double half_dpsi = 0.5 * std::abs(b.lon_deg - a.lon_deg) * kDegToRad;

  const double s_lat = std::sin(half_dphi);
  const double s_lon = std::sin(half_dpsi);
  const double h = s_lat * s_lat + std::cos(phi_a) * std::cos(phi_b) * s_lon * s_lon;
  // Rounding can push h a hair above 1 for near-antipodal pairs.
  return 2.0 * radius_km * std::asin(std::min(1.0, std::sqrt(h)));
}

double mission_cost_km(const GeoPoint& base, const GeoPoint& pickup,
                       const GeoPoint& delivery, double radius_km) {
  return haversine_km(base, pickup, radius_km) +
         haversine_km(base, delivery, radius_km);
}

}  // namespace fleetplace

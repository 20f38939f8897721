#pragma once

namespace fleetplace {

// IUGG mean Earth radius in kilometres. Every distance produced by the
// library is scaled by this value unless a caller overrides it.
inline constexpr double kEarthRadiusKm = 6371.0088;

// Position in decimal degrees.
struct GeoPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

// lat in [-90, 90], lon in [-180, 180].
bool valid(const GeoPoint& p);

// Great-circle distance in kilometres. Exactly symmetric in its arguments
// and exactly zero for identical points.
double haversine_km(const GeoPoint& a, const GeoPoint& b,
                    double radius_km = kEarthRadiusKm);

// Round trip charged to a base serving a mission: base->pickup plus
// base->delivery. The pickup->delivery leg is deliberately excluded; it is
// flown no matter which base serves the mission.
double mission_cost_km(const GeoPoint& base, const GeoPoint& pickup,
                       const GeoPoint& delivery,
                       double radius_km = kEarthRadiusKm);

}  // namespace fleetplace

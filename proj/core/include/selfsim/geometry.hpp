#pragma once

#include <optional>
#include <string>
#include <vector>

#include "selfsim/contraction.hpp"

namespace selfsim {

/// Open witness regions for the open set condition: axis boxes, balls,
/// convex polygons (2D), finite unions, or the interior of the hull ball.
/// Containment and disjointness tests are exact for these shapes; affine
/// images are exact for boxes/polygons always and for balls under
/// similarity maps.
struct Region {
  enum class Kind { Box, Ball, Polygon, Union, HullInterior };

  Kind kind = Kind::Box;
  Vec lo, hi;                   // Box
  Vec center;                   // Ball
  double radius = 0.0;          // Ball
  std::vector<Vec> vertices;    // Polygon, counter-clockwise
  std::vector<Region> parts;    // Union

  static Region box(Vec lo, Vec hi);
  static Region ball(Vec center, double radius);
  static Region polygon(std::vector<Vec> vertices);
  static Region union_of(std::vector<Region> parts);
  static Region hull_interior();

  int dimension() const;
  std::string describe() const;
};

/// Exact affine image. Boxes in 2D become polygons under non-axis maps;
/// balls require a similarity map (throws InvalidInputError otherwise).
Region map_region(const ContractionMap& map, const Region& region);

/// Closed containment of closures; for convex open sets this is equivalent
/// to containment of the open sets themselves.
bool region_contains(const Region& outer, const Region& inner, double eps = 1e-12);

/// Open-set disjointness: touching boundaries still count as disjoint.
bool regions_disjoint(const Region& a, const Region& b, double eps = 1e-12);

bool region_contains_point(const Region& region, const Vec& p, double eps = 1e-12);

/// Deterministic probe points (vertices, centers, edge midpoints) used to
/// produce witness points for failed containment.
std::vector<Vec> region_probe_points(const Region& region);

/// A point in the closed intersection of two overlapping regions, when one
/// of the deterministic probes finds one.
std::optional<Vec> overlap_witness(const Region& a, const Region& b);

}  // namespace selfsim

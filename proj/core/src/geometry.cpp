#include "selfsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selfsim/errors.hpp"

namespace selfsim {

namespace {

double cross2(const Vec& a, const Vec& b) { return a(0) * b(1) - a(1) * b(0); }

void ensure_ccw(std::vector<Vec>& verts) {
  double area2 = 0.0;
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const Vec& p = verts[k];
    const Vec& q = verts[(k + 1) % verts.size()];
    area2 += p(0) * q(1) - q(0) * p(1);
  }
  if (area2 < 0.0) std::reverse(verts.begin(), verts.end());
}

std::vector<Vec> box_corners(const Region& b) {
  std::vector<Vec> out;
  if (b.lo.size() == 1) {
    out.push_back(b.lo);
    out.push_back(b.hi);
  } else if (b.lo.size() == 2) {
    Vec v(2);
    v << b.lo(0), b.lo(1); out.push_back(v);
    v << b.hi(0), b.lo(1); out.push_back(v);
    v << b.hi(0), b.hi(1); out.push_back(v);
    v << b.lo(0), b.hi(1); out.push_back(v);
  } else {
    throw InvalidInputError("box regions supported in dimensions 1 and 2 only");
  }
  return out;
}

Region box_as_polygon(const Region& b) {
  if (b.lo.size() != 2) throw InternalError("box_as_polygon needs dimension 2");
  return Region::polygon(box_corners(b));
}

bool point_in_polygon(const std::vector<Vec>& verts, const Vec& p, double eps) {
  for (std::size_t k = 0; k < verts.size(); ++k) {
    Vec e = verts[(k + 1) % verts.size()] - verts[k];
    Vec d = p - verts[k];
    if (cross2(e, d) < -eps) return false;
  }
  return true;
}

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
  Vec ab = b - a;
  double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

double point_polygon_distance(const std::vector<Vec>& verts, const Vec& p, double eps) {
  if (point_in_polygon(verts, p, eps)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < verts.size(); ++k)
    best = std::min(best, point_segment_distance(p, verts[k], verts[(k + 1) % verts.size()]));
  return best;
}

// Separating-axis test over the edge normals of both polygons. Touching
// boundaries count as separated, matching open-set disjointness.
bool polygons_disjoint(const std::vector<Vec>& a, const std::vector<Vec>& b, double eps) {
  auto try_axes = [&](const std::vector<Vec>& poly) {
    for (std::size_t k = 0; k < poly.size(); ++k) {
      Vec e = poly[(k + 1) % poly.size()] - poly[k];
      Vec n(2);
      n << -e(1), e(0);
      double norm = n.norm();
      if (norm == 0.0) continue;
      n /= norm;
      double amin = std::numeric_limits<double>::infinity(), amax = -amin;
      double bmin = amin, bmax = -amin;
      for (const Vec& v : a) {
        double t = n.dot(v);
        amin = std::min(amin, t);
        amax = std::max(amax, t);
      }
      for (const Vec& v : b) {
        double t = n.dot(v);
        bmin = std::min(bmin, t);
        bmax = std::max(bmax, t);
      }
      if (amax <= bmin + eps || bmax <= amin + eps) return true;
    }
    return false;
  };
  return try_axes(a) || try_axes(b);
}

}  // namespace

Region Region::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size()) throw InvalidInputError("box corner dimensions differ");
  for (int k = 0; k < lo.size(); ++k)
    if (!(lo(k) < hi(k))) throw InvalidInputError("box needs lo < hi in every coordinate");
  Region r;
  r.kind = Kind::Box;
  r.lo = std::move(lo);
  r.hi = std::move(hi);
  return r;
}

Region Region::ball(Vec center, double radius) {
  if (!(radius > 0.0)) throw InvalidInputError("ball radius must be positive");
  Region r;
  r.kind = Kind::Ball;
  r.center = std::move(center);
  r.radius = radius;
  return r;
}

Region Region::polygon(std::vector<Vec> vertices) {
  if (vertices.size() < 3) throw InvalidInputError("polygon needs at least three vertices");
  for (const auto& v : vertices)
    if (v.size() != 2) throw InvalidInputError("polygon regions live in dimension 2");
  ensure_ccw(vertices);
  Region r;
  r.kind = Kind::Polygon;
  r.vertices = std::move(vertices);
  return r;
}

Region Region::union_of(std::vector<Region> parts) {
  if (parts.empty()) throw InvalidInputError("union region needs at least one part");
  Region r;
  r.kind = Kind::Union;
  r.parts = std::move(parts);
  return r;
}

Region Region::hull_interior() {
  Region r;
  r.kind = Kind::HullInterior;
  return r;
}

int Region::dimension() const {
  switch (kind) {
    case Kind::Box: return static_cast<int>(lo.size());
    case Kind::Ball: return static_cast<int>(center.size());
    case Kind::Polygon: return 2;
    case Kind::Union: return parts.front().dimension();
    case Kind::HullInterior: return 0;
  }
  return 0;
}

std::string Region::describe() const {
  switch (kind) {
    case Kind::Box: return "box";
    case Kind::Ball: return "ball";
    case Kind::Polygon: return "polygon";
    case Kind::Union: return "union(" + std::to_string(parts.size()) + ")";
    case Kind::HullInterior: return "hull-interior";
  }
  return "?";
}

Region map_region(const ContractionMap& map, const Region& region) {
  switch (region.kind) {
    case Region::Kind::Box: {
      if (region.lo.size() == 1) {
        double a = map.apply(region.lo)(0);
        double b = map.apply(region.hi)(0);
        Vec lo(1), hi(1);
        lo << std::min(a, b);
        hi << std::max(a, b);
        return Region::box(lo, hi);
      }
      return map_region(map, box_as_polygon(region));
    }
    case Region::Kind::Ball: {
      if (!map.is_similarity())
        throw InvalidInputError("ball image is exact only under similarity maps");
      return Region::ball(map.apply(region.center), map.upper_bound() * region.radius);
    }
    case Region::Kind::Polygon: {
      std::vector<Vec> verts;
      verts.reserve(region.vertices.size());
      for (const auto& v : region.vertices) verts.push_back(map.apply(v));
      return Region::polygon(std::move(verts));
    }
    case Region::Kind::Union: {
      std::vector<Region> parts;
      parts.reserve(region.parts.size());
      for (const auto& p : region.parts) parts.push_back(map_region(map, p));
      return Region::union_of(std::move(parts));
    }
    case Region::Kind::HullInterior:
      throw InternalError("hull-interior region must be resolved before mapping");
  }
  throw InternalError("unhandled region kind");
}

bool region_contains_point(const Region& region, const Vec& p, double eps) {
  switch (region.kind) {
    case Region::Kind::Box:
      for (int k = 0; k < region.lo.size(); ++k)
        if (p(k) < region.lo(k) - eps || p(k) > region.hi(k) + eps) return false;
      return true;
    case Region::Kind::Ball:
      return (p - region.center).norm() <= region.radius + eps;
    case Region::Kind::Polygon:
      return point_in_polygon(region.vertices, p, eps);
    case Region::Kind::Union:
      for (const auto& part : region.parts)
        if (region_contains_point(part, p, eps)) return true;
      return false;
    case Region::Kind::HullInterior:
      throw InternalError("hull-interior region must be resolved before point tests");
  }
  return false;
}

bool region_contains(const Region& outer, const Region& inner, double eps) {
  if (inner.kind == Region::Kind::Union) {
    for (const auto& part : inner.parts)
      if (!region_contains(outer, part, eps)) return false;
    return true;
  }
  if (outer.kind == Region::Kind::Union) {
    // sufficient test: the (convex) inner region fits inside a single part
    for (const auto& part : outer.parts)
      if (region_contains(part, inner, eps)) return true;
    return false;
  }
  // convex outer, convex inner: closed containment via extreme points
  switch (inner.kind) {
    case Region::Kind::Box: {
      for (const Vec& v : box_corners(inner))
        if (!region_contains_point(outer, v, eps)) return false;
      return true;
    }
    case Region::Kind::Polygon: {
      for (const Vec& v : inner.vertices)
        if (!region_contains_point(outer, v, eps)) return false;
      return true;
    }
    case Region::Kind::Ball: {
      switch (outer.kind) {
        case Region::Kind::Ball:
          return (inner.center - outer.center).norm() + inner.radius <= outer.radius + eps;
        case Region::Kind::Box: {
          for (int k = 0; k < outer.lo.size(); ++k) {
            if (inner.center(k) - inner.radius < outer.lo(k) - eps) return false;
            if (inner.center(k) + inner.radius > outer.hi(k) + eps) return false;
          }
          return true;
        }
        case Region::Kind::Polygon: {
          // signed inward distance to every edge at least the radius
          const auto& verts = outer.vertices;
          for (std::size_t k = 0; k < verts.size(); ++k) {
            Vec e = verts[(k + 1) % verts.size()] - verts[k];
            double len = e.norm();
            if (len == 0.0) continue;
            Vec n(2);
            n << -e(1), e(0);  // inward normal for CCW
            n /= len;
            if (n.dot(inner.center - verts[k]) < inner.radius - eps) return false;
          }
          return true;
        }
        default: break;
      }
      break;
    }
    default: break;
  }
  throw InvalidInputError("unsupported region containment combination");
}

bool regions_disjoint(const Region& a, const Region& b, double eps) {
  if (a.kind == Region::Kind::Union) {
    for (const auto& part : a.parts)
      if (!regions_disjoint(part, b, eps)) return false;
    return true;
  }
  if (b.kind == Region::Kind::Union) return regions_disjoint(b, a, eps);

  auto as_poly = [](const Region& r) {
    return r.kind == Region::Kind::Box && r.lo.size() == 2 ? box_as_polygon(r) : r;
  };

  if (a.kind == Region::Kind::Box && b.kind == Region::Kind::Box && a.lo.size() == 1)
    return a.hi(0) <= b.lo(0) + eps || b.hi(0) <= a.lo(0) + eps;
  if (a.kind == Region::Kind::Ball && b.kind == Region::Kind::Ball)
    return (a.center - b.center).norm() >= a.radius + b.radius - eps;

  if (a.kind == Region::Kind::Ball && b.kind == Region::Kind::Box && b.lo.size() == 1) {
    double lo = b.lo(0), hi = b.hi(0), c = a.center(0);
    double dist = c < lo ? lo - c : (c > hi ? c - hi : 0.0);
    return dist >= a.radius - eps;
  }
  if (b.kind == Region::Kind::Ball && a.kind == Region::Kind::Box && a.lo.size() == 1)
    return regions_disjoint(b, a, eps);

  Region pa = as_poly(a), pb = as_poly(b);
  if (pa.kind == Region::Kind::Polygon && pb.kind == Region::Kind::Polygon)
    return polygons_disjoint(pa.vertices, pb.vertices, eps);
  if (pa.kind == Region::Kind::Polygon && pb.kind == Region::Kind::Ball)
    return point_polygon_distance(pa.vertices, pb.center, 0.0) >= pb.radius - eps;
  if (pb.kind == Region::Kind::Polygon && pa.kind == Region::Kind::Ball)
    return point_polygon_distance(pb.vertices, pa.center, 0.0) >= pa.radius - eps;

  throw InvalidInputError("unsupported region disjointness combination");
}

std::vector<Vec> region_probe_points(const Region& region) {
  std::vector<Vec> out;
  switch (region.kind) {
    case Region::Kind::Box: {
      out = box_corners(region);
      out.push_back(0.5 * (region.lo + region.hi));
      break;
    }
    case Region::Kind::Ball: {
      out.push_back(region.center);
      for (int k = 0; k < region.center.size(); ++k) {
        Vec v = region.center;
        v(k) += region.radius;
        out.push_back(v);
        v(k) -= 2.0 * region.radius;
        out.push_back(v);
      }
      break;
    }
    case Region::Kind::Polygon: {
      Vec centroid = Vec::Zero(2);
      for (const auto& v : region.vertices) centroid += v;
      centroid /= static_cast<double>(region.vertices.size());
      out.push_back(centroid);
      for (std::size_t k = 0; k < region.vertices.size(); ++k) {
        out.push_back(region.vertices[k]);
        out.push_back(0.5 * (region.vertices[k] + region.vertices[(k + 1) % region.vertices.size()]));
        out.push_back(0.5 * (region.vertices[k] + centroid));
      }
      break;
    }
    case Region::Kind::Union: {
      for (const auto& part : region.parts)
        for (auto& v : region_probe_points(part)) out.push_back(std::move(v));
      break;
    }
    case Region::Kind::HullInterior:
      throw InternalError("hull-interior region must be resolved before probing");
  }
  return out;
}

std::optional<Vec> overlap_witness(const Region& a, const Region& b) {
  for (const Vec& p : region_probe_points(a))
    if (region_contains_point(b, p, 0.0) && region_contains_point(a, p, 0.0)) return p;
  for (const Vec& p : region_probe_points(b))
    if (region_contains_point(a, p, 0.0) && region_contains_point(b, p, 0.0)) return p;
  if (a.kind == Region::Kind::Ball && b.kind == Region::Kind::Ball) {
    Vec mid = a.center + (b.center - a.center) * (a.radius / (a.radius + b.radius));
    if (region_contains_point(a, mid, 0.0) && region_contains_point(b, mid, 0.0)) return mid;
  }
  return std::nullopt;
}

}  // namespace selfsim

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace dislab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline Vec2 normalized(Vec2 v) {
    double n = norm(v);
    return n > 0.0 ? v / n : Vec2{0.0, 0.0};
}
// 90-degree counterclockwise rotation.
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

struct Mat2 {
    // Row-major: [[a, b], [c, d]].
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator+(Mat2 o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(Mat2 o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    double trace() const { return a + d; }
};

inline Mat2 outer(Vec2 u, Vec2 v) { return {u.x * v.x, u.x * v.y, u.y * v.x, u.y * v.y}; }

// Scaling to the plane where elliptical cores become circles: xi = (x1, x2/lambda).
inline Vec2 to_scaled(Vec2 p, double lambda) { return {p.x, p.y / lambda}; }
inline Vec2 from_scaled(Vec2 xi, double lambda) { return {xi.x, xi.y * lambda}; }

// Elliptical core of radius r: (x1-z1)^2 + ((x2-z2)/lambda)^2 < r^2.
// Boundary parametrized by eccentric anomaly tau -> center + (r cos, lambda r sin).
struct Ellipse {
    Vec2 center;
    double radius = 1.0;
    double lambda = 1.0;

    bool contains(Vec2 p) const {
        Vec2 d = p - center;
        double dy = d.y / lambda;
        return d.x * d.x + dy * dy < radius * radius;
    }
    Vec2 boundary_point(double tau) const {
        return center + Vec2{radius * std::cos(tau), lambda * radius * std::sin(tau)};
    }
    // d(boundary_point)/dtau
    Vec2 boundary_tangent(double tau) const {
        return {-radius * std::sin(tau), lambda * radius * std::cos(tau)};
    }
    // |boundary_tangent|, the arc-length factor R*sqrt(lambda^2 cos^2 + sin^2).
    double arc_factor(double tau) const {
        double c = std::cos(tau), s = std::sin(tau);
        return radius * std::sqrt(lambda * lambda * c * c + s * s);
    }
};

// Simple closed polygonal chains, counterclockwise.
double polygon_signed_area(const std::vector<Vec2>& v);
bool polygon_is_simple(const std::vector<Vec2>& v);
bool point_in_polygon(const std::vector<Vec2>& v, Vec2 p);
double distance_point_segment(Vec2 p, Vec2 a, Vec2 b);
Vec2 polygon_centroid(const std::vector<Vec2>& v);

// Fan decomposition of a simple polygon into triangles (ear clipping).
std::vector<std::array<Vec2, 3>> triangulate_polygon(const std::vector<Vec2>& v);

// Cross-section domain: the unit disk (analytic backend available when
// isotropic) or a simple counterclockwise polygon.
class DomainGeometry {
  public:
    enum class Kind { UnitDisk, Polygon };

    static DomainGeometry unit_disk();
    static DomainGeometry polygon(std::vector<Vec2> vertices);

    Kind kind() const { return kind_; }
    bool is_unit_disk() const { return kind_ == Kind::UnitDisk; }
    const std::vector<Vec2>& vertices() const { return vertices_; }

    double diameter() const { return diameter_; }
    // Points within boundary_tolerance of the boundary count as boundary.
    double boundary_tolerance() const { return 1e-12 * diameter_; }

    // Positive inside, negative outside.
    double boundary_distance(Vec2 p) const;
    bool contains(Vec2 p) const { return boundary_distance(p) > boundary_tolerance(); }
    bool strictly_inside(Vec2 p, double margin) const { return boundary_distance(p) > margin; }

    // Largest rho such that the elliptical core E_rho(z) stays inside the domain.
    double elliptic_clearance(Vec2 z, double lambda) const;

    // Outward unit normal at a boundary point (disk) or of the edge closest to p.
    Vec2 outward_normal(Vec2 p) const;

  private:
    DomainGeometry() = default;
    Kind kind_ = Kind::UnitDisk;
    std::vector<Vec2> vertices_;
    double diameter_ = 2.0;
};

}  // namespace dislab

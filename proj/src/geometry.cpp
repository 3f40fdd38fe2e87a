#include "dislab/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace dislab {

double polygon_signed_area(const std::vector<Vec2>& v) {
    double a = 0.0;
    const size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % n];
        a += cross(p, q);
    }
    return 0.5 * a;
}

namespace {

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
    double o1 = orient(a, b, c), o2 = orient(a, b, d);
    double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

}  // namespace

bool polygon_is_simple(const std::vector<Vec2>& v) {
    const size_t n = v.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // Skip adjacent edges (they share an endpoint).
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
        }
    }
    return true;
}

bool point_in_polygon(const std::vector<Vec2>& v, Vec2 p) {
    // Winding via crossing count.
    bool inside = false;
    const size_t n = v.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        bool cond = (v[i].y > p.y) != (v[j].y > p.y);
        if (cond) {
            double t = (p.y - v[i].y) / (v[j].y - v[i].y);
            double xi = v[i].x + t * (v[j].x - v[i].x);
            if (p.x < xi) inside = !inside;
        }
    }
    return inside;
}

double distance_point_segment(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = norm2(ab);
    if (len2 == 0.0) return norm(p - a);
    double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return norm(p - (a + ab * t));
}

Vec2 polygon_centroid(const std::vector<Vec2>& v) {
    double a = 0.0;
    Vec2 c{0.0, 0.0};
    const size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % n];
        double w = cross(p, q);
        a += w;
        c += (p + q) * w;
    }
    return c / (3.0 * a);
}

std::vector<std::array<Vec2, 3>> triangulate_polygon(const std::vector<Vec2>& poly) {
    std::vector<Vec2> v = poly;
    std::vector<std::array<Vec2, 3>> out;
    if (v.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");

    auto point_in_tri = [](Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
        double d1 = cross(b - a, p - a);
        double d2 = cross(c - b, p - b);
        double d3 = cross(a - c, p - c);
        return d1 > 0 && d2 > 0 && d3 > 0;
    };

    size_t guard = v.size() * v.size() + 16;
    while (v.size() > 3 && guard-- > 0) {
        bool clipped = false;
        const size_t n = v.size();
        for (size_t i = 0; i < n; ++i) {
            Vec2 a = v[(i + n - 1) % n], b = v[i], c = v[(i + 1) % n];
            if (cross(b - a, c - b) <= 0) continue;  // reflex or degenerate corner
            bool ear = true;
            for (size_t j = 0; j < n; ++j) {
                if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
                if (point_in_tri(v[j], a, b, c)) { ear = false; break; }
            }
            if (ear) {
                out.push_back({a, b, c});
                v.erase(v.begin() + static_cast<long>(i));
                clipped = true;
                break;
            }
        }
        if (!clipped) throw std::invalid_argument("ear clipping failed: polygon not simple/ccw?");
    }
    if (v.size() == 3) out.push_back({v[0], v[1], v[2]});
    return out;
}

DomainGeometry DomainGeometry::unit_disk() {
    DomainGeometry g;
    g.kind_ = Kind::UnitDisk;
    g.diameter_ = 2.0;
    return g;
}

DomainGeometry DomainGeometry::polygon(std::vector<Vec2> vertices) {
    if (vertices.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    if (polygon_signed_area(vertices) <= 0.0)
        throw std::invalid_argument("polygon must be counterclockwise");
    if (!polygon_is_simple(vertices)) throw std::invalid_argument("polygon must be simple");
    DomainGeometry g;
    g.kind_ = Kind::Polygon;
    g.vertices_ = std::move(vertices);
    double d = 0.0;
    for (size_t i = 0; i < g.vertices_.size(); ++i)
        for (size_t j = i + 1; j < g.vertices_.size(); ++j)
            d = std::max(d, norm(g.vertices_[i] - g.vertices_[j]));
    g.diameter_ = d;
    return g;
}

double DomainGeometry::boundary_distance(Vec2 p) const {
    if (kind_ == Kind::UnitDisk) return 1.0 - norm(p);
    double d = std::numeric_limits<double>::infinity();
    const size_t n = vertices_.size();
    for (size_t i = 0; i < n; ++i)
        d = std::min(d, distance_point_segment(p, vertices_[i], vertices_[(i + 1) % n]));
    return point_in_polygon(vertices_, p) ? d : -d;
}

double DomainGeometry::elliptic_clearance(Vec2 z, double lambda) const {
    Vec2 zeta = to_scaled(z, lambda);
    if (kind_ == Kind::Polygon) {
        // In the scaled plane the core is a disk; clearance is the distance to
        // the scaled polygon boundary.
        double d = std::numeric_limits<double>::infinity();
        const size_t n = vertices_.size();
        for (size_t i = 0; i < n; ++i) {
            Vec2 a = to_scaled(vertices_[i], lambda);
            Vec2 b = to_scaled(vertices_[(i + 1) % n], lambda);
            d = std::min(d, distance_point_segment(zeta, a, b));
        }
        return d;
    }
    // Unit circle maps to the ellipse (cos t, sin t / lambda). Minimize the
    // distance over t: dense scan plus local ternary refinement.
    auto dist = [&](double t) {
        Vec2 q{std::cos(t), std::sin(t) / lambda};
        return norm(q - zeta);
    };
    const int samples = 512;
    double best_t = 0.0, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        double t = 2.0 * std::numbers::pi * i / samples;
        double d = dist(t);
        if (d < best) { best = d; best_t = t; }
    }
    double lo = best_t - 2.0 * std::numbers::pi / samples;
    double hi = best_t + 2.0 * std::numbers::pi / samples;
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (dist(m1) < dist(m2)) hi = m2; else lo = m1;
    }
    return dist(0.5 * (lo + hi));
}

Vec2 DomainGeometry::outward_normal(Vec2 p) const {
    if (kind_ == Kind::UnitDisk) return normalized(p);
    const size_t n = vertices_.size();
    double best = std::numeric_limits<double>::infinity();
    Vec2 nrm{1.0, 0.0};
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = vertices_[i], b = vertices_[(i + 1) % n];
        double d = distance_point_segment(p, a, b);
        if (d < best) {
            best = d;
            // CCW polygon: outward normal of edge a->b is (dy, -dx).
            nrm = normalized(Vec2{(b - a).y, -(b - a).x});
        }
    }
    return nrm;
}

}  // namespace dislab

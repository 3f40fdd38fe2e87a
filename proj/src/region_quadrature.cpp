#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "dislab/quadrature.hpp"

// Area quadrature over the cross-section with elliptical cores removed.
//
// Everything happens in the scaled plane xi = (x1, x2/lambda), where cores are
// round disks and the domain is an ellipse (disk cross-section) or a scaled
// polygon. The region is partitioned into one convex cell per core (clipping
// by the perpendicular bisectors of the core centers), and each cell is
// integrated in polar coordinates around its core center. The polar Jacobian
// absorbs 1/r singularities of the integrand at the centers, and the inner
// radius cut removes the core exactly, so no geometric approximation of the
// curved boundaries ever enters.

namespace dislab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Halfplane {
    Vec2 point;   // a point on the dividing line
    Vec2 normal;  // unit; inside is normal-side <= 0
    double signed_dist(Vec2 p) const { return dot(p - point, normal); }
};

// Quadratic form of the scaled disk boundary: Q(xi) = xi1^2 + lambda^2 xi2^2 = 1.
struct ScaledDiskBoundary {
    double lambda = 1.0;
    double q(Vec2 p) const { return p.x * p.x + lambda * lambda * p.y * p.y; }
    double qb(Vec2 a, Vec2 b) const { return a.x * b.x + lambda * lambda * a.y * b.y; }
    // Exit parameter of the ray origin + t*dir, valid for origin strictly inside.
    double ray_exit(Vec2 origin, Vec2 dir) const {
        double a = qb(dir, dir);
        double b = 2.0 * qb(origin, dir);
        double c = q(origin) - 1.0;
        double disc = b * b - 4.0 * a * c;
        if (disc <= 0.0) return 0.0;
        return (-b + std::sqrt(disc)) / (2.0 * a);
    }
};

struct RaySpan {
    double t0 = 0.0, t1 = -1.0;
    bool empty() const { return t1 <= t0; }
};

// Convex polygon (CCW) intersected with the ray origin + t*dir, t >= 0.
RaySpan ray_clip_convex(const std::vector<Vec2>& poly, Vec2 origin, Vec2 dir) {
    RaySpan s{0.0, std::numeric_limits<double>::infinity()};
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 e = poly[(i + 1) % n] - poly[i];
        double c0 = cross(e, origin - poly[i]);
        double c1 = cross(e, dir);
        // Inside means c0 + t*c1 >= 0 for CCW polygons.
        if (std::abs(c1) < 1e-300) {
            if (c0 < 0.0) return {0.0, -1.0};
        } else if (c1 > 0.0) {
            s.t0 = std::max(s.t0, -c0 / c1);
        } else {
            s.t1 = std::min(s.t1, -c0 / c1);
        }
        if (s.empty()) return {0.0, -1.0};
    }
    return s;
}

std::vector<Vec2> clip_polygon_halfplane(const std::vector<Vec2>& poly, const Halfplane& hp) {
    std::vector<Vec2> out;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 cur = poly[i], nxt = poly[(i + 1) % n];
        double dc = hp.signed_dist(cur), dn = hp.signed_dist(nxt);
        bool in_c = dc <= 0.0, in_n = dn <= 0.0;
        if (in_c) out.push_back(cur);
        if (in_c != in_n) {
            double t = dc / (dc - dn);
            out.push_back(cur + (nxt - cur) * t);
        }
    }
    return out;
}

double polygon_diameter(const std::vector<Vec2>& poly) {
    double d = 0.0;
    for (size_t i = 0; i < poly.size(); ++i)
        for (size_t j = i + 1; j < poly.size(); ++j) d = std::max(d, norm(poly[i] - poly[j]));
    return d;
}

double dist_to_convex(const std::vector<Vec2>& poly, Vec2 p) {
    bool inside = true;
    const size_t n = poly.size();
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = poly[i], b = poly[(i + 1) % n];
        if (cross(b - a, p - a) < 0.0) inside = false;
        d = std::min(d, distance_point_segment(p, a, b));
    }
    return inside ? 0.0 : d;
}

// One polar integration cell: radial spans are exact ray intersections, so the
// cell geometry (convex, possibly curved by the domain ellipse) is never
// approximated.
struct PolarCell {
    Vec2 seed;
    double hole_radius = 0.0;
    std::vector<Halfplane> halfplanes;
    std::optional<ScaledDiskBoundary> disk;  // present for the disk cross-section
    std::vector<Vec2> convex_poly;           // present for polygon pieces
    double theta_lo = 0.0, theta_hi = kTwoPi;
    std::vector<double> theta_breaks;  // interior panel boundaries in (theta_lo, theta_hi)

    RaySpan span(double theta) const {
        Vec2 dir{std::cos(theta), std::sin(theta)};
        RaySpan s{hole_radius, std::numeric_limits<double>::infinity()};
        if (disk) s.t1 = disk->ray_exit(seed, dir);
        if (!convex_poly.empty()) {
            RaySpan c = ray_clip_convex(convex_poly, seed, dir);
            if (c.empty()) return {0.0, -1.0};
            s.t0 = std::max(s.t0, c.t0);
            s.t1 = std::min(s.t1, c.t1);
        }
        for (const auto& hp : halfplanes) {
            double c1 = dot(dir, hp.normal);
            double c0 = hp.signed_dist(seed);
            if (c1 > 0.0) s.t1 = std::min(s.t1, -c0 / c1);
            // c1 <= 0 with seed on the inside never cuts the forward ray.
        }
        return s;
    }
};

struct CellIntegrator {
    const std::function<double(Vec2)>* f_scaled;  // integrand at a scaled-plane point
    int max_depth = 40;

    double radial(const PolarCell& cell, double theta, double abs_tol) const {
        RaySpan s = cell.span(theta);
        if (s.empty()) return 0.0;
        Vec2 dir{std::cos(theta), std::sin(theta)};
        auto g = [&](double r) { return (*f_scaled)(cell.seed + dir * r) * r; };
        return adaptive_gauss(g, s.t0, s.t1, abs_tol, max_depth).value;
    }

    QuadResult integrate(const PolarCell& cell, double budget) const {
        std::vector<double> panels;
        panels.push_back(cell.theta_lo);
        for (double b : cell.theta_breaks)
            if (b > cell.theta_lo + 1e-13 && b < cell.theta_hi - 1e-13) panels.push_back(b);
        panels.push_back(cell.theta_hi);
        std::sort(panels.begin(), panels.end());
        // Guarantee a few panels so the first refinement has something to compare.
        if (panels.size() < 5) {
            std::vector<double> dense;
            for (size_t i = 0; i + 1 < panels.size(); ++i) {
                dense.push_back(panels[i]);
                dense.push_back(0.5 * (panels[i] + panels[i + 1]));
            }
            dense.push_back(panels.back());
            panels = dense;
        }
        const double width = cell.theta_hi - cell.theta_lo;
        const double inner_tol = 0.05 * budget / std::max(width, 1e-3);
        QuadResult total;
        auto F = [&](double theta) { return radial(cell, theta, inner_tol); };
        for (size_t i = 0; i + 1 < panels.size(); ++i) {
            double w = panels[i + 1] - panels[i];
            if (w <= 0.0) continue;
            double panel_budget = std::max(0.7 * budget * (w / width), 2.0 * inner_tol * w);
            QuadResult r = adaptive_gauss(F, panels[i], panels[i + 1], panel_budget, max_depth);
            total.value += r.value;
            total.error += r.error;
        }
        total.error += inner_tol * width;
        return total;
    }
};

// Degree-5 rule on a triangle (7 points).
double tri_rule(const std::function<double(Vec2)>& f, Vec2 a, Vec2 b, Vec2 c) {
    static const double w0 = 0.225;
    static const double a1 = 0.059715871789770, b1 = 0.470142064105115,
                        w1 = 0.132394152788506;
    static const double a2 = 0.797426985353087, b2 = 0.101286507323456,
                        w2 = 0.125939180544827;
    double area = 0.5 * cross(b - a, c - a);
    auto at = [&](double u, double v, double w) { return a * u + b * v + c * w; };
    double s = w0 * f(at(1.0 / 3, 1.0 / 3, 1.0 / 3));
    s += w1 * (f(at(a1, b1, b1)) + f(at(b1, a1, b1)) + f(at(b1, b1, a1)));
    s += w2 * (f(at(a2, b2, b2)) + f(at(b2, a2, b2)) + f(at(b2, b2, a2)));
    return s * area;
}

struct TriWork {
    const std::function<double(Vec2)>* f;
    double total = 0.0;
    double err = 0.0;
    int max_depth = 40;

    void recurse(Vec2 a, Vec2 b, Vec2 c, double whole, double budget, int depth) {
        Vec2 ab = (a + b) * 0.5, bc = (b + c) * 0.5, ca = (c + a) * 0.5;
        double s1 = tri_rule(*f, a, ab, ca);
        double s2 = tri_rule(*f, ab, b, bc);
        double s3 = tri_rule(*f, ca, bc, c);
        double s4 = tri_rule(*f, ab, bc, ca);
        double refined = s1 + s2 + s3 + s4;
        double diff = std::abs(refined - whole);
        if (diff <= budget || depth >= max_depth) {
            total += refined;
            err += diff;
            return;
        }
        recurse(a, ab, ca, s1, 0.25 * budget, depth + 1);
        recurse(ab, b, bc, s2, 0.25 * budget, depth + 1);
        recurse(ca, bc, c, s3, 0.25 * budget, depth + 1);
        recurse(ab, bc, ca, s4, 0.25 * budget, depth + 1);
    }
};

QuadResult integrate_convex_poly(const std::function<double(Vec2)>& f,
                                 const std::vector<Vec2>& poly, double budget, int max_depth) {
    TriWork w;
    w.f = &f;
    w.max_depth = max_depth;
    size_t ntri = poly.size() - 2;
    for (size_t i = 1; i + 1 < poly.size(); ++i) {
        double whole = tri_rule(f, poly[0], poly[i], poly[i + 1]);
        w.recurse(poly[0], poly[i], poly[i + 1], whole, budget / static_cast<double>(ntri), 0);
    }
    return {w.total, w.err};
}

// Perpendicular-bisector halfplanes bounding the Voronoi cell of seed i.
std::vector<Halfplane> voronoi_halfplanes(const std::vector<Vec2>& seeds, size_t i) {
    std::vector<Halfplane> hps;
    for (size_t j = 0; j < seeds.size(); ++j) {
        if (j == i) continue;
        Vec2 mid = (seeds[i] + seeds[j]) * 0.5;
        hps.push_back({mid, normalized(seeds[j] - seeds[i])});
    }
    return hps;
}

// Corner angles (as seen from the seed) where the boundary of the disk-domain
// cell switches between constraints; panel boundaries for the polar rule.
std::vector<double> disk_cell_breaks(const PolarCell& cell) {
    std::vector<Vec2> corners;
    const auto& hps = cell.halfplanes;
    const auto& disk = *cell.disk;
    auto feasible = [&](Vec2 p, size_t skip_a, size_t skip_b) {
        for (size_t k = 0; k < hps.size(); ++k) {
            if (k == skip_a || k == skip_b) continue;
            if (hps[k].signed_dist(p) > 1e-12) return false;
        }
        return true;
    };
    for (size_t a = 0; a < hps.size(); ++a) {
        for (size_t b = a + 1; b < hps.size(); ++b) {
            Vec2 u = hps[a].normal, v = hps[b].normal;
            double det = cross(u, v);
            if (std::abs(det) < 1e-14) continue;
            double ra = dot(hps[a].point, u), rb = dot(hps[b].point, v);
            Vec2 p{(ra * v.y - rb * u.y) / det, (rb * u.x - ra * v.x) / det};
            if (disk.q(p) <= 1.0 + 1e-12 && feasible(p, a, b)) corners.push_back(p);
        }
        // Halfplane line against the domain ellipse.
        Vec2 w = perp(hps[a].normal);
        Vec2 p0 = hps[a].point;
        double A = disk.qb(w, w), B = 2.0 * disk.qb(p0, w), C = disk.q(p0) - 1.0;
        double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
            for (double sgn : {-1.0, 1.0}) {
                double s = (-B + sgn * std::sqrt(disc)) / (2.0 * A);
                Vec2 p = p0 + w * s;
                if (feasible(p, a, SIZE_MAX)) corners.push_back(p);
            }
        }
    }
    std::vector<double> breaks;
    for (Vec2 p : corners) {
        double t = std::atan2(p.y - cell.seed.y, p.x - cell.seed.x);
        if (t < 0.0) t += kTwoPi;
        breaks.push_back(t);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double x, double y) { return std::abs(x - y) < 1e-12; }),
                 breaks.end());
    return breaks;
}

void set_polygon_piece_angles(PolarCell& cell) {
    const auto& poly = cell.convex_poly;
    bool inside = dist_to_convex(poly, cell.seed) == 0.0;
    if (inside) {
        cell.theta_lo = 0.0;
        cell.theta_hi = kTwoPi;
        for (Vec2 p : poly) {
            if (norm(p - cell.seed) < 1e-14) continue;
            double t = std::atan2(p.y - cell.seed.y, p.x - cell.seed.x);
            if (t < 0.0) t += kTwoPi;
            cell.theta_breaks.push_back(t);
        }
    } else {
        Vec2 centroid{0.0, 0.0};
        for (Vec2 p : poly) centroid += p;
        centroid = centroid / static_cast<double>(poly.size());
        double mu = std::atan2(centroid.y - cell.seed.y, centroid.x - cell.seed.x);
        double lo = 0.0, hi = 0.0;
        std::vector<double> rel;
        for (Vec2 p : poly) {
            Vec2 d = p - cell.seed;
            double a = std::atan2(d.y, d.x) - mu;
            while (a > std::numbers::pi) a -= kTwoPi;
            while (a < -std::numbers::pi) a += kTwoPi;
            rel.push_back(a);
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
        cell.theta_lo = mu + lo - 1e-12;
        cell.theta_hi = mu + hi + 1e-12;
        for (double a : rel) cell.theta_breaks.push_back(mu + a);
    }
    std::sort(cell.theta_breaks.begin(), cell.theta_breaks.end());
}

double sample_scale(const std::function<double(Vec2)>& f_scaled, const PolarCell& cell) {
    // Rough estimate of the cell's contribution to the integral of |f|.
    double acc = 0.0;
    const int nth = 8, nr = 4;
    for (int i = 0; i < nth; ++i) {
        double theta =
            cell.theta_lo + (cell.theta_hi - cell.theta_lo) * (i + 0.5) / nth;
        RaySpan s = cell.span(theta);
        if (s.empty()) continue;
        Vec2 dir{std::cos(theta), std::sin(theta)};
        double dr = (s.t1 - s.t0) / nr;
        for (int j = 0; j < nr; ++j) {
            double r = s.t0 + dr * (j + 0.5);
            acc += std::abs(f_scaled(cell.seed + dir * r)) * r * dr *
                   (cell.theta_hi - cell.theta_lo) / nth;
        }
    }
    return acc;
}

double sample_scale_poly(const std::function<double(Vec2)>& f, const std::vector<Vec2>& poly) {
    double acc = 0.0;
    for (size_t i = 1; i + 1 < poly.size(); ++i) {
        Vec2 a = poly[0], b = poly[i], c = poly[i + 1];
        double area = 0.5 * std::abs(cross(b - a, c - a));
        Vec2 pts[4] = {(a + b + c) / 3.0, (a + b) * 0.5, (b + c) * 0.5, (c + a) * 0.5};
        double m = 0.0;
        for (Vec2 p : pts) m += std::abs(f(p));
        acc += area * m / 4.0;
    }
    return acc;
}

}  // namespace

QuadResult integrate_domain(const DomainGeometry& geom, double lambda,
                            const std::vector<RegionHole>& holes,
                            const std::function<double(Vec2)>& f, double rel_tol,
                            int max_depth) {
    std::function<double(Vec2)> f_scaled = [&](Vec2 xi) { return f(from_scaled(xi, lambda)); };

    std::vector<Vec2> seeds;
    std::vector<double> radii;
    for (const auto& h : holes) {
        seeds.push_back(to_scaled(h.center, lambda));
        radii.push_back(h.radius);
    }

    std::vector<PolarCell> cells;
    std::vector<std::vector<Vec2>> plain_pieces;  // smooth pieces away from holes

    if (geom.is_unit_disk()) {
        if (seeds.empty()) {
            seeds.push_back({0.0, 0.0});
            radii.push_back(0.0);
        }
        for (size_t i = 0; i < seeds.size(); ++i) {
            PolarCell cell;
            cell.seed = seeds[i];
            cell.hole_radius = radii[i];
            cell.disk = ScaledDiskBoundary{lambda};
            cell.halfplanes = voronoi_halfplanes(seeds, i);
            cell.theta_breaks = disk_cell_breaks(cell);
            cells.push_back(std::move(cell));
        }
    } else {
        std::vector<Vec2> scaled_poly;
        for (Vec2 v : geom.vertices()) scaled_poly.push_back(to_scaled(v, lambda));
        auto tris = triangulate_polygon(scaled_poly);
        if (seeds.empty()) {
            for (const auto& t : tris) plain_pieces.push_back({t[0], t[1], t[2]});
        } else {
            for (const auto& t : tris) {
                for (size_t i = 0; i < seeds.size(); ++i) {
                    std::vector<Vec2> piece = {t[0], t[1], t[2]};
                    for (const auto& hp : voronoi_halfplanes(seeds, i))
                        if (!piece.empty()) piece = clip_polygon_halfplane(piece, hp);
                    if (piece.size() < 3) continue;
                    if (std::abs(polygon_signed_area(piece)) < 1e-28) continue;
                    double d = dist_to_convex(piece, seeds[i]);
                    double diam = polygon_diameter(piece);
                    if (d < radii[i] + 0.1 * (radii[i] + diam)) {
                        PolarCell cell;
                        cell.seed = seeds[i];
                        cell.hole_radius = radii[i];
                        cell.convex_poly = piece;
                        set_polygon_piece_angles(cell);
                        cells.push_back(std::move(cell));
                    } else {
                        plain_pieces.push_back(std::move(piece));
                    }
                }
            }
        }
    }

    double scale = 0.0;
    for (const auto& c : cells) scale += sample_scale(f_scaled, c);
    for (const auto& p : plain_pieces) scale += sample_scale_poly(f_scaled, p);
    const double abs_tol = rel_tol * std::max(scale, 1e-300);

    CellIntegrator integ;
    integ.f_scaled = &f_scaled;
    integ.max_depth = max_depth;

    QuadResult total;
    size_t npieces = cells.size() + plain_pieces.size();
    for (const auto& c : cells) {
        QuadResult r = integ.integrate(c, abs_tol / static_cast<double>(npieces));
        total.value += r.value;
        total.error += r.error;
    }
    for (const auto& p : plain_pieces) {
        QuadResult r =
            integrate_convex_poly(f_scaled, p, abs_tol / static_cast<double>(npieces), max_depth);
        total.value += r.value;
        total.error += r.error;
    }

    total.value *= lambda;
    total.error *= lambda;
    if (total.error > 200.0 * lambda * abs_tol)
        throw QuadratureFailureError("domain quadrature did not reach requested tolerance");
    return total;
}

QuadResult integrate_elliptic_annulus(Vec2 center, double lambda, double r_in, double r_out,
                                      const std::function<double(Vec2)>& f, double rel_tol,
                                      int max_depth) {
    if (!(r_out > r_in) || r_in < 0.0)
        throw std::invalid_argument("elliptic annulus: need 0 <= r_in < r_out");
    auto f_scaled = [&](Vec2 xi) { return f(from_scaled(xi, lambda)); };
    const Vec2 seed = to_scaled(center, lambda);
    double scale = 0.0;
    for (int i = 0; i < 8; ++i) {
        double theta = kTwoPi * (i + 0.5) / 8;
        Vec2 dir{std::cos(theta), std::sin(theta)};
        for (int j = 0; j < 4; ++j) {
            double r = r_in + (r_out - r_in) * (j + 0.5) / 4;
            scale += std::abs(f_scaled(seed + dir * r)) * r * (r_out - r_in) / 4 * kTwoPi / 8;
        }
    }
    const double abs_tol = rel_tol * std::max(scale, 1e-300);
    const double inner_tol = 0.05 * abs_tol / kTwoPi;
    auto F = [&](double theta) {
        Vec2 dir{std::cos(theta), std::sin(theta)};
        auto g = [&](double r) { return f_scaled(seed + dir * r) * r; };
        return adaptive_gauss(g, r_in, r_out, inner_tol, max_depth).value;
    };
    QuadResult total;
    for (int i = 0; i < 4; ++i) {
        QuadResult r = adaptive_gauss(F, kTwoPi * i / 4.0, kTwoPi * (i + 1) / 4.0,
                                      std::max(0.7 * abs_tol / 4.0, 2.0 * inner_tol), max_depth);
        total.value += r.value;
        total.error += r.error;
    }
    total.error += inner_tol * kTwoPi;
    total.value *= lambda;
    total.error *= lambda;
    return total;
}

}  // namespace dislab

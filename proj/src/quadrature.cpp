#include "dislab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dislab {

namespace {

// 15-point Gauss-Legendre rule on [-1, 1].
constexpr int kGaussN = 15;
constexpr double kGaussX[kGaussN] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601701,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGaussW[kGaussN] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939, 0.1861610000155622, 0.1984314853271116, 0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

double gauss15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kGaussN; ++i) s += kGaussW[i] * f(mid + half * kGaussX[i]);
    return s * half;
}

struct GaussWork {
    const std::function<double(double)>* f;
    double total = 0.0;
    double err = 0.0;

    void recurse(double a, double b, double whole, double budget, int depth, int max_depth) {
        const double mid = 0.5 * (a + b);
        const double left = gauss15(*f, a, mid);
        const double right = gauss15(*f, mid, b);
        const double diff = std::abs(left + right - whole);
        if (diff <= budget || depth >= max_depth) {
            total += left + right;
            err += diff;
            return;
        }
        recurse(a, mid, left, 0.5 * budget, depth + 1, max_depth);
        recurse(mid, b, right, 0.5 * budget, depth + 1, max_depth);
    }
};

}  // namespace

QuadResult adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
    if (a == b) return {0.0, 0.0};
    GaussWork w;
    w.f = &f;
    const double whole = gauss15(f, a, b);
    w.recurse(a, b, whole, std::max(abs_tol, 0.0), 0, max_depth);
    return {w.total, w.err};
}

QuadResult periodic_trapezoid(const std::function<double(double)>& f, double rel_tol,
                              double abs_tol, int n_start, int n_max) {
    int n = n_start;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += f(static_cast<double>(k) / n);
    double prev = sum / n;
    while (n < n_max) {
        // Double: reuse existing samples, add the odd midpoints.
        double add = 0.0;
        for (int k = 0; k < n; ++k) add += f((k + 0.5) / n);
        n *= 2;
        sum += add;
        double cur = sum / n;
        double diff = std::abs(cur - prev);
        if (diff <= std::max(abs_tol, rel_tol * std::abs(cur))) return {cur, diff};
        prev = cur;
    }
    throw QuadratureFailureError("periodic trapezoid rule did not converge (n > " +
                                 std::to_string(n_max) + ")");
}

Contour circle_contour(Vec2 center, double radius) {
    Contour c;
    c.point = [=](double t) {
        double a = 2.0 * std::numbers::pi * t;
        return center + Vec2{radius * std::cos(a), radius * std::sin(a)};
    };
    c.velocity = [=](double t) {
        double a = 2.0 * std::numbers::pi * t;
        return Vec2{-radius * std::sin(a), radius * std::cos(a)} * (2.0 * std::numbers::pi);
    };
    c.smooth_closed = true;
    return c;
}

Contour ellipse_contour(const Ellipse& e) {
    Contour c;
    c.point = [e](double t) { return e.boundary_point(2.0 * std::numbers::pi * t); };
    c.velocity = [e](double t) {
        return e.boundary_tangent(2.0 * std::numbers::pi * t) * (2.0 * std::numbers::pi);
    };
    c.smooth_closed = true;
    return c;
}

Contour polygon_contour(const std::vector<Vec2>& vertices) {
    if (vertices.size() < 3) throw std::invalid_argument("polygon contour needs >= 3 vertices");
    const size_t n = vertices.size();
    Contour c;
    auto verts = vertices;
    c.point = [verts, n](double t) {
        t -= std::floor(t);
        double s = t * static_cast<double>(n);
        size_t i = std::min(static_cast<size_t>(s), n - 1);
        double u = s - static_cast<double>(i);
        return verts[i] + (verts[(i + 1) % n] - verts[i]) * u;
    };
    c.velocity = [verts, n](double t) {
        t -= std::floor(t);
        size_t i = std::min(static_cast<size_t>(t * static_cast<double>(n)), n - 1);
        return (verts[(i + 1) % n] - verts[i]) * static_cast<double>(n);
    };
    c.smooth_closed = false;
    for (size_t i = 0; i <= n; ++i) c.breaks.push_back(static_cast<double>(i) / n);
    return c;
}

Contour domain_boundary(const DomainGeometry& geom) {
    if (geom.is_unit_disk()) return circle_contour({0.0, 0.0}, 1.0);
    return polygon_contour(geom.vertices());
}

QuadResult contour_parameter_integral(const std::function<double(double)>& F,
                                      const Contour& contour, const QuadratureSpec& spec,
                                      double abs_scale) {
    const double abs_tol = spec.rel_tol * std::max(abs_scale, 1e-300);
    bool use_trapezoid = contour.smooth_closed;
    if (spec.scheme == QuadratureSpec::Scheme::TrapezoidPeriodic) use_trapezoid = true;
    if (spec.scheme == QuadratureSpec::Scheme::GaussPanel) use_trapezoid = false;
    if (spec.scheme == QuadratureSpec::Scheme::TriangleAdaptive)
        throw std::invalid_argument("triangle scheme is not a contour scheme");

    if (use_trapezoid && contour.smooth_closed) {
        return periodic_trapezoid(F, spec.rel_tol, abs_tol);
    }
    std::vector<double> breaks = contour.breaks;
    if (breaks.empty()) breaks = {0.0, 1.0};
    QuadResult total;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        double frac = (breaks[i + 1] - breaks[i]);
        QuadResult r =
            adaptive_gauss(F, breaks[i], breaks[i + 1], abs_tol * std::max(frac, 0.05),
                           spec.max_depth);
        total.value += r.value;
        total.error += r.error;
    }
    if (total.error > 100.0 * std::max(abs_tol, spec.rel_tol * std::abs(total.value)))
        throw QuadratureFailureError("contour quadrature did not reach requested tolerance");
    return total;
}

namespace {

// Magnitude of the field along the contour, before any dot-product
// cancellation, so relative tolerances keep a meaningful anchor even when the
// density vanishes pointwise.
double field_scale(const VectorField& field, const Contour& contour) {
    double s = 0.0;
    const int n = 32;
    for (int k = 0; k < n; ++k) {
        double t = (k + 0.5) / n;
        s = std::max(s, norm(field(contour.point(t))) * norm(contour.velocity(t)));
    }
    return s;
}

}  // namespace

double circulation(const VectorField& field, const Contour& loop, const QuadratureSpec& spec) {
    auto F = [&](double t) { return dot(field(loop.point(t)), loop.velocity(t)); };
    double scale = field_scale(field, loop);
    return contour_parameter_integral(F, loop, spec, std::max(scale, 1e-30)).value;
}

double flux(const VectorField& field, const Contour& contour, const QuadratureSpec& spec) {
    // Outward normal times |velocity| equals (v.y, -v.x) for counterclockwise curves.
    auto F = [&](double t) {
        Vec2 v = contour.velocity(t);
        return dot(field(contour.point(t)), Vec2{v.y, -v.x});
    };
    double scale = field_scale(field, contour);
    return contour_parameter_integral(F, contour, spec, std::max(scale, 1e-30)).value;
}

}  // namespace dislab

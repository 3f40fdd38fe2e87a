#include "dislab/verify.hpp"

#include <cmath>
#include <numbers>

namespace dislab::verify {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Composite Simpson on [a, b] with n panels (n even).
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

double simpson_auto(const std::function<double(double)>& f, double a, double b, double rel_tol,
                    double* err_out) {
    int n = 16;
    double prev = simpson(f, a, b, n);
    // Scale anchor so integrals that cancel to ~0 still terminate.
    double fmax = 0.0;
    for (int i = 0; i < 16; ++i) fmax = std::max(fmax, std::abs(f(a + (b - a) * (i + 0.5) / 16)));
    const double scale = fmax * std::abs(b - a);
    while (n < (1 << 18)) {
        n *= 2;
        double cur = simpson(f, a, b, n);
        double diff = std::abs(cur - prev);
        if (diff <= rel_tol * 16.0 * std::max(std::abs(cur), 1e-3 * scale) || diff < 1e-300) {
            if (err_out) *err_out = diff / 15.0;  // Richardson-style bound
            return cur;
        }
        prev = cur;
    }
    throw QuadratureFailureError("oracle Simpson rule did not converge");
}

}  // namespace

bool OracleRegion::inside(Vec2 p) const {
    if (domain && !domain->contains(p)) return false;
    if (outer && !outer->contains(p)) return false;
    for (const auto& h : holes)
        if (h.contains(p)) return false;
    return true;
}

namespace {

struct CellWork {
    const std::function<double(Vec2)>* f;
    const OracleRegion* region;
    int max_depth;
    double value = 0.0;
    double bound = 0.0;

    // 3x3 tensor Gauss on a rectangle.
    double gauss9(Vec2 lo, Vec2 hi) const {
        static const double x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
        static const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
        Vec2 c = (lo + hi) * 0.5, half = (hi - lo) * 0.5;
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                s += w[i] * w[j] * (*f)({c.x + half.x * x[i], c.y + half.y * x[j]});
        return s * half.x * half.y;
    }

    // Any cell within a diagonal of a boundary curve counts as mixed: thin
    // slivers near tangencies are invisible to point sampling.
    bool near_curve(Vec2 lo, Vec2 hi) const {
        Vec2 c = (lo + hi) * 0.5;
        double diag = norm(hi - lo);
        if (region->domain && std::abs(region->domain->boundary_distance(c)) < diag) return true;
        auto near_ellipse = [&](const Ellipse& e) {
            Vec2 d = to_scaled(c - e.center, e.lambda);
            double scaled_gap = std::abs(norm(d) - e.radius);
            double shrink = std::min(1.0, e.lambda);
            return scaled_gap * shrink < diag;
        };
        if (region->outer && near_ellipse(*region->outer)) return true;
        for (const auto& h : region->holes)
            if (near_ellipse(h)) return true;
        return false;
    }

    int classify(Vec2 lo, Vec2 hi) const {  // 1 inside, 0 outside, -1 mixed
        if (near_curve(lo, hi)) return -1;
        int in = 0, total = 0;
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; j <= 3; ++j) {
                Vec2 p{lo.x + (hi.x - lo.x) * i / 3.0, lo.y + (hi.y - lo.y) * j / 3.0};
                in += region->inside(p) ? 1 : 0;
                ++total;
            }
        if (in == total) return 1;
        if (in == 0) return 0;
        return -1;
    }

    void recurse(Vec2 lo, Vec2 hi, int depth) {
        int cls = classify(lo, hi);
        if (cls == 0) return;
        if (cls == 1) {
            value += gauss9(lo, hi);
            return;
        }
        if (depth >= max_depth) {
            // Fraction estimate on the straddling cell.
            int in = 0;
            const int m = 8;
            double fsum = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    Vec2 p{lo.x + (hi.x - lo.x) * (i + 0.5) / m,
                           lo.y + (hi.y - lo.y) * (j + 0.5) / m};
                    if (region->inside(p)) {
                        ++in;
                        fsum += (*f)(p);
                    }
                }
            double area = (hi.x - lo.x) * (hi.y - lo.y);
            value += fsum / (m * m) * area;
            bound += area * static_cast<double>(std::min(in, m * m - in) + m) / (m * m);
            return;
        }
        Vec2 mid = (lo + hi) * 0.5;
        recurse(lo, {mid.x, mid.y}, depth + 1);
        recurse({mid.x, lo.y}, {hi.x, mid.y}, depth + 1);
        recurse({lo.x, mid.y}, {mid.x, hi.y}, depth + 1);
        recurse(mid, hi, depth + 1);
    }
};

}  // namespace

OracleResult area_quadrature(const std::function<double(Vec2)>& f, const OracleRegion& region,
                             const QuadratureSpec& spec) {
    Vec2 lo{1e30, 1e30}, hi{-1e30, -1e30};
    auto grow = [&](Vec2 p) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
    };
    if (region.domain) {
        if (region.domain->is_unit_disk()) {
            grow({-1.0, -1.0});
            grow({1.0, 1.0});
        } else {
            for (Vec2 v : region.domain->vertices()) grow(v);
        }
    }
    if (region.outer) {
        grow(region.outer->center + Vec2{region.outer->radius,
                                         region.outer->lambda * region.outer->radius});
        grow(region.outer->center - Vec2{region.outer->radius,
                                         region.outer->lambda * region.outer->radius});
    }
    if (lo.x > hi.x) throw std::invalid_argument("oracle region needs an outer boundary");

    // Pre-split below the smallest hole so indicator sampling cannot miss one.
    double feature = norm(hi - lo);
    for (const auto& h : region.holes) feature = std::min(feature, h.radius);
    int pre_depth = 2;
    while (norm(hi - lo) / std::pow(2.0, pre_depth) > 0.8 * feature && pre_depth < 12) ++pre_depth;

    CellWork work;
    work.f = &f;
    work.region = &region;
    work.max_depth = std::max(spec.max_depth, pre_depth + 2);
    int n0 = 1 << pre_depth;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n0; ++j) {
            Vec2 clo{lo.x + (hi.x - lo.x) * i / n0, lo.y + (hi.y - lo.y) * j / n0};
            Vec2 chi{lo.x + (hi.x - lo.x) * (i + 1) / n0, lo.y + (hi.y - lo.y) * (j + 1) / n0};
            work.recurse(clo, chi, pre_depth);
        }
    return {work.value, work.bound};
}

OracleResult annulus_quadrature(const std::function<double(Vec2)>& f, Vec2 center, double lambda,
                                double r_in, double r_out, double rel_tol) {
    if (!(r_out > r_in) || r_in < 0.0)
        throw std::invalid_argument("annulus oracle: need 0 <= r_in < r_out");
    double err_theta = 0.0;
    double inner_err = 0.0;
    auto radial = [&](double tau) {
        auto g = [&](double r) {
            Vec2 x = center + Vec2{r * std::cos(tau), lambda * r * std::sin(tau)};
            return f(x) * lambda * r;
        };
        double e = 0.0;
        double v = simpson_auto(g, r_in, r_out, 0.1 * rel_tol, &e);
        inner_err = std::max(inner_err, e);
        return v;
    };
    double v = simpson_auto(radial, 0.0, kTwoPi, rel_tol, &err_theta);
    return {v, err_theta + kTwoPi * inner_err};
}

namespace {

// Oracle integral over a full core E_eps(center).
double core_integral(const std::function<double(Vec2)>& f, Vec2 center, double eps,
                     double lambda, double rel_tol) {
    auto radial = [&](double tau) {
        auto g = [&](double r) {
            Vec2 x = center + Vec2{r * std::cos(tau), lambda * r * std::sin(tau)};
            return f(x) * lambda * r;
        };
        return simpson_auto(g, 0.0, eps, 0.1 * rel_tol, nullptr);
    };
    return simpson_auto(radial, 0.0, kTwoPi, rel_tol, nullptr);
}

// Oracle integral over the unit disk minus E_eps(center): polar rays from the
// scaled core center out to the scaled disk boundary.
double disk_minus_core_integral(const std::function<double(Vec2)>& f, Vec2 center, double eps,
                                double lambda, double rel_tol) {
    Vec2 seed = to_scaled(center, lambda);
    auto radial = [&](double theta) {
        Vec2 dir{std::cos(theta), std::sin(theta)};
        // Exit of the ray through the scaled disk boundary xi1^2 + lambda^2 xi2^2 = 1.
        double a = dir.x * dir.x + lambda * lambda * dir.y * dir.y;
        double b = 2.0 * (seed.x * dir.x + lambda * lambda * seed.y * dir.y);
        double c = seed.x * seed.x + lambda * lambda * seed.y * seed.y - 1.0;
        double t_out = (-b + std::sqrt(std::max(b * b - 4.0 * a * c, 0.0))) / (2.0 * a);
        if (t_out <= eps) return 0.0;
        auto g = [&](double r) { return f(from_scaled(seed + dir * r, lambda)) * lambda * r; };
        return simpson_auto(g, eps, t_out, 0.1 * rel_tol, nullptr);
    };
    return simpson_auto(radial, 0.0, kTwoPi, rel_tol, nullptr);
}

}  // namespace

TransportReport moving_domain_derivative_check(
    const std::function<double(Vec2, double)>& f, Vec2 center, double eps, double lambda, Vec2 v,
    double h) {
    const double tol = 1e-11;
    TransportReport rep;

    auto core_at = [&](double xi) {
        auto fx = [&](Vec2 x) { return f(x, xi); };
        return core_integral(fx, center + v * xi, eps, lambda, tol);
    };
    rep.lhs_core = (core_at(h) - core_at(-h)) / (2.0 * h);

    // Volume term of the rate: the xi-partial at frozen x.
    auto dxi_f = [&](Vec2 x) { return (f(x, h) - f(x, -h)) / (2.0 * h); };
    double vol = core_integral(dxi_f, center, eps, lambda, tol);
    // Boundary term: f (v . n) over the core boundary.
    auto bdry_term = [&](double tau) {
        Vec2 x = center + Vec2{eps * std::cos(tau), lambda * eps * std::sin(tau)};
        double cc = std::cos(tau), ss = std::sin(tau);
        double ds = eps * std::sqrt(lambda * lambda * cc * cc + ss * ss);
        return f(x, 0.0) * dot(v, ellipse_normal(lambda, tau)) * ds;
    };
    double bdry = simpson_auto(bdry_term, 0.0, kTwoPi, tol, nullptr);
    rep.rhs_core = vol + bdry;
    rep.diff_core = std::abs(rep.lhs_core - rep.rhs_core);

    auto complement_at = [&](double xi) {
        auto fx = [&](Vec2 x) { return f(x, xi); };
        return disk_minus_core_integral(fx, center + v * xi, eps, lambda, tol);
    };
    rep.lhs_complement = (complement_at(h) - complement_at(-h)) / (2.0 * h);
    double vol_c = disk_minus_core_integral(dxi_f, center, eps, lambda, tol);
    rep.rhs_complement = vol_c - bdry;
    rep.diff_complement = std::abs(rep.lhs_complement - rep.rhs_complement);
    return rep;
}

SourceShiftReport dvl_k_check(const SingularStrain& strain, Vec2 v, double h,
                              const std::vector<Vec2>& points) {
    SourceShiftReport rep;
    for (Vec2 x : points) {
        auto shifted = [&](double xi) {
            SingularStrain s = strain;
            s.source.position += v * xi;
            return k_eval(s, x);
        };
        Vec2 fd = (shifted(h) - shifted(-h)) / (2.0 * h);
        Mat2 Dk = k_jacobian(strain, x);
        Vec2 expected = Dk * v * -1.0;
        rep.max_shift_residual =
            std::max(rep.max_shift_residual, norm(fd - expected));

        auto convected = [&](double xi) {
            SingularStrain s = strain;
            s.source.position += v * xi;
            return k_eval(s, x + v * xi);
        };
        Vec2 fd2 = (convected(h) - convected(-h)) / (2.0 * h);
        rep.max_convected_residual = std::max(rep.max_convected_residual, norm(fd2));
    }
    return rep;
}

}  // namespace dislab::verify

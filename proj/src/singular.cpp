#include "dislab/singular.hpp"

#include <cmath>
#include <numbers>

namespace dislab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_off_source(const SingularStrain& s, Vec2 x) {
    Vec2 d = x - s.source.position;
    double scale = std::max(1.0, norm(s.source.position));
    if (norm(d) < 1e-14 * scale)
        throw SingularPointError("singular strain evaluated at its source");
}

}  // namespace

std::vector<SingularStrain> strains_of(const DislocationSystem& sys, const Material& material) {
    std::vector<SingularStrain> out;
    out.reserve(sys.size());
    for (const auto& d : sys.dislocations) out.emplace_back(d, material.lambda);
    return out;
}

Vec2 k_eval(const SingularStrain& strain, Vec2 x) {
    require_off_source(strain, x);
    const double lam = strain.lambda;
    Vec2 d = x - strain.source.position;
    double q = lam * lam * d.x * d.x + d.y * d.y;
    double c = strain.source.burgers * lam / (kTwoPi * q);
    return {-c * d.y, c * d.x};
}

Vec2 k_eval_anomaly(const SingularStrain& strain, double r, double tau) {
    if (!(r > 0.0)) throw SingularPointError("eccentric-anomaly evaluation needs r > 0");
    const double lam = strain.lambda;
    double c = strain.source.burgers / (kTwoPi * lam * r);
    return {-c * lam * std::sin(tau), c * std::cos(tau)};
}

Mat2 k_jacobian(const SingularStrain& strain, Vec2 x) {
    require_off_source(strain, x);
    const double lam = strain.lambda;
    Vec2 d = x - strain.source.position;
    double q = lam * lam * d.x * d.x + d.y * d.y;
    double c = strain.source.burgers * lam / kTwoPi;
    // k1 = -c d2 / q, k2 = c d1 / q with dq = (2 lam^2 d1, 2 d2).
    Mat2 J;
    J.a = c * d.y * 2.0 * lam * lam * d.x / (q * q);           // d k1 / d x1
    J.b = c * (-1.0 / q + 2.0 * d.y * d.y / (q * q));          // d k1 / d x2
    J.c = c * (1.0 / q - 2.0 * lam * lam * d.x * d.x / (q * q));  // d k2 / d x1
    J.d = c * (-2.0 * d.x * d.y / (q * q));                    // d k2 / d x2
    return J;
}

double div_Lk(const Material& material, const SingularStrain& strain, Vec2 x) {
    Mat2 J = k_jacobian(strain, x);
    return material.mu * J.a + material.mu * material.lambda * material.lambda * J.d;
}

Vec2 ellipse_normal(double lambda, double tau) {
    double c = std::cos(tau), s = std::sin(tau);
    double n = std::sqrt(lambda * lambda * c * c + s * s);
    return {lambda * c / n, s / n};
}

Vec2 superposed_k(const std::vector<SingularStrain>& strains, Vec2 x) {
    Vec2 sum{0.0, 0.0};
    for (const auto& s : strains) sum += k_eval(s, x);
    return sum;
}

double flux_Lk(const Material& material, const std::vector<SingularStrain>& strains,
               const Contour& contour, const QuadratureSpec& spec) {
    if (strains.empty()) return 0.0;
    auto field = [&](Vec2 x) { return apply_L(material, superposed_k(strains, x)); };
    return flux(field, contour, spec);
}

}  // namespace dislab

#include "dislab/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "dislab/quadrature.hpp"

namespace dislab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Continuous branch of the angle of (x - z*) for x in the unit disk, with the
// branch cut along the ray from z* pointing away from the disk.
double image_angle(Vec2 x, Vec2 zstar) {
    Vec2 cut = normalized(zstar) * -1.0;  // toward the disk
    Vec2 w = x - zstar;
    return std::atan2(cross(cut, w), dot(cut, w));
}

}  // namespace

double neumann_data(const Material& material, const DislocationSystem& sys, Vec2 y, Vec2 n) {
    Vec2 k{0.0, 0.0};
    for (const auto& d : sys.dislocations) k += k_eval(SingularStrain(d, material), y);
    return -dot(apply_L(material, k), n);
}

const Mesh& BoundaryResponse::mesh() const {
    if (!mesh_) throw WrongBackendError("no mesh: response uses the analytic backend");
    return *mesh_;
}

double BoundaryResponse::discrete_energy() const {
    if (backend_ != Backend::FiniteElement)
        throw WrongBackendError("discrete energy is recorded by the finite element solve only");
    return discrete_energy_;
}

Vec2 BoundaryResponse::gradient(Vec2 x) const {
    // Points within tolerance of the boundary count as boundary and may be
    // queried; genuinely exterior points may not.
    if (geometry_.boundary_distance(x) < -geometry_.boundary_tolerance())
        throw OutsideDomainError("gradient query outside the domain");
    if (backend_ == Backend::AnalyticDisk) {
        Vec2 g{0.0, 0.0};
        for (const auto& img : images_) g += k_eval(img, x);
        return g;
    }
    std::array<double, 3> w;
    int t = locator_->locate(x, &w);
    if (t < 0) throw OutsideDomainError("gradient query outside the mesh");
    const auto& tr = mesh_->triangles[static_cast<size_t>(t)];
    return nodal_grad_[tr[0]] * w[0] + nodal_grad_[tr[1]] * w[1] + nodal_grad_[tr[2]] * w[2];
}

double BoundaryResponse::value(Vec2 x) const {
    if (backend_ == Backend::AnalyticDisk) {
        double u = 0.0;
        for (const auto& img : images_)
            u += img.source.burgers / kTwoPi * image_angle(x, img.source.position);
        return u - analytic_offset_;
    }
    std::array<double, 3> w;
    int t = locator_->locate(x, &w);
    if (t < 0) throw OutsideDomainError("value query outside the mesh");
    const auto& tr = mesh_->triangles[static_cast<size_t>(t)];
    return nodal_u_[tr[0]] * w[0] + nodal_u_[tr[1]] * w[1] + nodal_u_[tr[2]] * w[2];
}

BoundaryResponse solve_disk_analytic(const Material& material, const DislocationSystem& sys) {
    if (material.lambda != 1.0)
        throw WrongBackendError("analytic disk backend requires lambda = 1");
    DomainGeometry disk = DomainGeometry::unit_disk();
    require_valid_system(disk, sys, material);

    BoundaryResponse r;
    r.backend_ = BoundaryResponse::Backend::AnalyticDisk;
    r.geometry_ = disk;
    r.material_ = material;
    r.system_ = sys;
    for (const auto& d : sys.dislocations) {
        double rho2 = norm2(d.position);
        if (rho2 < 1e-28) continue;  // a centered dislocation needs no image
        Vec2 zstar = d.position / rho2;
        r.images_.emplace_back(Dislocation(zstar, -d.burgers), material.lambda);
    }
    if (!r.images_.empty()) {
        // Fix the additive constant so the disk average vanishes.
        auto raw = [&r](Vec2 x) {
            double u = 0.0;
            for (const auto& img : r.images_)
                u += img.source.burgers / kTwoPi * image_angle(x, img.source.position);
            return u;
        };
        QuadResult m = integrate_domain(disk, 1.0, {}, raw, 1e-10);
        r.analytic_offset_ = m.value / std::numbers::pi;
    }
    return r;
}

namespace {

struct Csr {
    std::vector<int> row_ptr, col;
    std::vector<double> val;

    static Csr from_triplets(int n, std::vector<std::array<int, 2>>& idx,
                             std::vector<double>& v) {
        // Sort triplets by (row, col) and combine duplicates.
        std::vector<size_t> order(idx.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return idx[a] < idx[b];
        });
        Csr m;
        m.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
        int prev_r = -1, prev_c = -1;
        for (size_t oi : order) {
            int rr = idx[oi][0], cc = idx[oi][1];
            if (rr == prev_r && cc == prev_c) {
                m.val.back() += v[oi];
            } else {
                m.col.push_back(cc);
                m.val.push_back(v[oi]);
                m.row_ptr[static_cast<size_t>(rr) + 1]++;
                prev_r = rr;
                prev_c = cc;
            }
        }
        for (int i = 0; i < n; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
        return m;
    }

    void multiply(const std::vector<double>& x, std::vector<double>& y) const {
        const int n = static_cast<int>(row_ptr.size()) - 1;
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
            y[i] = s;
        }
    }
};

}  // namespace

BoundaryResponse solve_fem(const Material& material, const DislocationSystem& sys,
                           const DomainGeometry& geom, double resolution, const Mesh* mesh_in,
                           const std::vector<double>* initial_guess) {
    require_valid_system(geom, sys, material);

    BoundaryResponse r;
    r.backend_ = BoundaryResponse::Backend::FiniteElement;
    r.geometry_ = geom;
    r.material_ = material;
    r.system_ = sys;
    if (mesh_in) {
        r.mesh_ = std::make_shared<Mesh>(*mesh_in);
    } else {
        r.mesh_ = std::make_shared<Mesh>(generate_mesh(geom, resolution, core_grading(sys)));
    }
    const Mesh& mesh = *r.mesh_;
    const int n = static_cast<int>(mesh.vertex_count());

    // Stiffness assembly: per-triangle int grad phi_i . L grad phi_j.
    std::vector<std::array<int, 2>> idx;
    std::vector<double> vals;
    idx.reserve(mesh.triangle_count() * 9);
    vals.reserve(mesh.triangle_count() * 9);
    const double mu = material.mu;
    const double mull = material.mu * material.lambda * material.lambda;
    std::vector<double> lumped(n, 0.0);  // integrals of the hat functions
    for (size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tr = mesh.triangles[t];
        Vec2 p0 = mesh.vertices[tr[0]], p1 = mesh.vertices[tr[1]], p2 = mesh.vertices[tr[2]];
        double area = 0.5 * cross(p1 - p0, p2 - p0);
        Vec2 g[3] = {perp(p2 - p1) / (2.0 * area), perp(p0 - p2) / (2.0 * area),
                     perp(p1 - p0) / (2.0 * area)};
        for (int a = 0; a < 3; ++a) {
            lumped[tr[a]] += area / 3.0;
            for (int b = 0; b < 3; ++b) {
                idx.push_back({tr[a], tr[b]});
                vals.push_back(area * (mu * g[a].x * g[b].x + mull * g[a].y * g[b].y));
            }
        }
    }
    Csr A = Csr::from_triplets(n, idx, vals);

    // Boundary load: f_i = sum over boundary edges of int phi_i (L sum k) . n ds.
    std::vector<double> f(n, 0.0);
    auto strains = strains_of(sys, material);
    static const double gx[4] = {0.069431844202974, 0.330009478207572, 0.669990521792428,
                                 0.930568155797026};
    static const double gw[4] = {0.173927422568727, 0.326072577431273, 0.326072577431273,
                                 0.173927422568727};
    for (const auto& e : mesh.boundary_edges) {
        Vec2 a = mesh.vertices[e[0]], b = mesh.vertices[e[1]];
        double len = norm(b - a);
        Vec2 nrm = Vec2{(b - a).y, -(b - a).x} / len;
        for (int q = 0; q < 4; ++q) {
            Vec2 y = a + (b - a) * gx[q];
            double gval = dot(apply_L(material, superposed_k(strains, y)), nrm);
            f[e[0]] += len * gw[q] * (1.0 - gx[q]) * gval;
            f[e[1]] += len * gw[q] * gx[q] * gval;
        }
    }
    // Enforce exact discrete compatibility (the continuum total flux vanishes).
    double fsum = 0.0;
    for (double v : f) fsum += v;
    for (double& v : f) v -= fsum / n;

    // Solve A u = -f on the zero-mean subspace: augment with the rank-one
    // term sigma * m m^T, which pins the constant kernel.
    std::vector<double> m = lumped;
    double m2 = 0.0, tr_a = 0.0;
    for (double v : m) m2 += v * v;
    for (int i = 0; i < n; ++i)
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
            if (A.col[k] == i) tr_a += A.val[k];
    const double sigma = tr_a / (n * m2);

    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        A.multiply(x, y);
        double mx = 0.0;
        for (int i = 0; i < n; ++i) mx += m[i] * x[i];
        for (int i = 0; i < n; ++i) y[i] += sigma * m[i] * mx;
    };

    std::vector<double> diag(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
            if (A.col[k] == i) diag[i] = A.val[k];
        diag[i] += sigma * m[i] * m[i];
    }

    std::vector<double> b(n), x(n, 0.0), res(n), z(n), p(n), Ap(n);
    for (int i = 0; i < n; ++i) b[i] = -f[i];
    if (initial_guess) {
        if (static_cast<int>(initial_guess->size()) != n)
            throw SolverFailureError("initial guess size does not match the mesh");
        x = *initial_guess;
    }
    apply(x, Ap);
    for (int i = 0; i < n; ++i) res[i] = b[i] - Ap[i];
    double bnorm = 0.0;
    for (double v : b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    const double target = 1e-10 * std::max(bnorm, 1e-300);
    double rz = 0.0;
    for (int i = 0; i < n; ++i) {
        z[i] = res[i] / diag[i];
        p[i] = z[i];
        rz += res[i] * z[i];
    }
    double rnorm = 0.0;
    for (double v : res) rnorm += v * v;
    rnorm = std::sqrt(rnorm);
    int iter = 0;
    const int max_iter = 50000;
    while (rnorm > target && iter < max_iter) {
        apply(p, Ap);
        double pAp = 0.0;
        for (int i = 0; i < n; ++i) pAp += p[i] * Ap[i];
        if (!(pAp > 0.0)) throw SolverFailureError("stiffness system is not positive definite");
        double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            res[i] -= alpha * Ap[i];
        }
        double rz_new = 0.0;
        rnorm = 0.0;
        for (int i = 0; i < n; ++i) {
            z[i] = res[i] / diag[i];
            rz_new += res[i] * z[i];
            rnorm += res[i] * res[i];
        }
        rnorm = std::sqrt(rnorm);
        double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        ++iter;
    }
    if (rnorm > target)
        throw SolverFailureError("conjugate gradient did not converge in " +
                                 std::to_string(max_iter) + " iterations");
    r.solver_residual_ = bnorm > 0.0 ? rnorm / bnorm : 0.0;

    // Discrete functional value I0(u_h) = 1/2 u'Au + f'u (invariant under the
    // zero-mean shift because A 1 = 0 and the f-components sum to zero).
    A.multiply(x, Ap);
    double quad_term = 0.0, lin_term = 0.0;
    for (int i = 0; i < n; ++i) {
        quad_term += x[i] * Ap[i];
        lin_term += f[i] * x[i];
    }
    r.discrete_energy_ = 0.5 * quad_term + lin_term;

    // Zero-mean normalization (exact for piecewise-linear fields).
    double msum = 0.0, mdotx = 0.0;
    for (int i = 0; i < n; ++i) {
        msum += m[i];
        mdotx += m[i] * x[i];
    }
    for (int i = 0; i < n; ++i) x[i] -= mdotx / msum;
    double resid = 0.0;
    for (int i = 0; i < n; ++i) resid += m[i] * x[i];
    r.mean_residual_ = std::abs(resid);
    r.nodal_u_ = std::move(x);

    // Gradient recovery: area-weighted average of element gradients at vertices.
    r.nodal_grad_.assign(n, {0.0, 0.0});
    std::vector<double> wsum(n, 0.0);
    for (size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tr = mesh.triangles[t];
        Vec2 p0 = mesh.vertices[tr[0]], p1 = mesh.vertices[tr[1]], p2 = mesh.vertices[tr[2]];
        double area = 0.5 * cross(p1 - p0, p2 - p0);
        Vec2 g[3] = {perp(p2 - p1) / (2.0 * area), perp(p0 - p2) / (2.0 * area),
                     perp(p1 - p0) / (2.0 * area)};
        Vec2 grad = g[0] * r.nodal_u_[tr[0]] + g[1] * r.nodal_u_[tr[1]] + g[2] * r.nodal_u_[tr[2]];
        for (int a = 0; a < 3; ++a) {
            r.nodal_grad_[tr[a]] += grad * area;
            wsum[tr[a]] += area;
        }
    }
    for (int i = 0; i < n; ++i) r.nodal_grad_[i] = r.nodal_grad_[i] / wsum[i];

    r.locator_ = std::make_shared<MeshLocator>(*r.mesh_);
    return r;
}

Vec2 grad_u0(const BoundaryResponse& response, Vec2 x) { return response.gradient(x); }

Vec2 h0_eval(const Material& material, const DislocationSystem& sys,
             const BoundaryResponse& response, Vec2 x) {
    Vec2 h = response.gradient(x);
    for (const auto& d : sys.dislocations) h += k_eval(SingularStrain(d, material), x);
    return h;
}

}  // namespace dislab

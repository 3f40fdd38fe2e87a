#pragma once

#include <memory>
#include <vector>

#include "dislab/mesh.hpp"
#include "dislab/model.hpp"
#include "dislab/singular.hpp"

namespace dislab {

// Neumann datum of the boundary-response problem at a boundary point y with
// outward normal n:  g(y) = -L(sum_i k_i(y)) . n.
double neumann_data(const Material& material, const DislocationSystem& sys, Vec2 y, Vec2 n);

// Discrete representation of the boundary-response field u0 solving
//   div(L grad u) = 0 in Omega,  L(grad u + sum k_i) . n = 0 on the boundary,
// normalized to zero mean. Queryable for values and gradients at interior
// points; immutable after the solve.
class BoundaryResponse {
  public:
    enum class Backend { AnalyticDisk, FiniteElement };

    // Default state: analytic response of the empty system (identically zero).
    BoundaryResponse() = default;

    Backend backend() const { return backend_; }
    const DomainGeometry& geometry() const { return geometry_; }
    const Material& material() const { return material_; }
    const DislocationSystem& system() const { return system_; }

    Vec2 gradient(Vec2 x) const;
    double value(Vec2 x) const;

    // Analytic backend: image dislocations (modulus already negated).
    const std::vector<SingularStrain>& images() const { return images_; }
    // FEM backend internals, exposed for diagnostics and tests.
    const Mesh& mesh() const;
    const std::vector<double>& nodal_values() const { return nodal_u_; }
    const std::vector<Vec2>& nodal_gradients() const { return nodal_grad_; }
    // |discrete mean of u0| recorded after normalization.
    double mean_residual() const { return mean_residual_; }
    // Relative CG residual achieved by the solve (0 for the analytic backend).
    double solver_residual() const { return solver_residual_; }
    // Value of the discrete boundary-response functional at the solution
    // (finite element backend only).
    double discrete_energy() const;

  private:
    friend BoundaryResponse solve_disk_analytic(const Material&, const DislocationSystem&);
    friend BoundaryResponse solve_fem(const Material&, const DislocationSystem&,
                                      const DomainGeometry&, double, const Mesh*,
                                      const std::vector<double>*);

    Backend backend_ = Backend::AnalyticDisk;
    DomainGeometry geometry_ = DomainGeometry::unit_disk();
    Material material_;
    DislocationSystem system_;

    std::vector<SingularStrain> images_;
    double analytic_offset_ = 0.0;  // constant fixing zero mean

    std::shared_ptr<Mesh> mesh_;
    std::shared_ptr<MeshLocator> locator_;
    std::vector<double> nodal_u_;
    std::vector<Vec2> nodal_grad_;
    double mean_residual_ = 0.0;
    double solver_residual_ = 0.0;
    double discrete_energy_ = 0.0;
};

// Closed-form solution on the isotropic unit disk by the image construction:
// each dislocation b at z (z != 0) gets an image -b at z/|z|^2, so that
// grad u0 = sum of image strains and the boundary traction cancels exactly.
BoundaryResponse solve_disk_analytic(const Material& material, const DislocationSystem& sys);

// Piecewise-linear finite-element minimizer of the boundary-response
// functional  I0(u) = int W(grad u) + sum_i int_bdry u L k_i . n  with the
// zero-mean constraint. Pass a mesh to reuse it; initial_guess seeds the CG
// iteration (defaults to zero).
BoundaryResponse solve_fem(const Material& material, const DislocationSystem& sys,
                           const DomainGeometry& geom, double resolution,
                           const Mesh* mesh = nullptr,
                           const std::vector<double>* initial_guess = nullptr);

Vec2 grad_u0(const BoundaryResponse& response, Vec2 x);

// Limit strain h0(x) = sum_i k_i(x) + grad u0(x).
Vec2 h0_eval(const Material& material, const DislocationSystem& sys,
             const BoundaryResponse& response, Vec2 x);

}  // namespace dislab

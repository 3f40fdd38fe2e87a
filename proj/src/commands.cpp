#include "dislab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>

#include "dislab/dynamics.hpp"
#include "dislab/errors.hpp"
#include "dislab/force.hpp"
#include "dislab/sampling.hpp"
#include "dislab/verify.hpp"

namespace dislab {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.output_dir);
    std::filesystem::path p = std::filesystem::path(cfg.output_dir) / name;
    std::ofstream os(p);
    if (!os) throw ConfigError("cannot open output file '" + p.string() + "'");
    return os;
}

BoundaryResponse solve_backend(const RunConfig& cfg) {
    if (cfg.backend == RunConfig::Backend::Analytic)
        return solve_disk_analytic(cfg.material, cfg.system);
    return solve_fem(cfg.material, cfg.system, cfg.geometry, cfg.resolution);
}

int map_exception(std::ostream& diag, const std::string& cmd) {
    try {
        throw;
    } catch (const ConfigError& e) {
        diag << cmd << ": config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        diag << cmd << ": invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const OutsideDomainError& e) {
        diag << cmd << ": invalid system: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CoreOverlapError& e) {
        diag << cmd << ": invalid system: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BoundaryContactError& e) {
        diag << cmd << ": invalid system: " << e.what() << "\n";
        return kExitConfig;
    } catch (const WrongBackendError& e) {
        diag << cmd << ": config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SolverFailureError& e) {
        diag << cmd << ": solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const MeshFailureError& e) {
        diag << cmd << ": solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const Error& e) {
        diag << cmd << ": numerical failure: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const std::exception& e) {
        diag << cmd << ": error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

}  // namespace

int cmd_energy(const RunConfig& cfg, std::ostream& diag) {
    try {
        require_valid_system(cfg.geometry, cfg.system, cfg.material);
        BoundaryResponse response = solve_backend(cfg);
        double R = cfg.energy_R > 0.0 ? cfg.energy_R : 0.5 * cfg.system.epsilon0;
        EnergyBreakdown br =
            renormalized_energy(cfg.material, cfg.system, cfg.geometry, response, R);

        auto os = open_output(cfg, "energy.csv");
        os << "system,kind,param,core_coefficient,U_S,U_I,U_E,U_total,J_eps\n";
        os << cfg.system_id << ",R," << num(br.R_used) << "," << num(br.core_coefficient) << ","
           << num(br.U_S) << "," << num(br.U_I) << "," << num(br.U_E) << "," << num(br.U_total)
           << ",\n";
        for (double eps : cfg.epsilon_ladder) {
            double J = regularized_energy(cfg.material, cfg.system, cfg.geometry, response, eps);
            os << cfg.system_id << ",eps," << num(eps) << "," << num(br.core_coefficient) << ","
               << num(br.U_S) << "," << num(br.U_I) << "," << num(br.U_E) << ","
               << num(br.U_total) << "," << num(J) << "\n";
        }
        diag << "energy: U_total = " << num(br.U_total) << " (R = " << num(br.R_used) << ")\n";
        return kExitOk;
    } catch (...) {
        return map_exception(diag, "energy");
    }
}

int cmd_forces(const RunConfig& cfg, std::ostream& diag) {
    try {
        require_valid_system(cfg.geometry, cfg.system, cfg.material);
        BoundaryResponse response = solve_backend(cfg);
        ForceReport report =
            compute_forces(cfg.material, cfg.system, response, cfg.geometry, cfg.force_R);

        auto os = open_output(cfg, "forces.csv");
        os << "system,index,route,f_x,f_y,R,discrepancy\n";
        for (const auto& e : report.entries) {
            os << cfg.system_id << "," << e.index << ",contour," << num(e.contour.x) << ","
               << num(e.contour.y) << "," << num(e.R) << "," << num(e.discrepancy) << "\n";
            os << cfg.system_id << "," << e.index << ",explicit," << num(e.explicit_route.x)
               << "," << num(e.explicit_route.y) << "," << num(e.R) << "," << num(e.discrepancy)
               << "\n";
        }
        if (cfg.discrepancy_tol > 0.0) {
            for (const auto& e : report.entries) {
                double anchor = 1.0 + norm(e.explicit_route);
                if (e.discrepancy > cfg.discrepancy_tol * anchor) {
                    diag << "forces: route discrepancy " << num(e.discrepancy)
                         << " exceeds tolerance for dislocation " << e.index << "\n";
                    return kExitCheckFailed;
                }
            }
        }
        diag << "forces: " << report.entries.size() << " dislocations reported\n";
        return kExitOk;
    } catch (...) {
        return map_exception(diag, "forces");
    }
}

int cmd_flow(const RunConfig& cfg, std::ostream& diag) {
    try {
        FlowOptions opts;
        opts.dt = cfg.dt;
        opts.max_steps = cfg.max_steps;
        opts.mobility = cfg.mobility;
        opts.force_threshold = cfg.force_threshold;
        opts.fem_resolution = cfg.resolution;
        Trajectory traj = evolve(cfg.material, cfg.system, cfg.geometry, opts);

        auto os = open_output(cfg, "trajectory.csv");
        os << "step,t,index,x,y,f_x,f_y,U_total,termination\n";
        for (size_t s = 0; s < traj.samples.size(); ++s) {
            const auto& smp = traj.samples[s];
            for (size_t i = 0; i < smp.positions.size(); ++i) {
                bool last_row = (s + 1 == traj.samples.size()) && (i + 1 == smp.positions.size());
                os << s << "," << num(smp.time) << "," << i << "," << num(smp.positions[i].x)
                   << "," << num(smp.positions[i].y) << "," << num(smp.forces[i].x) << ","
                   << num(smp.forces[i].y) << "," << num(smp.energy) << ","
                   << (last_row ? to_string(traj.reason) : "") << "\n";
            }
        }
        diag << "flow: " << traj.samples.size() - 1 << " steps, stopped by "
             << to_string(traj.reason) << "\n";
        return kExitOk;
    } catch (...) {
        return map_exception(diag, "flow");
    }
}

namespace {

struct VerifyRow {
    std::string check;
    double lhs = 0.0, rhs = 0.0, diff = 0.0, tol = 0.0;
    bool pass = false;
};

void add_row(std::vector<VerifyRow>& rows, const std::string& check, double lhs, double rhs,
             double tol) {
    VerifyRow r;
    r.check = check;
    r.lhs = lhs;
    r.rhs = rhs;
    r.diff = std::abs(lhs - rhs);
    r.tol = tol;
    r.pass = r.diff <= tol;
    rows.push_back(r);
}

void suite_annulus(std::mt19937_64& rng, std::vector<VerifyRow>& rows) {
    std::uniform_real_distribution<double> mu(0.5, 3.0), lam(0.5, 2.5), bb(0.3, 2.0),
        rr(0.2, 0.8), fr(0.05, 0.8);
    for (int i = 0; i < 20; ++i) {
        Material m(mu(rng), lam(rng));
        double b = bb(rng), R = rr(rng), eps = R * fr(rng);
        double closed = annulus_energy(m, b, R, eps);
        double quad = annulus_energy_quadrature(m, b, R, eps);
        add_row(rows, "annulus[" + std::to_string(i) + "]", closed, quad,
                1e-9 * std::abs(closed));
    }
}

void suite_circulation(std::mt19937_64& rng, std::vector<VerifyRow>& rows) {
    std::uniform_real_distribution<double> cr(0.0, 0.45), ca(0.0, 2 * std::numbers::pi),
        rad(0.1, 0.45);
    for (int i = 0; i < 20; ++i) {
        DislocationSystem sys = sample_disk_system(rng, 1, 3);
        auto strains = strains_of(sys, Material(1.0, 1.0));
        Vec2 center;
        double radius = 0.0;
        double expected = 0.0;
        for (int guard = 0; guard < 200; ++guard) {
            double r = cr(rng), a = ca(rng);
            center = {r * std::cos(a), r * std::sin(a)};
            radius = rad(rng);
            if (norm(center) + radius > 0.98) continue;
            bool clear = true;
            expected = 0.0;
            for (const auto& d : sys.dislocations) {
                double dist = norm(d.position - center);
                if (std::abs(dist - radius) < 0.05) clear = false;
                if (dist < radius) expected += d.burgers;
            }
            if (clear) break;
        }
        auto field = [&](Vec2 x) { return superposed_k(strains, x); };
        double got = circulation(field, circle_contour(center, radius));
        add_row(rows, "circulation[" + std::to_string(i) + "]", expected, got, 1e-10);
    }
}

void suite_noflux(std::mt19937_64& rng, std::vector<VerifyRow>& rows) {
    std::uniform_real_distribution<double> lam(0.4, 3.0), bb(-2.0, 2.0), rr(0.05, 1.5),
        tt(0.0, 2 * std::numbers::pi);
    for (int i = 0; i < 20; ++i) {
        Material m(1.0, lam(rng));
        double b = bb(rng);
        if (std::abs(b) < 0.1) b = 0.5;
        SingularStrain s(Dislocation({0.2, -0.1}, b), m.lambda);
        double r = rr(rng), tau = tt(rng);
        Vec2 k = k_eval_anomaly(s, r, tau);
        Vec2 n = ellipse_normal(m.lambda, tau);
        double val = dot(apply_L(m, k), n);
        double scale = norm(apply_L(m, k));
        add_row(rows, "noflux[" + std::to_string(i) + "]", val, 0.0, 1e-14 * (1.0 + scale));
    }
}

void suite_compatibility(std::mt19937_64& rng, std::vector<VerifyRow>& rows) {
    for (int i = 0; i < 5; ++i) {
        DislocationSystem sys = sample_disk_system(rng, 1, 3);
        Material m(1.5, 1.0 + 0.3 * i);
        auto strains = strains_of(sys, m);
        DomainGeometry disk = DomainGeometry::unit_disk();
        double val = flux_Lk(m, strains, domain_boundary(disk));
        add_row(rows, "compatibility-disk[" + std::to_string(i) + "]", val, 0.0, 1e-8);

        DomainGeometry square =
            DomainGeometry::polygon({{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}});
        double sval = flux_Lk(m, strains, domain_boundary(square));
        add_row(rows, "compatibility-square[" + std::to_string(i) + "]", sval, 0.0, 1e-8);
    }
}

DislocationSystem fixed_pair_system() {
    return DislocationSystem({Dislocation({0.35, 0.1}, 1.0), Dislocation({-0.3, -0.2}, -1.3)},
                             0.1);
}

void suite_rindep_energy(std::mt19937_64&, std::vector<VerifyRow>& rows) {
    Material m(1.0, 1.0);
    DislocationSystem sys = fixed_pair_system();
    DomainGeometry disk = DomainGeometry::unit_disk();
    double u1 = self_energy(m, sys, disk, 0.02);
    double u2 = self_energy(m, sys, disk, 0.05);
    double u3 = self_energy(m, sys, disk, 0.08);
    double spread = std::max({u1, u2, u3}) - std::min({u1, u2, u3});
    add_row(rows, "rindep-energy", spread, 0.0, 1e-6 * (1.0 + std::abs(u2)));
}

void suite_rindep_force(std::mt19937_64&, std::vector<VerifyRow>& rows) {
    Material m(1.0, 1.0);
    DislocationSystem sys = fixed_pair_system();
    DomainGeometry disk = DomainGeometry::unit_disk();
    BoundaryResponse resp = solve_disk_analytic(m, sys);
    Vec2 f1 = force_contour(m, sys, resp, disk, 0, 0.02);
    Vec2 f2 = force_contour(m, sys, resp, disk, 0, 0.05);
    Vec2 f3 = force_contour(m, sys, resp, disk, 0, 0.08);
    double spread = std::max({norm(f1 - f2), norm(f1 - f3), norm(f2 - f3)});
    add_row(rows, "rindep-force", spread, 0.0, 1e-6 * (1.0 + norm(f2)));
}

void suite_routes(std::mt19937_64& rng, std::vector<VerifyRow>& rows) {
    Material m(1.0, 1.0);
    DomainGeometry disk = DomainGeometry::unit_disk();
    for (int i = 0; i < 10; ++i) {
        DislocationSystem sys = sample_disk_system(rng, 1, 3);
        BoundaryResponse resp = solve_disk_analytic(m, sys);
        ForceReport rep = compute_forces(m, sys, resp, disk);
        double worst = 0.0, anchor = 1.0;
        for (const auto& e : rep.entries) {
            worst = std::max(worst, e.discrepancy);
            anchor = std::max(anchor, 1.0 + norm(e.explicit_route));
        }
        add_row(rows, "routes[" + std::to_string(i) + "]", worst, 0.0, 1e-8 * anchor);
    }
}

void suite_gradU(std::mt19937_64& rng, std::vector<VerifyRow>& rows) {
    Material m(1.0, 1.0);
    DomainGeometry disk = DomainGeometry::unit_disk();
    DislocationSystem sys = fixed_pair_system();
    BoundaryResponse resp = solve_disk_analytic(m, sys);
    std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
    for (size_t ell = 0; ell < sys.size(); ++ell) {
        double a = ang(rng);
        Vec2 v{std::cos(a), std::sin(a)};
        double fd = grad_U_fd(m, sys, disk, ell, v, 2e-3);
        double expect = -dot(v, force_explicit(m, sys, resp, ell));
        add_row(rows, "gradU[" + std::to_string(ell) + "]", fd, expect,
                1e-6 * (1.0 + std::abs(expect)));
    }
}

void suite_transport(std::mt19937_64&, std::vector<VerifyRow>& rows) {
    const double h = 1e-3, eps = 0.25, lambda = 1.7;
    const Vec2 center{0.15, -0.1}, v{0.6, 0.8};
    struct Case {
        const char* name;
        std::function<double(Vec2, double)> f;
    };
    const Case cases[] = {
        {"transport-const", [](Vec2, double) { return 1.0; }},
        {"transport-x1", [](Vec2 x, double) { return x.x; }},
        {"transport-xi-x2", [](Vec2 x, double xi) { return xi * x.y; }},
    };
    for (const auto& c : cases) {
        auto rep = verify::moving_domain_derivative_check(c.f, center, eps, lambda, v, h);
        double scale = 1.0 + std::abs(rep.lhs_core) + std::abs(rep.lhs_complement);
        add_row(rows, std::string(c.name) + "-core", rep.lhs_core, rep.rhs_core,
                20.0 * h * h * scale);
        add_row(rows, std::string(c.name) + "-complement", rep.lhs_complement,
                rep.rhs_complement, 20.0 * h * h * scale);
    }
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = {
        "annulus",      "circulation",  "noflux", "compatibility", "rindep-energy",
        "rindep-force", "routes",       "gradU",  "transport",     "all"};
    return names;
}

int cmd_verify(const RunConfig& cfg, std::ostream& diag) {
    try {
        std::vector<std::string> suites = cfg.suites;
        if (suites.empty()) suites = {"all"};
        for (const auto& s : suites) {
            if (std::find(verify_suite_names().begin(), verify_suite_names().end(), s) ==
                verify_suite_names().end()) {
                diag << "verify: unknown suite '" << s << "'; available:";
                for (const auto& n : verify_suite_names()) diag << " " << n;
                diag << "\n";
                return kExitConfig;
            }
        }

        std::mt19937_64 rng(env_seed());
        std::vector<VerifyRow> rows;
        auto wants = [&](const char* name) {
            return std::find(suites.begin(), suites.end(), "all") != suites.end() ||
                   std::find(suites.begin(), suites.end(), name) != suites.end();
        };
        if (wants("annulus")) suite_annulus(rng, rows);
        if (wants("circulation")) suite_circulation(rng, rows);
        if (wants("noflux")) suite_noflux(rng, rows);
        if (wants("compatibility")) suite_compatibility(rng, rows);
        if (wants("rindep-energy")) suite_rindep_energy(rng, rows);
        if (wants("rindep-force")) suite_rindep_force(rng, rows);
        if (wants("routes")) suite_routes(rng, rows);
        if (wants("gradU")) suite_gradU(rng, rows);
        if (wants("transport")) suite_transport(rng, rows);

        auto os = open_output(cfg, "verify.csv");
        os << "check,value_lhs,value_rhs,abs_diff,tolerance,pass\n";
        int failures = 0;
        for (const auto& r : rows) {
            os << r.check << "," << num(r.lhs) << "," << num(r.rhs) << "," << num(r.diff) << ","
               << num(r.tol) << "," << (r.pass ? "1" : "0") << "\n";
            if (!r.pass) {
                ++failures;
                diag << "verify: FAIL " << r.check << " (diff " << num(r.diff) << " > tol "
                     << num(r.tol) << ")\n";
            }
        }
        diag << "verify: " << rows.size() - failures << "/" << rows.size() << " checks passed\n";
        return failures == 0 ? kExitOk : kExitCheckFailed;
    } catch (...) {
        return map_exception(diag, "verify");
    }
}

int cmd_dump_config(const RunConfig& cfg, std::ostream& out) {
    out << dump_config(cfg);
    return kExitOk;
}

}  // namespace dislab

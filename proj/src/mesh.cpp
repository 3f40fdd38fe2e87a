#include "dislab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

#include "dislab/errors.hpp"

namespace dislab {

double Mesh::triangle_area(size_t t) const {
    const auto& tr = triangles[t];
    return 0.5 * cross(vertices[tr[1]] - vertices[tr[0]], vertices[tr[2]] - vertices[tr[0]]);
}

void Mesh::validate() const {
    const int nv = static_cast<int>(vertices.size());
    for (const auto& t : triangles) {
        for (int v : t)
            if (v < 0 || v >= nv) throw MeshFailureError("triangle vertex index out of range");
        if (0.5 * cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]) <= 0.0)
            throw MeshFailureError("triangle with non-positive orientation");
    }
    // Boundary edges must pair into closed loops: in-degree == out-degree == 1.
    std::map<int, int> out_deg, in_deg;
    for (const auto& e : boundary_edges) {
        for (int v : e)
            if (v < 0 || v >= nv) throw MeshFailureError("boundary edge index out of range");
        out_deg[e[0]]++;
        in_deg[e[1]]++;
    }
    for (const auto& [v, d] : out_deg) {
        if (d != 1 || in_deg[v] != 1)
            throw MeshFailureError("boundary edges do not form closed loops");
    }
}

namespace {

// ---------------- Bowyer-Watson Delaunay ----------------

struct DTri {
    int v[3];
    int n[3];  // neighbor across edge (v[i], v[i+1]); -1 if none
    bool alive = true;
};

struct Delaunay {
    std::vector<Vec2> pts;
    std::vector<DTri> tris;
    int last_alive = 0;

    static double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

    bool in_circumcircle(const DTri& t, Vec2 p) const {
        Vec2 a = pts[t.v[0]], b = pts[t.v[1]], c = pts[t.v[2]];
        double ax = a.x - p.x, ay = a.y - p.y;
        double bx = b.x - p.x, by = b.y - p.y;
        double cx = c.x - p.x, cy = c.y - p.y;
        double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                     (bx * bx + by * by) * (ax * cy - cx * ay) +
                     (cx * cx + cy * cy) * (ax * by - bx * ay);
        return det > 0.0;
    }

    int locate(Vec2 p) const {
        int t = last_alive;
        if (t < 0 || t >= static_cast<int>(tris.size()) || !tris[t].alive) {
            t = -1;
            for (int i = static_cast<int>(tris.size()) - 1; i >= 0; --i)
                if (tris[i].alive) { t = i; break; }
        }
        int guard = static_cast<int>(tris.size()) * 4 + 64;
        while (guard-- > 0) {
            const DTri& tr = tris[t];
            bool moved = false;
            for (int e = 0; e < 3; ++e) {
                Vec2 a = pts[tr.v[e]], b = pts[tr.v[(e + 1) % 3]];
                if (orient(a, b, p) < 0.0) {
                    int nb = tr.n[e];
                    if (nb < 0) return t;  // outside hull; caller handles
                    t = nb;
                    moved = true;
                    break;
                }
            }
            if (!moved) return t;
        }
        // Walk cycled (degenerate data); fall back to scanning.
        for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
            if (!tris[i].alive) continue;
            const DTri& tr = tris[i];
            if (orient(pts[tr.v[0]], pts[tr.v[1]], p) >= 0 &&
                orient(pts[tr.v[1]], pts[tr.v[2]], p) >= 0 &&
                orient(pts[tr.v[2]], pts[tr.v[0]], p) >= 0)
                return i;
        }
        throw MeshFailureError("Delaunay point location failed");
    }

    void insert(int pi) {
        Vec2 p = pts[pi];
        int start = locate(p);
        // Grow the cavity of triangles whose circumcircle contains p.
        std::vector<int> bad;
        std::vector<int> stack{start};
        std::vector<char> seen(tris.size(), 0);
        seen[start] = 1;
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            if (!tris[t].alive || !in_circumcircle(tris[t], p)) continue;
            bad.push_back(t);
            for (int e = 0; e < 3; ++e) {
                int nb = tris[t].n[e];
                if (nb >= 0 && !seen[nb]) {
                    seen[nb] = 1;
                    stack.push_back(nb);
                }
            }
        }
        if (bad.empty()) {
            // p lies outside every circumcircle near `start` (should not happen
            // inside the super-triangle); force the containing triangle.
            bad.push_back(start);
        }
        std::vector<char> is_bad(tris.size(), 0);
        for (int t : bad) is_bad[t] = 1;

        // Cavity boundary: directed edges of bad triangles whose neighbor is not bad.
        struct CavEdge { int a, b, outside, out_edge; };
        std::vector<CavEdge> cavity;
        for (int t : bad) {
            for (int e = 0; e < 3; ++e) {
                int nb = tris[t].n[e];
                if (nb < 0 || !is_bad[nb]) {
                    int a = tris[t].v[e], b = tris[t].v[(e + 1) % 3];
                    int out_edge = -1;
                    if (nb >= 0) {
                        for (int k = 0; k < 3; ++k)
                            if (tris[nb].n[k] == t) out_edge = k;
                    }
                    cavity.push_back({a, b, nb, out_edge});
                }
            }
        }
        for (int t : bad) tris[t].alive = false;

        // New fan around p; link neighbors along shared spokes.
        std::map<std::pair<int, int>, int> spoke;  // directed edge (p,a) -> new tri
        int first_new = static_cast<int>(tris.size());
        for (const auto& ce : cavity) {
            DTri nt;
            nt.v[0] = pi; nt.v[1] = ce.a; nt.v[2] = ce.b;
            nt.n[0] = -1; nt.n[1] = ce.outside; nt.n[2] = -1;
            int idx = static_cast<int>(tris.size());
            tris.push_back(nt);
            if (ce.outside >= 0 && ce.out_edge >= 0) tris[ce.outside].n[ce.out_edge] = idx;
            spoke[{pi, ce.a}] = idx;
        }
        for (int idx = first_new; idx < static_cast<int>(tris.size()); ++idx) {
            DTri& t = tris[idx];
            // Edge 0 is (p, a): twin lives in the triangle whose boundary edge ends at a.
            auto it = spoke.find({pi, t.v[2]});
            if (it != spoke.end()) t.n[2] = it->second;  // edge (b, p)
            for (int jdx = first_new; jdx < static_cast<int>(tris.size()); ++jdx) {
                if (tris[jdx].v[2] == t.v[1]) t.n[0] = jdx;
            }
        }
        last_alive = first_new;
    }
};

std::vector<int> hull_filter_triangles(const Delaunay& dt, int n_real,
                                       const DomainGeometry& geom) {
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(dt.tris.size()); ++i) {
        const DTri& t = dt.tris[i];
        if (!t.alive) continue;
        if (t.v[0] >= n_real || t.v[1] >= n_real || t.v[2] >= n_real) continue;
        Vec2 c = (dt.pts[t.v[0]] + dt.pts[t.v[1]] + dt.pts[t.v[2]]) / 3.0;
        if (geom.boundary_distance(c) > 0.0) keep.push_back(i);
    }
    return keep;
}

double local_target(Vec2 p, double resolution, const MeshGrading& grading) {
    if (grading.centers.empty() || grading.radius <= 0.0 || grading.factor <= 1.0)
        return resolution;
    double d = std::numeric_limits<double>::infinity();
    for (Vec2 c : grading.centers) d = std::min(d, norm(p - c));
    if (d <= grading.radius) return resolution / grading.factor;
    double blend_end = 1.6 * grading.radius;
    if (d >= blend_end) return resolution;
    double s = (d - grading.radius) / (blend_end - grading.radius);
    double inv = (1.0 - s) / grading.factor + s;
    return resolution * inv;
}

std::vector<Vec2> boundary_points(const DomainGeometry& geom, double resolution,
                                  const MeshGrading& grading) {
    std::vector<Vec2> pts;
    if (geom.is_unit_disk()) {
        // Walk the circle with locally adapted angular steps, then rescale so
        // the walk closes exactly.
        std::vector<double> angles{0.0};
        double theta = 0.0;
        while (true) {
            Vec2 p{std::cos(theta), std::sin(theta)};
            double step = local_target(p, resolution, grading);
            theta += step;
            if (theta >= 2.0 * std::numbers::pi) break;
            angles.push_back(theta);
        }
        double scale = 2.0 * std::numbers::pi / theta;
        for (double a : angles) pts.push_back({std::cos(a * scale), std::sin(a * scale)});
        return pts;
    }
    const auto& v = geom.vertices();
    for (size_t i = 0; i < v.size(); ++i) {
        Vec2 a = v[i], b = v[(i + 1) % v.size()];
        // Adaptive subdivision of the edge: split while longer than the local target.
        std::vector<Vec2> seg{a, b};
        bool changed = true;
        int guard = 24;
        while (changed && guard-- > 0) {
            changed = false;
            std::vector<Vec2> next;
            for (size_t k = 0; k + 1 < seg.size(); ++k) {
                next.push_back(seg[k]);
                Vec2 mid = (seg[k] + seg[k + 1]) * 0.5;
                if (norm(seg[k + 1] - seg[k]) > 1.3 * local_target(mid, resolution, grading)) {
                    next.push_back(mid);
                    changed = true;
                }
            }
            next.push_back(seg.back());
            seg = next;
        }
        for (size_t k = 0; k + 1 < seg.size(); ++k) pts.push_back(seg[k]);  // omit edge end
    }
    return pts;
}

}  // namespace

MeshGrading core_grading(const DislocationSystem& sys) {
    MeshGrading g;
    for (const auto& d : sys.dislocations) g.centers.push_back(d.position);
    g.radius = 3.0 * sys.epsilon0;
    g.factor = 4.0;
    return g;
}

Mesh generate_mesh(const DomainGeometry& geom, double resolution, const MeshGrading& grading) {
    if (!(resolution > 0.0)) throw MeshFailureError("mesh resolution must be > 0");

    std::vector<Vec2> pts = boundary_points(geom, resolution, grading);

    // Bounding box.
    Vec2 lo{-1.0, -1.0}, hi{1.0, 1.0};
    if (!geom.is_unit_disk()) {
        lo = hi = geom.vertices()[0];
        for (Vec2 v : geom.vertices()) {
            lo.x = std::min(lo.x, v.x); lo.y = std::min(lo.y, v.y);
            hi.x = std::max(hi.x, v.x); hi.y = std::max(hi.y, v.y);
        }
    }

    // Interior points: layered hexagonal lattices, one per refinement level,
    // each kept where the local target spacing matches its level.
    int levels = 1;
    if (!grading.centers.empty() && grading.factor > 1.0)
        levels = 1 + static_cast<int>(std::ceil(std::log2(grading.factor)));
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> jit(-0.12, 0.12);
    for (int lev = 0; lev < levels; ++lev) {
        double h = resolution / std::pow(2.0, lev);
        double h_coarser = (lev == 0) ? std::numeric_limits<double>::infinity()
                                      : resolution / std::pow(2.0, lev - 1);
        double row = h * std::sqrt(3.0) / 2.0;
        int jmin = static_cast<int>(std::floor((lo.y - h) / row));
        int jmax = static_cast<int>(std::ceil((hi.y + h) / row));
        for (int j = jmin; j <= jmax; ++j) {
            double y = j * row;
            double off = (j % 2 == 0) ? 0.0 : 0.5 * h;
            int imin = static_cast<int>(std::floor((lo.x - h) / h));
            int imax = static_cast<int>(std::ceil((hi.x + h) / h));
            for (int i = imin; i <= imax; ++i) {
                Vec2 p{i * h + off + jit(rng) * h, y + jit(rng) * h};
                double target = local_target(p, resolution, grading);
                if (!(target >= 0.75 * h && target < 0.75 * h_coarser)) continue;
                if (geom.boundary_distance(p) < 0.6 * target) continue;
                pts.push_back(p);
            }
        }
    }

    // Super-triangle enclosing everything.
    Vec2 c = (lo + hi) * 0.5;
    double span = std::max(hi.x - lo.x, hi.y - lo.y) * 20.0 + 10.0;
    const size_t n_real = pts.size();
    Delaunay dt;
    dt.pts = pts;
    dt.pts.push_back(c + Vec2{-span, -span});
    dt.pts.push_back(c + Vec2{span, -span});
    dt.pts.push_back(c + Vec2{0.0, span});
    DTri super;
    super.v[0] = static_cast<int>(n_real);
    super.v[1] = static_cast<int>(n_real + 1);
    super.v[2] = static_cast<int>(n_real + 2);
    super.n[0] = super.n[1] = super.n[2] = -1;
    dt.tris.push_back(super);

    std::vector<int> order(n_real);
    for (size_t i = 0; i < n_real; ++i) order[i] = static_cast<int>(i);
    std::shuffle(order.begin(), order.end(), rng);
    for (int pi : order) dt.insert(pi);

    std::vector<int> keep = hull_filter_triangles(dt, static_cast<int>(n_real), geom);
    if (keep.empty()) throw MeshFailureError("mesh generation produced no interior triangles");

    // Compact vertices.
    std::vector<int> remap(n_real, -1);
    Mesh mesh;
    for (int t : keep) {
        for (int e = 0; e < 3; ++e) {
            int v = dt.tris[t].v[e];
            if (remap[v] < 0) {
                remap[v] = static_cast<int>(mesh.vertices.size());
                mesh.vertices.push_back(dt.pts[v]);
            }
        }
        std::array<int, 3> tri{remap[dt.tris[t].v[0]], remap[dt.tris[t].v[1]],
                               remap[dt.tris[t].v[2]]};
        if (cross(mesh.vertices[tri[1]] - mesh.vertices[tri[0]],
                  mesh.vertices[tri[2]] - mesh.vertices[tri[0]]) < 0.0)
            std::swap(tri[1], tri[2]);
        mesh.triangles.push_back(tri);
    }

    // Boundary edges: edges without a twin, oriented with the domain on the left.
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            edge_count[{a, b}]++;
        }
    }
    for (const auto& [e, cnt] : edge_count) {
        (void)cnt;
        if (!edge_count.count({e.second, e.first})) mesh.boundary_edges.push_back({e.first, e.second});
    }

    // Two sweeps of guarded Laplacian smoothing on interior vertices.
    std::vector<char> on_boundary(mesh.vertices.size(), 0);
    for (const auto& e : mesh.boundary_edges) { on_boundary[e[0]] = on_boundary[e[1]] = 1; }
    std::vector<std::vector<int>> vtx_tris(mesh.vertices.size());
    for (size_t t = 0; t < mesh.triangles.size(); ++t)
        for (int v : mesh.triangles[t]) vtx_tris[v].push_back(static_cast<int>(t));
    for (int pass = 0; pass < 2; ++pass) {
        for (size_t v = 0; v < mesh.vertices.size(); ++v) {
            if (on_boundary[v]) continue;
            Vec2 acc{0.0, 0.0};
            int cnt = 0;
            for (int t : vtx_tris[v])
                for (int w : mesh.triangles[t])
                    if (w != static_cast<int>(v)) { acc += mesh.vertices[w]; ++cnt; }
            if (cnt == 0) continue;
            Vec2 prev = mesh.vertices[v];
            mesh.vertices[v] = acc / static_cast<double>(cnt);
            bool ok = true;
            for (int t : vtx_tris[v])
                if (mesh.triangle_area(t) <= 0.0) { ok = false; break; }
            if (!ok) mesh.vertices[v] = prev;
        }
    }

    mesh.validate();
    return mesh;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
    os.precision(17);
    os << mesh.vertices.size() << "\n";
    for (Vec2 v : mesh.vertices) os << v.x << " " << v.y << "\n";
    os << mesh.triangles.size() << "\n";
    for (const auto& t : mesh.triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
    os << mesh.boundary_edges.size() << "\n";
    for (const auto& e : mesh.boundary_edges) os << e[0] << " " << e[1] << "\n";
}

Mesh read_mesh(std::istream& is) {
    Mesh mesh;
    size_t nv = 0, nt = 0, nb = 0;
    if (!(is >> nv)) throw MeshFailureError("mesh read: missing vertex count");
    mesh.vertices.resize(nv);
    for (auto& v : mesh.vertices)
        if (!(is >> v.x >> v.y)) throw MeshFailureError("mesh read: bad vertex line");
    if (!(is >> nt)) throw MeshFailureError("mesh read: missing triangle count");
    mesh.triangles.resize(nt);
    for (auto& t : mesh.triangles)
        if (!(is >> t[0] >> t[1] >> t[2])) throw MeshFailureError("mesh read: bad triangle line");
    if (!(is >> nb)) throw MeshFailureError("mesh read: missing boundary edge count");
    mesh.boundary_edges.resize(nb);
    for (auto& e : mesh.boundary_edges)
        if (!(is >> e[0] >> e[1])) throw MeshFailureError("mesh read: bad boundary edge line");
    mesh.validate();
    return mesh;
}

MeshLocator::MeshLocator(const Mesh& mesh) : mesh_(mesh) {
    lo_ = hi_ = mesh.vertices.at(0);
    for (Vec2 v : mesh.vertices) {
        lo_.x = std::min(lo_.x, v.x); lo_.y = std::min(lo_.y, v.y);
        hi_.x = std::max(hi_.x, v.x); hi_.y = std::max(hi_.y, v.y);
    }
    int n = std::max(1, static_cast<int>(std::sqrt(mesh.triangles.size() / 2.0)));
    nx_ = ny_ = n;
    cells_.assign(static_cast<size_t>(nx_) * ny_, {});
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        Vec2 tlo = mesh.vertices[mesh.triangles[t][0]], thi = tlo;
        for (int v : mesh.triangles[t]) {
            tlo.x = std::min(tlo.x, mesh.vertices[v].x);
            tlo.y = std::min(tlo.y, mesh.vertices[v].y);
            thi.x = std::max(thi.x, mesh.vertices[v].x);
            thi.y = std::max(thi.y, mesh.vertices[v].y);
        }
        int i0 = cell_index_x(tlo.x), i1 = cell_index_x(thi.x);
        int j0 = cell_index_y(tlo.y), j1 = cell_index_y(thi.y);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i)
                cells_[static_cast<size_t>(j) * nx_ + i].push_back(static_cast<int>(t));
    }
}

int MeshLocator::locate(Vec2 p, std::array<double, 3>* bary) const {
    int i = cell_index_x(p.x), j = cell_index_y(p.y);
    const auto try_tri = [&](int t) -> bool {
        const auto& tr = mesh_.triangles[t];
        Vec2 a = mesh_.vertices[tr[0]], b = mesh_.vertices[tr[1]], c = mesh_.vertices[tr[2]];
        double area = cross(b - a, c - a);
        double w0 = cross(b - p, c - p) / area;
        double w1 = cross(c - p, a - p) / area;
        double w2 = 1.0 - w0 - w1;
        if (w0 >= -1e-10 && w1 >= -1e-10 && w2 >= -1e-10) {
            if (bary) *bary = {w0, w1, w2};
            return true;
        }
        return false;
    };
    for (int t : cells_[static_cast<size_t>(j) * nx_ + i])
        if (try_tri(t)) return t;
    // Neighboring cells (point close to a cell border).
    for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0) continue;
            int ii = std::clamp(i + di, 0, nx_ - 1), jj = std::clamp(j + dj, 0, ny_ - 1);
            for (int t : cells_[static_cast<size_t>(jj) * nx_ + ii])
                if (try_tri(t)) return t;
        }
    return -1;
}

}  // namespace dislab

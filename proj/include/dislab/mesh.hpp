#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dislab/geometry.hpp"
#include "dislab/model.hpp"

namespace dislab {

// Conforming triangulation of the cross-section. Triangles are
// counterclockwise; boundary edges are oriented with the domain on the left.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> boundary_edges;

    size_t vertex_count() const { return vertices.size(); }
    size_t triangle_count() const { return triangles.size(); }
    double triangle_area(size_t t) const;
    void validate() const;  // throws MeshFailureError on structural defects
};

struct MeshGrading {
    std::vector<Vec2> centers;
    double radius = 0.0;   // graded zone around each center
    double factor = 4.0;   // spacing divisor inside the zone
};

// Boundary-conforming Delaunay triangulation with target edge length
// `resolution`, graded finer near the given centers.
Mesh generate_mesh(const DomainGeometry& geom, double resolution,
                   const MeshGrading& grading = {});

MeshGrading core_grading(const DislocationSystem& sys);

// Plain-text mesh exchange format (see README): vertex count, "x y" lines,
// triangle count, "i j k" lines (zero-based), boundary edge count, "a b" lines.
void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);

// Uniform-grid point locator over the mesh.
class MeshLocator {
  public:
    explicit MeshLocator(const Mesh& mesh);
    // Triangle containing p (barycentric tolerance), or -1.
    int locate(Vec2 p, std::array<double, 3>* bary = nullptr) const;

  private:
    int cell_index_x(double x) const {
        double w = (hi_.x - lo_.x) / nx_;
        int i = w > 0 ? static_cast<int>((x - lo_.x) / w) : 0;
        return std::min(std::max(i, 0), nx_ - 1);
    }
    int cell_index_y(double y) const {
        double w = (hi_.y - lo_.y) / ny_;
        int j = w > 0 ? static_cast<int>((y - lo_.y) / w) : 0;
        return std::min(std::max(j, 0), ny_ - 1);
    }

    const Mesh& mesh_;
    Vec2 lo_, hi_;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> cells_;
};

}  // namespace dislab

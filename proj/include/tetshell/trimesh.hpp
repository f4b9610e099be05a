// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_TRIMESH_HPP
#define TETSHELL_TRIMESH_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "tetshell/vec3.hpp"

namespace tetshell {

// Indexed triangle surface. Normals are per vertex and empty until computed.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<uint32_t, 3>> faces;
    std::vector<Vec3> normals;

    bool has_normals() const { return normals.size() == vertices.size() && !vertices.empty(); }
    Aabb bounds() const;
};

// Throws InputError on out-of-range or degenerate (repeated index) faces.
void validate_mesh(const TriMesh& mesh);

struct NormalWarnings {
    std::vector<uint32_t> isolated_vertices;  // got a zero normal
    uint32_t zero_area_faces = 0;             // skipped during accumulation
};

// Area-weighted average of incident face normals, normalized in place.
// CCW winding = outward. Throws InputError if the mesh has no faces.
NormalWarnings compute_vertex_normals(TriMesh& mesh);

Vec3 face_normal(const TriMesh& mesh, uint32_t face);
double face_area(const TriMesh& mesh, uint32_t face);
double surface_area(const TriMesh& mesh);

// Edges referenced by exactly one face. Zero for a closed mesh.
size_t count_boundary_edges(const TriMesh& mesh);

}  // namespace tetshell

#endif

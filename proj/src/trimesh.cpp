// SPDX-License-Identifier: Apache-2.0

#include "tetshell/trimesh.hpp"

#include <map>
#include <string>

#include "tetshell/error.hpp"

namespace tetshell {

Aabb TriMesh::bounds() const {
    Aabb box;
    for (const Vec3& v : vertices) box.expand(v);
    return box;
}

void validate_mesh(const TriMesh& mesh) {
    const uint32_t n = uint32_t(mesh.vertices.size());
    for (size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& t = mesh.faces[f];
        for (int k = 0; k < 3; ++k)
            if (t[k] >= n)
                throw InputError("face " + std::to_string(f) + " references vertex " +
                                 std::to_string(t[k]) + " of " + std::to_string(n));
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw InputError("face " + std::to_string(f) + " has repeated vertex indices");
    }
}

Vec3 face_normal(const TriMesh& mesh, uint32_t face) {
    const auto& t = mesh.faces[face];
    const Vec3& a = mesh.vertices[t[0]];
    return (mesh.vertices[t[1]] - a).cross(mesh.vertices[t[2]] - a).normalized();
}

double face_area(const TriMesh& mesh, uint32_t face) {
    const auto& t = mesh.faces[face];
    const Vec3& a = mesh.vertices[t[0]];
    return 0.5 * (mesh.vertices[t[1]] - a).cross(mesh.vertices[t[2]] - a).norm();
}

double surface_area(const TriMesh& mesh) {
    double area = 0.0;
    for (uint32_t f = 0; f < mesh.faces.size(); ++f) area += face_area(mesh, f);
    return area;
}

NormalWarnings compute_vertex_normals(TriMesh& mesh) {
    if (mesh.faces.empty()) throw InputError("compute_vertex_normals: mesh has no faces");
    NormalWarnings warn;
    mesh.normals.assign(mesh.vertices.size(), Vec3{});
    std::vector<uint8_t> touched(mesh.vertices.size(), 0);
    for (const auto& t : mesh.faces) {
        const Vec3& a = mesh.vertices[t[0]];
        // Cross product length is twice the face area, so accumulating the
        // raw cross products gives the area weighting directly.
        const Vec3 weighted = (mesh.vertices[t[1]] - a).cross(mesh.vertices[t[2]] - a);
        if (weighted.squared_norm() == 0.0) {
            ++warn.zero_area_faces;
            continue;
        }
        for (int k = 0; k < 3; ++k) {
            mesh.normals[t[k]] += weighted;
            touched[t[k]] = 1;
        }
    }
    for (size_t v = 0; v < mesh.vertices.size(); ++v) {
        const Vec3 n = mesh.normals[v].normalized();
        mesh.normals[v] = n;
        if (!touched[v] || n.squared_norm() == 0.0) warn.isolated_vertices.push_back(uint32_t(v));
    }
    return warn;
}

size_t count_boundary_edges(const TriMesh& mesh) {
    std::map<std::pair<uint32_t, uint32_t>, int> uses;
    for (const auto& t : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            uint32_t a = t[k], b = t[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            ++uses[{a, b}];
        }
    }
    size_t open = 0;
    for (const auto& [edge, n] : uses)
        if (n == 1) ++open;
    return open;
}

}  // namespace tetshell

// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_CLOSEST_POINT_HPP
#define TETSHELL_CLOSEST_POINT_HPP

#include <cstdint>
#include <vector>

#include "tetshell/trimesh.hpp"

namespace tetshell {

// Exact closest point on a triangle; bary receives barycentric coordinates of
// the result with respect to (a, b, c).
Vec3 closest_point_on_triangle(const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c,
                               double bary[3]);

struct ClosestPointResult {
    Vec3 point;
    Vec3 normal;       // barycentric interpolation of vertex normals, renormalized
    double distance = 0.0;
    uint32_t triangle = 0;
};

// AABB tree over the triangles of a mesh. The mesh must outlive the index and
// must have computed vertex normals. Immutable after construction; concurrent
// queries are safe.
class ClosestPointIndex {
public:
    explicit ClosestPointIndex(const TriMesh& mesh);

    // Global minimizer over the triangle set; ties broken by lowest triangle
    // index. Identical to a brute-force scan under the same tie rule.
    ClosestPointResult closest_point(const Vec3& q) const;

    // Signed point-to-plane distance n̂·(q − v̂) at the closest point.
    double signed_plane_distance(const Vec3& q) const;

    // Sign convention of the TSDF: inside when the closest-point normal faces
    // away from the query.
    bool is_inside(const Vec3& q) const { return signed_plane_distance(q) < 0.0; }

    // Parity test along a fixed direction sequence; retries on hits too close
    // to an edge. Independent of the normal-based test above.
    bool is_inside_parity(const Vec3& q) const;

    const TriMesh& mesh() const { return *mesh_; }

private:
    struct Node {
        Aabb box;
        uint32_t start = 0;   // leaf: first triangle slot
        uint32_t count = 0;   // leaf: triangle count; 0 for inner nodes
        uint32_t right = 0;   // inner: right child (left child is current+1)
    };

    uint32_t build(uint32_t begin, uint32_t end);
    bool ray_parity(const Vec3& q, const Vec3& dir, bool& ok) const;

    const TriMesh* mesh_;
    std::vector<Node> nodes_;
    std::vector<uint32_t> order_;  // triangle ids grouped by leaf
    std::vector<Vec3> centroids_;  // build scratch, cleared afterwards
};

// Brute-force reference with the identical tie rule. Test oracle, also used
// by small internal callers where building a tree is not worth it.
ClosestPointResult closest_point_brute_force(const TriMesh& mesh, const Vec3& q);

}  // namespace tetshell

#endif

// SPDX-License-Identifier: Apache-2.0

#include "tetshell/closest_point.hpp"

#include <algorithm>
#include <cmath>

#include "tetshell/error.hpp"

namespace tetshell {

Vec3 closest_point_on_triangle(const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c,
                               double bary[3]) {
    // Ericson, Real-Time Collision Detection, 5.1.5.
    const Vec3 ab = b - a, ac = c - a, aq = q - a;
    const double d1 = ab.dot(aq), d2 = ac.dot(aq);
    if (d1 <= 0.0 && d2 <= 0.0) {
        bary[0] = 1.0; bary[1] = 0.0; bary[2] = 0.0;
        return a;
    }
    const Vec3 bq = q - b;
    const double d3 = ab.dot(bq), d4 = ac.dot(bq);
    if (d3 >= 0.0 && d4 <= d3) {
        bary[0] = 0.0; bary[1] = 1.0; bary[2] = 0.0;
        return b;
    }
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double v = d1 / (d1 - d3);
        bary[0] = 1.0 - v; bary[1] = v; bary[2] = 0.0;
        return a + ab * v;
    }
    const Vec3 cq = q - c;
    const double d5 = ab.dot(cq), d6 = ac.dot(cq);
    if (d6 >= 0.0 && d5 <= d6) {
        bary[0] = 0.0; bary[1] = 0.0; bary[2] = 1.0;
        return c;
    }
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double w = d2 / (d2 - d6);
        bary[0] = 1.0 - w; bary[1] = 0.0; bary[2] = w;
        return a + ac * w;
    }
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        bary[0] = 0.0; bary[1] = 1.0 - w; bary[2] = w;
        return b + (c - b) * w;
    }
    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    bary[0] = 1.0 - v - w; bary[1] = v; bary[2] = w;
    return a + ab * v + ac * w;
}

namespace {

struct Best {
    double d2 = std::numeric_limits<double>::max();
    uint32_t tri = 0;
    Vec3 point;
    double bary[3] = {0, 0, 0};
};

// Strict total order on (distance², triangle index) makes the winner
// independent of visit order, so tree and brute force agree exactly.
inline void consider(const TriMesh& mesh, uint32_t tri, const Vec3& q, Best& best) {
    const auto& f = mesh.faces[tri];
    double bary[3];
    const Vec3 p = closest_point_on_triangle(q, mesh.vertices[f[0]], mesh.vertices[f[1]],
                                             mesh.vertices[f[2]], bary);
    const double d2 = (q - p).squared_norm();
    if (d2 < best.d2 || (d2 == best.d2 && tri < best.tri)) {
        best.d2 = d2;
        best.tri = tri;
        best.point = p;
        best.bary[0] = bary[0]; best.bary[1] = bary[1]; best.bary[2] = bary[2];
    }
}

ClosestPointResult finish(const TriMesh& mesh, const Vec3& q, const Best& best) {
    ClosestPointResult r;
    r.point = best.point;
    r.distance = (q - best.point).norm();
    r.triangle = best.tri;
    const auto& f = mesh.faces[best.tri];
    Vec3 n = mesh.normals[f[0]] * best.bary[0] + mesh.normals[f[1]] * best.bary[1] +
             mesh.normals[f[2]] * best.bary[2];
    n = n.normalized();
    if (n.squared_norm() == 0.0) n = face_normal(mesh, best.tri);
    r.normal = n;
    return r;
}

}  // namespace

ClosestPointResult closest_point_brute_force(const TriMesh& mesh, const Vec3& q) {
    if (mesh.faces.empty()) throw InputError("closest point query on empty mesh");
    Best best;
    for (uint32_t t = 0; t < mesh.faces.size(); ++t) consider(mesh, t, q, best);
    return finish(mesh, q, best);
}

ClosestPointIndex::ClosestPointIndex(const TriMesh& mesh) : mesh_(&mesh) {
    if (mesh.faces.empty()) throw InputError("cannot index an empty mesh");
    if (!mesh.has_normals())
        throw InputError("closest-point index requires computed vertex normals");
    const uint32_t n = uint32_t(mesh.faces.size());
    order_.resize(n);
    centroids_.resize(n);
    for (uint32_t t = 0; t < n; ++t) {
        order_[t] = t;
        const auto& f = mesh.faces[t];
        centroids_[t] =
            (mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]]) / 3.0;
    }
    nodes_.reserve(size_t(2) * n);
    build(0, n);
    centroids_.clear();
    centroids_.shrink_to_fit();
}

uint32_t ClosestPointIndex::build(uint32_t begin, uint32_t end) {
    const uint32_t id = uint32_t(nodes_.size());
    nodes_.push_back({});
    Aabb box;
    for (uint32_t i = begin; i < end; ++i) {
        const auto& f = mesh_->faces[order_[i]];
        box.expand(mesh_->vertices[f[0]]);
        box.expand(mesh_->vertices[f[1]]);
        box.expand(mesh_->vertices[f[2]]);
    }
    nodes_[id].box = box;
    constexpr uint32_t kLeafSize = 4;
    if (end - begin <= kLeafSize) {
        nodes_[id].start = begin;
        nodes_[id].count = end - begin;
        return id;
    }
    Aabb cbox;
    for (uint32_t i = begin; i < end; ++i) cbox.expand(centroids_[order_[i]]);
    const Vec3 ext = cbox.extent();
    int axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > ext[axis]) axis = 2;
    const uint32_t mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](uint32_t a, uint32_t b) {
                         const double ca = centroids_[a][axis], cb = centroids_[b][axis];
                         return ca < cb || (ca == cb && a < b);
                     });
    build(begin, mid);
    const uint32_t right = build(mid, end);
    nodes_[id].right = right;
    nodes_[id].count = 0;
    return id;
}

ClosestPointResult ClosestPointIndex::closest_point(const Vec3& q) const {
    Best best;
    uint32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const uint32_t id = stack[--top];
        const Node& node = nodes_[id];
        if (node.box.squared_distance(q) > best.d2) continue;
        if (node.count > 0) {
            for (uint32_t i = 0; i < node.count; ++i)
                consider(*mesh_, order_[node.start + i], q, best);
            continue;
        }
        const uint32_t l = id + 1, r = node.right;
        const double dl = nodes_[l].box.squared_distance(q);
        const double dr = nodes_[r].box.squared_distance(q);
        // Far child first on the stack so the near child pops first.
        if (dl <= dr) {
            if (dr <= best.d2) stack[top++] = r;
            if (dl <= best.d2) stack[top++] = l;
        } else {
            if (dl <= best.d2) stack[top++] = l;
            if (dr <= best.d2) stack[top++] = r;
        }
    }
    return finish(*mesh_, q, best);
}

double ClosestPointIndex::signed_plane_distance(const Vec3& q) const {
    const ClosestPointResult r = closest_point(q);
    return r.normal.dot(q - r.point);
}

namespace {

// Möller-Trumbore. Returns 1 on a clean hit with t > 0, 0 on a miss, -1 when
// the hit is too close to an edge or the ray is near parallel to decide.
int ray_hits_triangle(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b,
                      const Vec3& c) {
    constexpr double kEps = 1e-12;
    constexpr double kEdgeEps = 1e-9;
    const Vec3 e1 = b - a, e2 = c - a;
    const Vec3 p = d.cross(e2);
    const double det = e1.dot(p);
    if (std::fabs(det) < kEps * std::sqrt(e1.squared_norm() * e2.squared_norm()))
        return std::fabs(det) == 0.0 ? 0 : -1;
    const double inv = 1.0 / det;
    const Vec3 s = o - a;
    const double u = s.dot(p) * inv;
    if (u < -kEdgeEps || u > 1.0 + kEdgeEps) return 0;
    const Vec3 qv = s.cross(e1);
    const double v = d.dot(qv) * inv;
    if (v < -kEdgeEps || u + v > 1.0 + kEdgeEps) return 0;
    const double t = e2.dot(qv) * inv;
    if (t <= kEps) return 0;
    if (u < kEdgeEps || v < kEdgeEps || u + v > 1.0 - kEdgeEps) return -1;
    return 1;
}

bool ray_box(const Vec3& o, const Vec3& inv_d, const Aabb& box) {
    double t0 = 0.0, t1 = std::numeric_limits<double>::max();
    for (int i = 0; i < 3; ++i) {
        double near = (box.lo[i] - o[i]) * inv_d[i];
        double far = (box.hi[i] - o[i]) * inv_d[i];
        if (near > far) std::swap(near, far);
        t0 = std::max(t0, near);
        t1 = std::min(t1, far);
        if (t0 > t1) return false;
    }
    return true;
}

}  // namespace

bool ClosestPointIndex::ray_parity(const Vec3& q, const Vec3& dir, bool& ok) const {
    const Vec3 inv{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
    int crossings = 0;
    uint32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const uint32_t id = stack[--top];
        const Node& node = nodes_[id];
        if (!ray_box(q, inv, node.box)) continue;
        if (node.count > 0) {
            for (uint32_t i = 0; i < node.count; ++i) {
                const auto& f = mesh_->faces[order_[node.start + i]];
                const int hit = ray_hits_triangle(q, dir, mesh_->vertices[f[0]],
                                                  mesh_->vertices[f[1]], mesh_->vertices[f[2]]);
                if (hit < 0) {
                    ok = false;
                    return false;
                }
                crossings += hit;
            }
        } else {
            stack[top++] = node.right;
            stack[top++] = id + 1;
        }
    }
    ok = true;
    return (crossings & 1) != 0;
}

bool ClosestPointIndex::is_inside_parity(const Vec3& q) const {
    // Fixed direction sequence; advance on ambiguous hits.
    static const Vec3 dirs[] = {
        {0.577350269, 0.577350269, 0.577350269}, {0.267261242, 0.534522484, 0.801783726},
        {-0.648885684, 0.562901059, 0.512208059}, {0.092449923, -0.775779303, 0.624199404},
        {0.832050294, 0.554700196, -0.021641119}, {-0.369274473, -0.402844881, 0.837433921},
        {0.715542753, -0.625724069, 0.310961414}, {-0.554700196, 0.832050294, 0.012343212},
    };
    bool last = false;
    for (const Vec3& d : dirs) {
        bool ok = false;
        last = ray_parity(q, d.normalized(), ok);
        if (ok) return last;
    }
    return last;
}

}  // namespace tetshell

// SPDX-License-Identifier: Apache-2.0

#include "tetshell/marching_tetra.hpp"

#include <algorithm>
#include <cstdint>

#include "tetshell/error.hpp"

namespace tetshell {

static inline uint64_t edge_key(uint32_t a, uint32_t b) {
    if (a > b) std::swap(a, b);
    return (uint64_t(a) << 32) | b;
}

TriMesh extract_isosurface(const TetraGrid& grid, const TsdfField& field, double iso) {
    if (field.values.size() != grid.summits.size())
        throw InputError("extract_isosurface: field does not match grid");

    // Summits exactly on the level set are pushed to the positive side so the
    // 16-case classification never sees a zero.
    auto side_value = [&](uint32_t s) {
        const double v = field.values[s];
        return v == iso ? iso + 1e-9 : v;
    };

    static const int kEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

    // Pass 1: every crossing edge, keyed by sorted summit pair.
    std::vector<uint64_t> keys;
    for (const auto& tet : grid.tets) {
        double u[4];
        for (int c = 0; c < 4; ++c) u[c] = side_value(tet[c]);
        for (const auto& e : kEdges) {
            const bool pa = u[e[0]] > iso, pb = u[e[1]] > iso;
            if (pa != pb) keys.push_back(edge_key(tet[e[0]], tet[e[1]]));
        }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    TriMesh out;
    out.vertices.reserve(keys.size());
    for (uint64_t key : keys) {
        const uint32_t a = (uint32_t)(key >> 32), b = (uint32_t)key;
        const double va = side_value(a), vb = side_value(b);
        const double t = (iso - va) / (vb - va);
        out.vertices.push_back(grid.summits[a] + t * (grid.summits[b] - grid.summits[a]));
    }

    auto vertex_of = [&](uint32_t a, uint32_t b) {
        const uint64_t key = edge_key(a, b);
        return (uint32_t)(std::lower_bound(keys.begin(), keys.end(), key) - keys.begin());
    };

    // Pass 2: triangle emission, tets in grid order.
    auto emit = [&](uint32_t v0, uint32_t v1, uint32_t v2, const Vec3& ref_dir) {
        const Vec3 n = (out.vertices[v1] - out.vertices[v0])
                           .cross(out.vertices[v2] - out.vertices[v0]);
        if (n.dot(ref_dir) < 0.0) std::swap(v1, v2);
        out.faces.push_back({v0, v1, v2});
    };

    for (const auto& tet : grid.tets) {
        double u[4];
        int pos[4], neg[4], np = 0, nn = 0;
        for (int c = 0; c < 4; ++c) {
            u[c] = side_value(tet[c]);
            (u[c] > iso ? pos[np++] : neg[nn++]) = c;
        }
        if (np == 0 || np == 4) continue;

        Vec3 cp{}, cn{};
        for (int i = 0; i < np; ++i) cp += grid.summits[tet[pos[i]]];
        for (int i = 0; i < nn; ++i) cn += grid.summits[tet[neg[i]]];
        const Vec3 ref_dir = cp / np - cn / nn;

        if (np == 1 || np == 3) {
            const int lone = np == 1 ? pos[0] : neg[0];
            const int* rest = np == 1 ? neg : pos;
            uint64_t ek[3];
            for (int i = 0; i < 3; ++i) ek[i] = edge_key(tet[lone], tet[rest[i]]);
            std::sort(ek, ek + 3);
            emit(vertex_of((uint32_t)(ek[0] >> 32), (uint32_t)ek[0]),
                 vertex_of((uint32_t)(ek[1] >> 32), (uint32_t)ek[1]),
                 vertex_of((uint32_t)(ek[2] >> 32), (uint32_t)ek[2]), ref_dir);
        } else {
            // Cross-section quad; consecutive corners share a tet face.
            const uint32_t p0 = tet[pos[0]], p1 = tet[pos[1]];
            const uint32_t n0 = tet[neg[0]], n1 = tet[neg[1]];
            const uint32_t pair[4][2] = {{p0, n0}, {p0, n1}, {p1, n1}, {p1, n0}};
            int first = 0;
            for (int i = 1; i < 4; ++i)
                if (edge_key(pair[i][0], pair[i][1]) < edge_key(pair[first][0], pair[first][1]))
                    first = i;
            uint32_t q[4];
            for (int i = 0; i < 4; ++i) {
                const auto& e = pair[(first + i) & 3];
                q[i] = vertex_of(e[0], e[1]);
            }
            emit(q[0], q[1], q[2], ref_dir);
            emit(q[0], q[2], q[3], ref_dir);
        }
    }

    if (!out.vertices.empty()) compute_vertex_normals(out);
    return out;
}

TriMesh repose(const TriMesh& mesh, const SkinnedTemplate& tmpl,
               const std::vector<BoneTransform>& pose) {
    if (pose.size() != tmpl.bone_count())
        throw InputError("repose: pose transform count does not match template bones");
    const std::vector<SkinWeights> weights = bind_vertices(mesh, tmpl);
    return lbs_warp(mesh, weights, pose);
}

}  // namespace tetshell

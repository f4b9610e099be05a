// SPDX-License-Identifier: Apache-2.0

#include "tetshell/shell_ops.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>

#include "tetshell/error.hpp"

namespace tetshell {

TriMesh inflate_mesh(const TriMesh& mesh, double offset) {
    if (offset <= 0.0) throw InputError("inflate offset must be > 0");
    TriMesh out = mesh;
    if (!out.has_normals()) compute_vertex_normals(out);
    for (size_t v = 0; v < out.vertices.size(); ++v)
        out.vertices[v] += out.normals[v] * offset;
    compute_vertex_normals(out);
    return out;
}

namespace {

struct CellKey {
    int64_t x, y, z;
    bool operator==(const CellKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct CellKeyHash {
    size_t operator()(const CellKey& k) const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (int64_t v : {k.x, k.y, k.z}) {
            h ^= uint64_t(v);
            h *= 0x100000001b3ull;
        }
        return size_t(h);
    }
};

CellKey cell_of(const Vec3& p, const Vec3& origin, double size) {
    return {int64_t(std::floor((p.x - origin.x) / size)),
            int64_t(std::floor((p.y - origin.y) / size)),
            int64_t(std::floor((p.z - origin.z) / size))};
}

size_t occupied_cells(const TriMesh& mesh, const Vec3& origin, double size) {
    std::unordered_map<CellKey, int, CellKeyHash> cells;
    for (const Vec3& v : mesh.vertices) cells.emplace(cell_of(v, origin, size), 0);
    return cells.size();
}

}  // namespace

TriMesh decimate(const TriMesh& mesh, size_t target_vertex_count) {
    if (target_vertex_count >= mesh.vertices.size())
        throw InputError("decimate target (" + std::to_string(target_vertex_count) +
                         ") must be below the current vertex count (" +
                         std::to_string(mesh.vertices.size()) + ")");
    if (target_vertex_count == 0) throw InputError("decimate target must be > 0");

    const Aabb box = mesh.bounds();
    const Vec3 origin = box.lo;
    const double diag = box.extent().norm();

    // Occupied-cell count decreases with cell size; bisect to land within
    // ±20% of the target.
    double lo = diag * 1e-6, hi = diag;
    double best_size = hi;
    size_t best_count = occupied_cells(mesh, origin, hi);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const size_t count = occupied_cells(mesh, origin, mid);
        if (std::llabs(int64_t(count) - int64_t(target_vertex_count)) <
            std::llabs(int64_t(best_count) - int64_t(target_vertex_count))) {
            best_count = count;
            best_size = mid;
        }
        if (count > target_vertex_count) lo = mid;
        else hi = mid;
    }
    const double size = best_size;

    // Clusters numbered in vertex-scan order; representative is the mean.
    std::unordered_map<CellKey, uint32_t, CellKeyHash> cluster_of_cell;
    std::vector<uint32_t> vertex_cluster(mesh.vertices.size());
    std::vector<Vec3> sums;
    std::vector<uint32_t> counts;
    for (size_t v = 0; v < mesh.vertices.size(); ++v) {
        const CellKey key = cell_of(mesh.vertices[v], origin, size);
        auto [it, inserted] = cluster_of_cell.emplace(key, uint32_t(sums.size()));
        if (inserted) {
            sums.push_back(Vec3{});
            counts.push_back(0);
        }
        vertex_cluster[v] = it->second;
        sums[it->second] += mesh.vertices[v];
        ++counts[it->second];
    }

    TriMesh out;
    out.vertices.resize(sums.size());
    for (size_t c = 0; c < sums.size(); ++c) out.vertices[c] = sums[c] / double(counts[c]);

    std::set<std::array<uint32_t, 3>> seen;
    for (const auto& f : mesh.faces) {
        std::array<uint32_t, 3> g = {vertex_cluster[f[0]], vertex_cluster[f[1]],
                                     vertex_cluster[f[2]]};
        if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2]) continue;
        std::array<uint32_t, 3> key = g;
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second) continue;
        out.faces.push_back(g);
    }
    return out;
}

TriMesh subdivide_midpoint(const TriMesh& mesh, int iterations) {
    if (iterations < 0) throw InputError("subdivision iterations must be >= 0");
    TriMesh cur = mesh;
    cur.normals.clear();
    for (int it = 0; it < iterations; ++it) {
        TriMesh next;
        next.vertices = cur.vertices;
        std::unordered_map<uint64_t, uint32_t> midpoint;
        auto mid_of = [&](uint32_t a, uint32_t b) {
            const uint64_t key = a < b ? (uint64_t(a) << 32 | b) : (uint64_t(b) << 32 | a);
            auto [itm, inserted] = midpoint.emplace(key, uint32_t(next.vertices.size()));
            if (inserted)
                next.vertices.push_back((cur.vertices[a] + cur.vertices[b]) * 0.5);
            return itm->second;
        };
        next.faces.reserve(cur.faces.size() * 4);
        for (const auto& f : cur.faces) {
            const uint32_t ab = mid_of(f[0], f[1]);
            const uint32_t bc = mid_of(f[1], f[2]);
            const uint32_t ca = mid_of(f[2], f[0]);
            next.faces.push_back({f[0], ab, ca});
            next.faces.push_back({f[1], bc, ab});
            next.faces.push_back({f[2], ca, bc});
            next.faces.push_back({ab, bc, ca});
        }
        cur = std::move(next);
    }
    return cur;
}

}  // namespace tetshell

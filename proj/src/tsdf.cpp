// SPDX-License-Identifier: Apache-2.0

#include "tetshell/tsdf.hpp"

#include <algorithm>
#include <fstream>

#include "tetshell/binary_io.hpp"
#include "tetshell/closest_point.hpp"
#include "tetshell/error.hpp"
#include "tetshell/parallel.hpp"

namespace tetshell {

TsdfField compute_tsdf(const TetraGrid& grid, const TriMesh& surface, double tau) {
    if (grid.summits.empty()) throw InputError("compute_tsdf: empty grid");
    if (surface.faces.empty()) throw InputError("compute_tsdf: empty surface");
    if (!(tau > 0.0)) throw InputError("compute_tsdf: tau must be positive");

    const TriMesh* src = &surface;
    TriMesh with_normals;
    if (!surface.has_normals()) {
        with_normals = surface;
        compute_vertex_normals(with_normals);
        src = &with_normals;
    }
    const ClosestPointIndex index(*src);

    TsdfField field;
    field.tau = tau;
    field.values.resize(grid.summits.size());
    // Disjoint per-summit writes; bitwise identical for any worker count.
    parallel_for_chunks(grid.summits.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Vec3 v = grid.summits[i];
            const ClosestPointResult cp = index.closest_point(v);
            const double plane = cp.normal.dot(v - cp.point);
            if (cp.distance <= tau)
                field.values[i] = std::clamp(plane / tau, -1.0, 1.0);
            else
                field.values[i] = plane < 0.0 ? -1.0 : 1.0;
        }
    });
    return field;
}

TsdfField generate_gt_field(const TriMesh& scan, const SkinnedTemplate& tmpl,
                            const TetraGrid& grid, double tau) {
    const std::vector<SkinWeights> weights = bind_vertices(scan, tmpl);
    const TriMesh star = warp_to_star(scan, weights, tmpl);
    return compute_tsdf(grid, star, tau);
}

void save_ttsf(const TsdfField& field, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out.write("TTSF", 4);
    write_u32(out, 1);  // version
    write_u32(out, (uint32_t)field.values.size());
    write_f32(out, (float)field.tau);
    for (double v : field.values) write_f32(out, (float)v);
    if (!out) throw Error("write failed: " + path);
}

TsdfField load_ttsf(const std::string& path, const TetraGrid* grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    expect_magic(in, "TTSF", path);
    const uint32_t version = read_u32(in, path);
    if (version != 1) throw InputError(path + ": unsupported version");
    const uint32_t count = read_u32(in, path);

    TsdfField field;
    field.tau = read_f32(in, path);
    if (!(field.tau > 0.0f)) throw InputError(path + ": non-positive tau");
    field.values.resize(count);
    for (uint32_t i = 0; i < count; ++i) field.values[i] = read_f32(in, path);
    if (grid && grid->summits.size() != count)
        throw InputError(path + ": value count does not match grid");
    return field;
}

}  // namespace tetshell

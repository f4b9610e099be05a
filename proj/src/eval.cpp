// SPDX-License-Identifier: Apache-2.0

#include "tetshell/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "tetshell/closest_point.hpp"
#include "tetshell/error.hpp"
#include "tetshell/mesh_io.hpp"
#include "tetshell/parallel.hpp"
#include "tetshell/rng.hpp"

namespace tetshell {

// One seed for every mesh regardless of argument position; this is what makes
// the symmetric Chamfer exactly symmetric.
static constexpr uint64_t kSampleSeed = 0x5eed5a3b12c9f04dull;

std::vector<Vec3> sample_surface(const TriMesh& mesh, std::size_t count, uint64_t seed) {
    if (mesh.faces.empty()) throw InputError("sample_surface: mesh has no faces");
    if (count == 0) throw InputError("sample_surface: need at least one sample");

    std::vector<double> cdf(mesh.faces.size());
    double total = 0.0;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        total += face_area(mesh, (uint32_t)f);
        cdf[f] = total;
    }
    if (!(total > 0.0)) throw InputError("sample_surface: zero surface area");

    Rng rng(seed);
    std::vector<Vec3> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = rng.next_double() * total;
        const std::size_t f =
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        const auto& face = mesh.faces[std::min(f, mesh.faces.size() - 1)];
        // sqrt(r1) warps the unit square onto the triangle uniformly.
        const double s = std::sqrt(rng.next_double());
        const double t = rng.next_double();
        points.push_back(mesh.vertices[face[0]] * (1.0 - s) +
                         mesh.vertices[face[1]] * (s * (1.0 - t)) +
                         mesh.vertices[face[2]] * (s * t));
    }
    return points;
}

static const TriMesh* with_normals(const TriMesh& mesh, TriMesh& storage) {
    if (mesh.has_normals()) return &mesh;
    storage = mesh;
    compute_vertex_normals(storage);
    return &storage;
}

// Mean closest-surface distance of the points, summed in point order.
static double mean_distance(const std::vector<Vec3>& points, const ClosestPointIndex& target) {
    std::vector<double> dist(points.size());
    parallel_for_chunks(points.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            dist[i] = target.closest_point(points[i]).distance;
    });
    double sum = 0.0;
    for (double d : dist) sum += d;
    return sum / double(points.size());
}

double chamfer_distance(const TriMesh& a, const TriMesh& b, std::size_t samples) {
    if (a.faces.empty() || b.faces.empty()) throw InputError("chamfer_distance: empty mesh");
    if (samples == 0) throw InputError("chamfer_distance: need at least one sample");

    TriMesh sa, sb;
    const TriMesh* na = with_normals(a, sa);
    const TriMesh* nb = with_normals(b, sb);
    const ClosestPointIndex ia(*na), ib(*nb);

    const std::vector<Vec3> pa = sample_surface(a, samples, kSampleSeed);
    const std::vector<Vec3> pb = sample_surface(b, samples, kSampleSeed);
    const double ab = mean_distance(pa, ib);
    const double ba = mean_distance(pb, ia);
    return (ab + ba) * 0.5 * 100.0;  // meters -> cm
}

std::vector<double> error_heatmap(const TriMesh& recon, const TriMesh& gt) {
    if (recon.vertices.empty() || gt.faces.empty()) throw InputError("error_heatmap: empty mesh");
    TriMesh storage;
    const ClosestPointIndex index(*with_normals(gt, storage));
    std::vector<double> dist(recon.vertices.size());
    parallel_for_chunks(recon.vertices.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            dist[i] = index.closest_point(recon.vertices[i]).distance;
    });
    return dist;
}

void save_heatmap_ply(const TriMesh& recon, const std::vector<double>& distances, double dmax,
                      const std::string& path) {
    if (distances.size() != recon.vertices.size())
        throw InputError("save_heatmap_ply: one distance per vertex required");
    if (!(dmax > 0.0)) throw InputError("save_heatmap_ply: dmax must be positive");
    std::vector<std::array<uint8_t, 3>> colors(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) {
        const double t = std::clamp(distances[i] / dmax, 0.0, 1.0);
        const double r = t < 0.5 ? 0.0 : (t - 0.5) * 2.0;
        const double g = t < 0.5 ? t * 2.0 : (1.0 - t) * 2.0;
        const double b = t < 0.5 ? 1.0 - t * 2.0 : 0.0;
        colors[i] = {(uint8_t)std::lround(255.0 * r), (uint8_t)std::lround(255.0 * g),
                     (uint8_t)std::lround(255.0 * b)};
    }
    save_ply_colored(recon, colors, path);
}

MemoryReport compare_memory(const TetraGrid& grid, double resolution) {
    if (grid.summits.empty()) throw InputError("compare_memory: empty grid");
    if (!(resolution > 0.0)) throw InputError("compare_memory: resolution must be positive");
    MemoryReport r;
    r.shell_summits = grid.summits.size();
    r.resolution = resolution;
    r.extent = grid.bounds().extent();
    r.uniform_voxels = 1;
    for (int i = 0; i < 3; ++i) {
        r.dims[i] = (std::size_t)std::ceil(r.extent[i] / resolution);
        r.uniform_voxels *= r.dims[i];
    }
    r.ratio = double(r.uniform_voxels) / double(r.shell_summits);
    return r;
}

std::string memory_report_json(const MemoryReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "{\n"
                  "  \"resolution_m\": %g,\n"
                  "  \"bbox_extent_m\": [%g, %g, %g],\n"
                  "  \"uniform_dims\": [%zu, %zu, %zu],\n"
                  "  \"uniform_voxels\": %zu,\n"
                  "  \"shell_summits\": %zu,\n"
                  "  \"ratio\": %.3f\n"
                  "}\n",
                  r.resolution, r.extent.x, r.extent.y, r.extent.z, r.dims[0], r.dims[1],
                  r.dims[2], r.uniform_voxels, r.shell_summits, r.ratio);
    return buf;
}

std::string memory_report_table(const MemoryReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%-24s %zu x %zu x %zu (%.3f x %.3f x %.3f m at %g m)\n"
                  "%-24s %zu\n"
                  "%-24s %zu\n"
                  "%-24s %.1fx\n",
                  "uniform grid", r.dims[0], r.dims[1], r.dims[2], r.extent.x, r.extent.y,
                  r.extent.z, r.resolution, "uniform voxels", r.uniform_voxels, "shell summits",
                  r.shell_summits, "uniform-to-shell ratio", r.ratio);
    return buf;
}

}  // namespace tetshell

// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_EVAL_HPP
#define TETSHELL_EVAL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tetshell/tetra_grid.hpp"
#include "tetshell/trimesh.hpp"

namespace tetshell {

// Uniform area-weighted surface samples, reproducible for a given seed.
std::vector<Vec3> sample_surface(const TriMesh& mesh, std::size_t count, uint64_t seed);

// Symmetric sampled Chamfer distance in centimeters: mean closest-surface
// distance of `samples` area-uniform points per mesh, averaged over both
// directions. Both meshes are sampled with the same fixed seed, so
// chamfer(a, b) == chamfer(b, a) exactly.
double chamfer_distance(const TriMesh& a, const TriMesh& b, std::size_t samples = 100000);

// Closest-surface distance (meters) from every recon vertex to gt.
std::vector<double> error_heatmap(const TriMesh& recon, const TriMesh& gt);

// Colored PLY of the heatmap, distances mapped linearly onto blue (0) ->
// green (dmax/2) -> red (>= dmax).
void save_heatmap_ply(const TriMesh& recon, const std::vector<double>& distances, double dmax,
                      const std::string& path);

// Storage comparison against a uniform voxelization of the bounding box.
struct MemoryReport {
    std::size_t shell_summits = 0;
    std::size_t uniform_voxels = 0;  // ∏ ceil(extent_i / resolution)
    double ratio = 0.0;              // uniform / shell
    std::array<std::size_t, 3> dims{};
    Vec3 extent;
    double resolution = 0.0;
};

MemoryReport compare_memory(const TetraGrid& grid, double resolution);
std::string memory_report_json(const MemoryReport& r);
std::string memory_report_table(const MemoryReport& r);

}  // namespace tetshell

#endif

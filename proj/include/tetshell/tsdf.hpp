// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_TSDF_HPP
#define TETSHELL_TSDF_HPP

#include <string>
#include <vector>

#include "tetshell/skinning.hpp"
#include "tetshell/tetra_grid.hpp"

namespace tetshell {

// Truncated signed distance field sampled at grid summits. Positive outside.
struct TsdfField {
    std::vector<double> values;  // one per summit, in [-1, 1]
    double tau = 0.03;           // truncation distance, meters
};

// Point-to-plane TSDF against a closed surface: with v̂ the closest surface
// point to summit v and n̂ its interpolated normal,
//   value = n̂·(v − v̂) / tau                 if ‖v − v̂‖ ≤ tau (clamped to ±1)
//   value = sign(n̂·(v − v̂)), sign(0) := +1  otherwise.
// So values strictly inside (−1, 1) only occur within tau of the surface.
TsdfField compute_tsdf(const TetraGrid& grid, const TriMesh& surface, double tau = 0.03);

// Ground-truth pipeline for a posed scan: bind each scan vertex to its
// nearest template vertex, LBS-warp the scan into the canonical star pose,
// then evaluate the TSDF on the grid.
TsdfField generate_gt_field(const TriMesh& scan, const SkinnedTemplate& tmpl,
                            const TetraGrid& grid, double tau = 0.03);

// "TTSF" container. Pass the grid on load to validate the value count.
void save_ttsf(const TsdfField& field, const std::string& path);
TsdfField load_ttsf(const std::string& path, const TetraGrid* grid = nullptr);

}  // namespace tetshell

#endif

// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_TETRA_GRID_HPP
#define TETSHELL_TETRA_GRID_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tetshell/skinning.hpp"
#include "tetshell/trimesh.hpp"

namespace tetshell {

// Tetrahedral volumetric grid in the canonical (star) pose. Values of a TSDF
// live at the summits.
struct TetraGrid {
    std::vector<Vec3> summits;
    std::vector<std::array<uint32_t, 4>> tets;
    std::vector<uint16_t> part_labels;  // empty until assigned; else one per summit
    double resolution = 0.0;            // target mean adjacent-summit spacing

    bool has_labels() const { return part_labels.size() == summits.size() && !summits.empty(); }
    Aabb bounds() const;
};

double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);
double mean_edge_length(const TetraGrid& grid);

// Fills the interior of a closed, outward-oriented shell with the standard
// tetrahedral decomposition of a body-centered-cubic lattice at the given
// spacing. A tetrahedron is kept iff at least one of its summits is inside
// the shell; all kept tetrahedra are reordered to positive signed volume.
// Inside/outside comes from the sign of the closest-point plane distance; a
// ray-parity audit over sampled lattice nodes rejects open shells (>1%
// disagreement). Throws InputError if the result has fewer than 10
// tetrahedra (resolution coarser than the shell).
TetraGrid tetrahedralize(const TriMesh& shell, double resolution);

// BCC grid over an explicit box, every tetrahedron kept. Used to rasterize
// analytic fields where no shell mesh exists yet.
TetraGrid tetrahedralize_box(const Aabb& box, double resolution);

// Labels every summit with the dominant-weight bone of its nearest template
// vertex. The template must be posed like the grid.
void assign_part_labels(TetraGrid& grid, const SkinnedTemplate& tmpl);

// "TGRD" container.
void save_tgrd(const TetraGrid& grid, const std::string& path);
TetraGrid load_tgrd(const std::string& path);

}  // namespace tetshell

#endif

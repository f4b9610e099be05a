// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_MARCHING_TETRA_HPP
#define TETSHELL_MARCHING_TETRA_HPP

#include "tetshell/skinning.hpp"
#include "tetshell/tetra_grid.hpp"
#include "tetshell/tsdf.hpp"
#include "tetshell/trimesh.hpp"

namespace tetshell {

// Marching tetrahedra over the summit field. Per tetrahedron: one triangle
// when one summit is on its own side, two when the split is 2-vs-2 (the quad
// diagonal runs through the vertex on the lexicographically smallest crossing
// edge). Crossing-edge vertices are linearly interpolated and deduplicated by
// sorted summit pair, so shared edges give bitwise identical vertices; output
// vertices are ordered by edge key. Summits exactly at iso are nudged to
// iso + 1e-9 before classification. Triangle normals face the positive side.
TriMesh extract_isosurface(const TetraGrid& grid, const TsdfField& field, double iso = 0.0);

// Binds the mesh to the template skeleton and forward-warps it with the given
// per-bone pose. The mesh is expected in the template's canonical pose.
TriMesh repose(const TriMesh& mesh, const SkinnedTemplate& tmpl,
               const std::vector<BoneTransform>& pose);

}  // namespace tetshell

#endif

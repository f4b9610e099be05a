// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_SHELL_OPS_HPP
#define TETSHELL_SHELL_OPS_HPP

#include "tetshell/trimesh.hpp"

namespace tetshell {

// Displace every vertex by offset along its vertex normal. Topology is kept.
// Normals are computed on the input when absent; offset must be positive.
TriMesh inflate_mesh(const TriMesh& mesh, double offset);

// Vertex-clustering decimation on a uniform lattice. The cell size is chosen
// so the output vertex count falls within ±20% of the target. Degenerate and
// duplicate faces are dropped.
TriMesh decimate(const TriMesh& mesh, size_t target_vertex_count);

// 1:4 midpoint subdivision; shared edges produce one shared midpoint.
TriMesh subdivide_midpoint(const TriMesh& mesh, int iterations);

}  // namespace tetshell

#endif

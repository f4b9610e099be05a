// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_MESH_IO_HPP
#define TETSHELL_MESH_IO_HPP

#include <array>
#include <iosfwd>
#include <string>

#include "tetshell/trimesh.hpp"

namespace tetshell {

// Format picked by file extension (.obj / .ply). Polygons are fan
// triangulated, vertex order preserved. Throws InputError with a line or
// byte position on parse failure.
TriMesh load_mesh(const std::string& path);

TriMesh load_obj(std::istream& in, const std::string& name);
TriMesh load_ply(std::istream& in, const std::string& name);

// OBJ writer: v, vn (when present), f; 9 significant digits.
void save_obj(const TriMesh& mesh, const std::string& path);

// PLY writer, binary little-endian; float32 positions.
void save_ply(const TriMesh& mesh, const std::string& path);

// PLY with per-vertex uchar RGB.
void save_ply_colored(const TriMesh& mesh,
                      const std::vector<std::array<uint8_t, 3>>& colors,
                      const std::string& path);

void save_mesh(const TriMesh& mesh, const std::string& path);  // by extension

}  // namespace tetshell

#endif

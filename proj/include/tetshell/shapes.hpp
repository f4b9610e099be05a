// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_SHAPES_HPP
#define TETSHELL_SHAPES_HPP

#include "tetshell/skinning.hpp"
#include "tetshell/trimesh.hpp"

namespace tetshell {

// Procedural closed meshes and rigged bodies. Deterministic vertex orders;
// all surfaces are closed and wound outward.

TriMesh make_icosphere(double radius, int subdivisions);
TriMesh make_ellipsoid(double rx, double ry, double rz, int subdivisions);
TriMesh make_cube(double side);
// Capped cylinder along z, centered at the origin.
TriMesh make_cylinder(double radius, double length, int radial_segments, int height_segments);

// A mesh plus a skeleton rigged to it (tmpl.vertices == mesh.vertices).
struct RiggedMesh {
    TriMesh mesh;
    SkinnedTemplate tmpl;
};

// Cylinder along z split into a lower bone (joint 1) and an upper bone
// (joint 2) at z = 0, root at the bottom end. Weight 1 on the owning bone
// outside |z| <= blend_halfwidth, linear blend inside. Canonical pose.
RiggedMesh make_two_bone_cylinder(double radius = 0.1, double length = 1.0,
                                  double blend_halfwidth = 0.1, int radial_segments = 48,
                                  int height_segments = 40);

// Slim T-posed human body: capsule/ellipsoid union surfaced at the given
// resolution, with an 18-joint skeleton and hard nearest-bone weights. The
// proportions are deliberately lanky — long spread arms and forward feet —
// the regime where a body-fitting shell beats a bounding-box grid hardest.
RiggedMesh make_humanoid(double surface_resolution = 0.02);

}  // namespace tetshell

#endif

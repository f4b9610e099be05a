// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_SKINNING_HPP
#define TETSHELL_SKINNING_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tetshell/trimesh.hpp"

namespace tetshell {

// Rigid transform x -> R x + t.
struct BoneTransform {
    Mat3 rotation;
    Vec3 translation;

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    BoneTransform inverse() const {
        const Mat3 rt = rotation.transposed();
        return {rt, -(rt * translation)};
    }
};

// Sparse (bone id, weight) list for one vertex; weights sum to 1.
using SkinWeights = std::vector<std::pair<uint16_t, double>>;

// Skeleton plus a skinned reference surface. Bone b runs from joint
// parents[b] to joint b; the root's entry carries the body transform.
// to_star maps the template's current pose into the canonical star pose.
struct SkinnedTemplate {
    std::vector<Vec3> joints;
    std::vector<int32_t> parents;           // -1 for the root
    std::vector<Vec3> vertices;             // reference surface, current pose
    std::vector<SkinWeights> skin_weights;  // one list per vertex
    std::vector<BoneTransform> to_star;     // one per bone (indexed by joint id)

    size_t bone_count() const { return joints.size(); }

    // Highest-weight bone of a vertex; ties go to the lower bone id.
    uint16_t dominant_bone(size_t vertex) const;
};

// Checks weight normalization (1e-6) and that every to_star rotation is
// orthonormal (1e-6) with determinant +1. Throws InputError.
void validate_template(const SkinnedTemplate& tmpl);

SkinnedTemplate load_template_json(const std::string& path);
void save_template_json(const SkinnedTemplate& tmpl, const std::string& path);

// Per-bone transform list, same JSON schema as the template's to_star block.
std::vector<BoneTransform> load_pose_json(const std::string& path, size_t expected_bones);
void save_pose_json(const std::vector<BoneTransform>& pose, const std::string& path);

// Each scan vertex takes the weights of its nearest template vertex
// (ties by lowest template vertex index).
std::vector<SkinWeights> bind_vertices(const TriMesh& scan, const SkinnedTemplate& tmpl);

// Linear blend skinning: x' = sum_b w_b (R_b x + t_b). Normals recomputed.
TriMesh lbs_warp(const TriMesh& mesh, const std::vector<SkinWeights>& weights,
                 const std::vector<BoneTransform>& transforms);

// bind + LBS with the template's to_star transforms.
TriMesh warp_to_star(const TriMesh& scan, const std::vector<SkinWeights>& weights,
                     const SkinnedTemplate& tmpl);

std::vector<BoneTransform> identity_transforms(size_t bones);
std::vector<BoneTransform> inverse_transforms(const std::vector<BoneTransform>& transforms);

}  // namespace tetshell

#endif

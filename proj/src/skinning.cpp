// SPDX-License-Identifier: Apache-2.0

#include "tetshell/skinning.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "tetshell/error.hpp"
#include "tetshell/kdtree.hpp"

namespace tetshell {

using nlohmann::json;

uint16_t SkinnedTemplate::dominant_bone(size_t vertex) const {
    const SkinWeights& w = skin_weights.at(vertex);
    if (w.empty()) throw InputError("vertex " + std::to_string(vertex) + " has no skin weights");
    uint16_t best = w[0].first;
    double best_w = w[0].second;
    for (size_t i = 1; i < w.size(); ++i)
        if (w[i].second > best_w || (w[i].second == best_w && w[i].first < best)) {
            best_w = w[i].second;
            best = w[i].first;
        }
    return best;
}

void validate_template(const SkinnedTemplate& tmpl) {
    if (tmpl.joints.empty()) throw InputError("template has no joints");
    if (tmpl.parents.size() != tmpl.joints.size())
        throw InputError("template parents array does not match joint count");
    if (tmpl.skin_weights.size() != tmpl.vertices.size())
        throw InputError("template weight list does not match vertex count");
    if (tmpl.to_star.size() != tmpl.joints.size())
        throw InputError("template to_star does not match bone count");
    for (size_t v = 0; v < tmpl.skin_weights.size(); ++v) {
        double sum = 0.0;
        for (const auto& [bone, w] : tmpl.skin_weights[v]) {
            if (bone >= tmpl.bone_count())
                throw InputError("vertex " + std::to_string(v) + " references unknown bone " +
                                 std::to_string(bone));
            if (w < 0.0) throw InputError("negative skin weight at vertex " + std::to_string(v));
            sum += w;
        }
        if (std::fabs(sum - 1.0) > 1e-6)
            throw InputError("skin weights at vertex " + std::to_string(v) +
                             " sum to " + std::to_string(sum));
    }
    for (size_t b = 0; b < tmpl.to_star.size(); ++b) {
        const Mat3& r = tmpl.to_star[b].rotation;
        const Mat3 rtr = r.transposed() * r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double want = i == j ? 1.0 : 0.0;
                if (std::fabs(rtr.m[i][j] - want) > 1e-6)
                    throw InputError("to_star rotation of bone " + std::to_string(b) +
                                     " is not orthonormal");
            }
        if (std::fabs(r.det() - 1.0) > 1e-6)
            throw InputError("to_star rotation of bone " + std::to_string(b) +
                             " has determinant != +1");
    }
}

namespace {

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw InputError("expected a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json transform_to_json(const BoneTransform& t) {
    json rot = json::array();
    for (int i = 0; i < 3; ++i)
        rot.push_back(json::array({t.rotation.m[i][0], t.rotation.m[i][1], t.rotation.m[i][2]}));
    return json{{"rotation", rot}, {"translation", vec_to_json(t.translation)}};
}

BoneTransform transform_from_json(const json& j) {
    BoneTransform t;
    const json& rot = j.at("rotation");
    if (!rot.is_array() || rot.size() != 3) throw InputError("rotation must be a 3x3 array");
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) t.rotation.m[i][k] = rot[i][k].get<double>();
    t.translation = vec_from_json(j.at("translation"));
    return t;
}

json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    return j;
}

}  // namespace

SkinnedTemplate load_template_json(const std::string& path) {
    const json j = parse_json_file(path);
    SkinnedTemplate t;
    try {
        for (const auto& v : j.at("joints")) t.joints.push_back(vec_from_json(v));
        for (const auto& p : j.at("parents")) t.parents.push_back(p.get<int32_t>());
        for (const auto& v : j.at("vertices")) t.vertices.push_back(vec_from_json(v));
        for (const auto& wl : j.at("weights")) {
            SkinWeights w;
            for (const auto& entry : wl)
                w.emplace_back(uint16_t(entry[0].get<unsigned>()), entry[1].get<double>());
            t.skin_weights.push_back(std::move(w));
        }
        for (const auto& tr : j.at("to_star")) t.to_star.push_back(transform_from_json(tr));
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    validate_template(t);
    return t;
}

void save_template_json(const SkinnedTemplate& tmpl, const std::string& path) {
    json j;
    j["joints"] = json::array();
    for (const Vec3& v : tmpl.joints) j["joints"].push_back(vec_to_json(v));
    j["parents"] = tmpl.parents;
    j["vertices"] = json::array();
    for (const Vec3& v : tmpl.vertices) j["vertices"].push_back(vec_to_json(v));
    j["weights"] = json::array();
    for (const SkinWeights& wl : tmpl.skin_weights) {
        json entry = json::array();
        for (const auto& [bone, w] : wl) entry.push_back(json::array({bone, w}));
        j["weights"].push_back(entry);
    }
    j["to_star"] = json::array();
    for (const BoneTransform& t : tmpl.to_star) j["to_star"].push_back(transform_to_json(t));
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    out << j.dump(1, '\t') << "\n";
}

std::vector<BoneTransform> load_pose_json(const std::string& path, size_t expected_bones) {
    const json j = parse_json_file(path);
    const json& list = j.is_array() ? j : j.at("transforms");
    std::vector<BoneTransform> pose;
    try {
        for (const auto& tr : list) pose.push_back(transform_from_json(tr));
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    if (expected_bones != 0 && pose.size() != expected_bones)
        throw InputError(path + ": expected " + std::to_string(expected_bones) +
                         " bone transforms, got " + std::to_string(pose.size()));
    return pose;
}

void save_pose_json(const std::vector<BoneTransform>& pose, const std::string& path) {
    json list = json::array();
    for (const BoneTransform& t : pose) list.push_back(transform_to_json(t));
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    out << json{{"transforms", list}}.dump(1, '\t') << "\n";
}

std::vector<SkinWeights> bind_vertices(const TriMesh& scan, const SkinnedTemplate& tmpl) {
    if (tmpl.vertices.empty()) throw InputError("bind_vertices: template has no vertices");
    const KdTree tree(tmpl.vertices);
    std::vector<SkinWeights> out(scan.vertices.size());
    for (size_t v = 0; v < scan.vertices.size(); ++v)
        out[v] = tmpl.skin_weights[tree.nearest(scan.vertices[v])];
    return out;
}

TriMesh lbs_warp(const TriMesh& mesh, const std::vector<SkinWeights>& weights,
                 const std::vector<BoneTransform>& transforms) {
    if (weights.size() != mesh.vertices.size())
        throw InputError("lbs_warp: weight list does not match vertex count");
    TriMesh out = mesh;
    for (size_t v = 0; v < mesh.vertices.size(); ++v) {
        Vec3 p{};
        for (const auto& [bone, w] : weights[v]) {
            if (bone >= transforms.size())
                throw InputError("lbs_warp: weight references unknown bone " +
                                 std::to_string(bone));
            p += transforms[bone].apply(mesh.vertices[v]) * w;
        }
        out.vertices[v] = p;
    }
    if (!out.faces.empty()) compute_vertex_normals(out);
    return out;
}

TriMesh warp_to_star(const TriMesh& scan, const std::vector<SkinWeights>& weights,
                     const SkinnedTemplate& tmpl) {
    return lbs_warp(scan, weights, tmpl.to_star);
}

std::vector<BoneTransform> identity_transforms(size_t bones) {
    return std::vector<BoneTransform>(bones, BoneTransform{Mat3::identity(), Vec3{}});
}

std::vector<BoneTransform> inverse_transforms(const std::vector<BoneTransform>& transforms) {
    std::vector<BoneTransform> inv(transforms.size());
    for (size_t b = 0; b < transforms.size(); ++b) inv[b] = transforms[b].inverse();
    return inv;
}

}  // namespace tetshell

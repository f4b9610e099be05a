// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "tetshell/error.hpp"
#include "tetshell/marching_tetra.hpp"
#include "tetshell/shapes.hpp"
#include "tetshell/tetra_grid.hpp"
#include "tetshell/trimesh.hpp"
#include "tetshell/tsdf.hpp"

using namespace tetshell;

namespace {

TetraGrid unit_tet() {
    TetraGrid g;
    g.summits = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    g.tets = {{0, 1, 2, 3}};
    g.resolution = 1.0;
    return g;
}

TsdfField field_of(std::vector<double> v) {
    TsdfField f;
    f.values = std::move(v);
    return f;
}

// Edge -> number of incident faces; watertight surfaces use every edge twice.
std::map<std::pair<uint32_t, uint32_t>, int> edge_use(const TriMesh& m) {
    std::map<std::pair<uint32_t, uint32_t>, int> uses;
    for (const auto& f : m.faces)
        for (int e = 0; e < 3; ++e) {
            uint32_t a = f[e], b = f[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            ++uses[{a, b}];
        }
    return uses;
}

}  // namespace

TEST_CASE("one summit against three gives one triangle at the midpoints") {
    const TriMesh m = extract_isosurface(unit_tet(), field_of({-1, 1, 1, 1}));
    REQUIRE(m.faces.size() == 1);
    REQUIRE(m.vertices.size() == 3);
    // Crossings at t = 0.5 on the three edges out of summit 0, ordered by edge key.
    CHECK(m.vertices[0] == Vec3{0.5, 0, 0});
    CHECK(m.vertices[1] == Vec3{0, 0.5, 0});
    CHECK(m.vertices[2] == Vec3{0, 0, 0.5});
    // The normal faces the positive side (away from summit 0).
    const Vec3 n = face_normal(m, 0);
    CHECK(n.dot(Vec3{1, 1, 1}) > 0.0);
}

TEST_CASE("the mirrored case flips orientation") {
    const TriMesh m = extract_isosurface(unit_tet(), field_of({1, -1, -1, -1}));
    REQUIRE(m.faces.size() == 1);
    CHECK(face_normal(m, 0).dot(Vec3{1, 1, 1}) < 0.0);  // positive side is summit 0
}

TEST_CASE("two against two gives a quad split through the smallest-edge vertex") {
    const TriMesh m = extract_isosurface(unit_tet(), field_of({-1, -1, 1, 1}));
    REQUIRE(m.faces.size() == 2);
    REQUIRE(m.vertices.size() == 4);
    // Crossing edges are exactly (0,2), (0,3), (1,2), (1,3), all at t = 0.5.
    const std::set<std::array<double, 3>> expected = {
        {0, 0.5, 0}, {0, 0, 0.5}, {0.5, 0.5, 0}, {0.5, 0, 0.5}};
    std::set<std::array<double, 3>> got;
    for (const Vec3& v : m.vertices) got.insert({v.x, v.y, v.z});
    CHECK(got == expected);
    // Both triangles share the diagonal anchored at the smallest crossing edge
    // key (0,2), whose vertex is the first in edge-key order.
    for (const auto& f : m.faces) CHECK(std::count(f.begin(), f.end(), 0u) == 1);
    // Consistent orientation: the shared diagonal is used once per direction,
    // so every directed edge of the two faces is unique.
    std::set<std::pair<uint32_t, uint32_t>> directed;
    for (const auto& f : m.faces)
        for (int e = 0; e < 3; ++e) CHECK(directed.insert({f[e], f[(e + 1) % 3]}).second);
}

TEST_CASE("summits exactly at the isovalue count as positive") {
    CHECK(extract_isosurface(unit_tet(), field_of({0, 0, 0, 0})).faces.empty());
    CHECK(extract_isosurface(unit_tet(), field_of({0, 1, 1, 1})).faces.empty());
    // One real negative still cuts a triangle near the zero summits.
    const TriMesh m = extract_isosurface(unit_tet(), field_of({-1, 0, 0, 0}));
    CHECK(m.faces.size() == 1);
}

TEST_CASE("an affine field reproduces its plane exactly") {
    Aabb box;
    box.expand({0, 0, 0});
    box.expand({1, 1, 1});
    const TetraGrid g = tetrahedralize_box(box, 0.25);
    TsdfField f;
    f.values.reserve(g.summits.size());
    for (const Vec3& p : g.summits) f.values.push_back(p.z - 0.37);
    const TriMesh m = extract_isosurface(g, f);

    REQUIRE(!m.faces.empty());
    for (const Vec3& v : m.vertices) CHECK(v.z == doctest::Approx(0.37).epsilon(1e-12));
    for (uint32_t face = 0; face < m.faces.size(); ++face) {
        CHECK(face_normal(m, face).z > 0.999);  // oriented toward positive values
    }
    // The cross-section of the unit box has unit area.
    CHECK(surface_area(m) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("a sphere field extracts a crack-free sphere") {
    const double r = 0.25, h = 0.05;
    Aabb box;
    box.expand({-0.35, -0.35, -0.35});
    box.expand({0.35, 0.35, 0.35});
    const TetraGrid g = tetrahedralize_box(box, h);
    TsdfField f;
    f.values.reserve(g.summits.size());
    for (const Vec3& p : g.summits)
        f.values.push_back(std::clamp((p.norm() - r) / 0.03, -1.0, 1.0));
    const TriMesh m = extract_isosurface(g, f);

    REQUIRE(m.faces.size() > 100);
    double mean = 0.0, worst = 0.0;
    for (const Vec3& v : m.vertices) {
        const double err = std::abs(v.norm() - r);
        mean += err;
        worst = std::max(worst, err);
    }
    mean /= double(m.vertices.size());
    CHECK(mean < 0.002);
    CHECK(worst < 0.006);

    // Closed, manifold, genus 0.
    CHECK(count_boundary_edges(m) == 0);
    std::size_t edges = 0;
    for (const auto& [edge, uses] : edge_use(m)) {
        CHECK(uses == 2);
        ++edges;
        (void)edge;
    }
    CHECK(m.vertices.size() - edges + m.faces.size() == 2);  // Euler

    // No duplicated vertices anywhere (bitwise).
    std::set<std::array<double, 3>> unique;
    for (const Vec3& v : m.vertices) unique.insert({v.x, v.y, v.z});
    CHECK(unique.size() == m.vertices.size());

    // Outward orientation everywhere.
    for (uint32_t face = 0; face < m.faces.size(); ++face) {
        const Vec3 c = (m.vertices[m.faces[face][0]] + m.vertices[m.faces[face][1]] +
                        m.vertices[m.faces[face][2]]) /
                       3.0;
        CHECK(face_normal(m, face).dot(c) > 0.0);
    }
    CHECK(m.has_normals());
}

TEST_CASE("a nonzero isovalue shifts the extracted radius") {
    const double r = 0.25, h = 0.05, tau = 0.03;
    Aabb box;
    box.expand({-0.35, -0.35, -0.35});
    box.expand({0.35, 0.35, 0.35});
    const TetraGrid g = tetrahedralize_box(box, h);
    TsdfField f;
    for (const Vec3& p : g.summits)
        f.values.push_back(std::clamp((p.norm() - r) / tau, -1.0, 1.0));
    const TriMesh m = extract_isosurface(g, f, 0.5);  // d = tau/2 outside
    for (const Vec3& v : m.vertices)
        CHECK(v.norm() == doctest::Approx(r + tau / 2).epsilon(0.03));
}

TEST_CASE("field size must match the grid") {
    CHECK_THROWS_AS(extract_isosurface(unit_tet(), field_of({1, -1})), InputError);
}

TEST_CASE("repose validates the pose and honors identity") {
    const RiggedMesh rig = make_two_bone_cylinder();
    CHECK_THROWS_AS(repose(rig.mesh, rig.tmpl, identity_transforms(2)), InputError);
    const TriMesh same = repose(rig.mesh, rig.tmpl, identity_transforms(3));
    REQUIRE(same.vertices.size() == rig.mesh.vertices.size());
    for (std::size_t i = 0; i < same.vertices.size(); ++i)
        CHECK((same.vertices[i] - rig.mesh.vertices[i]).norm() < 1e-14);
}

TEST_CASE("repose bends the extracted surface like the template") {
    const RiggedMesh rig = make_two_bone_cylinder();
    std::vector<BoneTransform> pose = identity_transforms(3);
    const Mat3 r = Mat3::rotation({1, 0, 0}, 0.8);
    pose[2] = {r, Vec3{}};  // pivot at the origin joint

    const TriMesh bent = repose(rig.mesh, rig.tmpl, pose);
    // A vertex rigidly owned by bone 2 lands exactly on its rotated position.
    for (std::size_t i = 0; i < rig.mesh.vertices.size(); ++i) {
        if (rig.tmpl.skin_weights[i].size() != 1) continue;
        const Vec3 v = rig.mesh.vertices[i];
        const Vec3 expect = rig.tmpl.skin_weights[i][0].first == 2 ? r * v : v;
        CHECK((bent.vertices[i] - expect).norm() < 1e-12);
    }
}

// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "tetshell/closest_point.hpp"
#include "tetshell/error.hpp"
#include "tetshell/hierarchy.hpp"
#include "tetshell/shapes.hpp"
#include "tetshell/tetra_grid.hpp"

using namespace tetshell;

namespace {

std::filesystem::path tmp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

double total_volume(const TetraGrid& g) {
    double v = 0.0;
    for (const auto& t : g.tets)
        v += tet_signed_volume(g.summits[t[0]], g.summits[t[1]], g.summits[t[2]],
                               g.summits[t[3]]);
    return v;
}

}  // namespace

TEST_CASE("tet_signed_volume matches the unit corner tet") {
    const double v = tet_signed_volume({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1});
    CHECK(v == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    const double w = tet_signed_volume({0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, 0, 1});
    CHECK(w == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("box stuffing tiles the box exactly") {
    Aabb box;
    box.expand({0, 0, 0});
    box.expand({0.4, 0.3, 0.2});
    const double h = 0.1;
    const TetraGrid g = tetrahedralize_box(box, h);
    // Cell counts are ceil(extent / h); the decomposition tiles them exactly.
    CHECK(total_volume(g) == doctest::Approx(0.4 * 0.3 * 0.2).epsilon(1e-9));
    for (const auto& t : g.tets)
        CHECK(tet_signed_volume(g.summits[t[0]], g.summits[t[1]], g.summits[t[2]],
                                g.summits[t[3]]) > 0.0);
    // Two summits per cell volume: corners (nx+1)(ny+1)(nz+1) plus centers nx ny nz.
    CHECK(g.summits.size() == 5u * 4u * 3u + 4u * 3u * 2u);
    CHECK(g.resolution == h);

    // No summit appears twice.
    std::set<std::array<double, 3>> unique;
    for (const Vec3& p : g.summits) unique.insert({p.x, p.y, p.z});
    CHECK(unique.size() == g.summits.size());
}

TEST_CASE("sphere stuffing keeps exactly the tets with an inside summit") {
    TriMesh sphere = make_icosphere(0.25, 4);
    const TetraGrid g = tetrahedralize(sphere, 0.05);

    compute_vertex_normals(sphere);
    const ClosestPointIndex index(sphere);
    for (const auto& t : g.tets) {
        bool any_inside = false;
        for (uint32_t s : t) any_inside = any_inside || index.is_inside(g.summits[s]);
        CHECK(any_inside);
    }

    // The union of kept tets covers the ball and stays within a dilated ball.
    const double ball = 4.0 / 3.0 * 3.14159265358979 * 0.25 * 0.25 * 0.25;
    const double dilated = 4.0 / 3.0 * 3.14159265358979 * 0.35 * 0.35 * 0.35;
    CHECK(total_volume(g) > 0.95 * ball);
    CHECK(total_volume(g) < dilated);

    // Summit density tracks two nodes per h^3 of covered volume.
    const double expected = 2.0 * total_volume(g) / (0.05 * 0.05 * 0.05);
    CHECK(double(g.summits.size()) > expected * 0.85);
    CHECK(double(g.summits.size()) < expected * 1.15);

    CHECK(mean_edge_length(g) > 0.04);
    CHECK(mean_edge_length(g) < 0.065);
}

TEST_CASE("stuffing rejects a resolution coarser than the shell") {
    const TriMesh tiny = make_icosphere(0.05, 2);
    CHECK_THROWS_AS(tetrahedralize(tiny, 0.5), InputError);
}

TEST_CASE("stuffing rejects an open surface") {
    TriMesh open_mesh = make_icosphere(0.25, 3);
    open_mesh.faces.resize(open_mesh.faces.size() / 2);  // tear off half the sphere
    CHECK_THROWS_AS(tetrahedralize(open_mesh, 0.05), InputError);
}

TEST_CASE("part labels split a two-bone cylinder at the waist") {
    const RiggedMesh rig = make_two_bone_cylinder();
    TetraGrid grid = tetrahedralize(rig.mesh, 0.045);
    CHECK(!grid.has_labels());
    assign_part_labels(grid, rig.tmpl);
    REQUIRE(grid.has_labels());

    std::set<uint16_t> used(grid.part_labels.begin(), grid.part_labels.end());
    CHECK(used == std::set<uint16_t>{1, 2});  // matches the bones that own vertices
    for (std::size_t s = 0; s < grid.summits.size(); ++s) {
        if (grid.summits[s].z < -0.15) CHECK(grid.part_labels[s] == 1);
        if (grid.summits[s].z > 0.15) CHECK(grid.part_labels[s] == 2);
    }
}

TEST_CASE("TGRD round trip is stable from the first save") {
    const RiggedMesh rig = make_two_bone_cylinder();
    TetraGrid grid = tetrahedralize(rig.mesh, 0.06);
    assign_part_labels(grid, rig.tmpl);

    const auto p1 = tmp_file("tetshell_grid1.tgrd");
    const auto p2 = tmp_file("tetshell_grid2.tgrd");
    save_tgrd(grid, p1.string());
    const TetraGrid back = load_tgrd(p1.string());
    REQUIRE(back.summits.size() == grid.summits.size());
    CHECK(back.tets == grid.tets);
    CHECK(back.part_labels == grid.part_labels);
    for (std::size_t s = 0; s < grid.summits.size(); ++s) {
        CHECK(back.summits[s].x == double(float(grid.summits[s].x)));
        CHECK(back.summits[s].y == double(float(grid.summits[s].y)));
        CHECK(back.summits[s].z == double(float(grid.summits[s].z)));
    }
    // Reserialization of the loaded grid is byte-identical.
    save_tgrd(back, p2.string());
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)), {});
    const std::string b2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(b1 == b2);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("load_tgrd rejects junk") {
    const auto p = tmp_file("tetshell_junk.tgrd");
    std::ofstream(p, std::ios::binary) << "this is not a grid";
    CHECK_THROWS_AS(load_tgrd(p.string()), InputError);
    std::filesystem::remove(p);
    CHECK_THROWS_AS(load_tgrd("/nonexistent/grid.tgrd"), InputError);
}

TEST_CASE("hierarchy levels are nested, deterministic and well spread") {
    const TriMesh sphere = make_icosphere(0.25, 3);
    const TetraGrid grid = tetrahedralize(sphere, 0.045);
    const uint32_t n = uint32_t(grid.summits.size());
    const SummitHierarchy h = build_hierarchy(grid, {n, 120, 30});

    REQUIRE(h.level_count() == 3);
    REQUIRE(h.levels[0].size() == n);
    for (uint32_t i = 0; i < n; ++i) CHECK(h.levels[0][i] == i);  // identity
    CHECK(h.levels[1].size() == 120);
    CHECK(h.levels[2].size() == 30);
    CHECK(h.levels[1][0] == 0);  // sampling starts at the previous level's head
    CHECK(h.levels[2][0] == 0);

    // Nesting: each level draws from the one before it.
    const std::set<uint32_t> l1(h.levels[1].begin(), h.levels[1].end());
    CHECK(l1.size() == h.levels[1].size());
    for (uint32_t id : h.levels[2]) CHECK(l1.count(id) == 1);

    // Farthest-point property: separation of the sample is at least its
    // covering radius of the parent level.
    for (std::size_t lvl : {1u, 2u}) {
        const auto& sel = h.levels[lvl];
        double sep = 1e300;
        for (std::size_t i = 0; i < sel.size(); ++i)
            for (std::size_t j = i + 1; j < sel.size(); ++j)
                sep = std::min(sep,
                               (grid.summits[sel[i]] - grid.summits[sel[j]]).norm());
        double cover = 0.0;
        for (uint32_t id : h.levels[lvl - 1]) {
            double best = 1e300;
            for (uint32_t s : sel) best = std::min(best, (grid.summits[id] - grid.summits[s]).norm());
            cover = std::max(cover, best);
        }
        CHECK(sep >= cover - 1e-12);
    }

    const SummitHierarchy again = build_hierarchy(grid, {n, 120, 30});
    CHECK(again.levels == h.levels);
}

TEST_CASE("hierarchy validates its level sizes") {
    const TriMesh sphere = make_icosphere(0.2, 2);
    const TetraGrid grid = tetrahedralize(sphere, 0.05);
    const uint32_t n = uint32_t(grid.summits.size());
    CHECK_THROWS_AS(build_hierarchy(grid, {n + 1, 10}), InputError);
    CHECK_THROWS_AS(build_hierarchy(grid, {n, 10, 10}), InputError);
    CHECK_THROWS_AS(build_hierarchy(grid, {n, 20, 0}), InputError);
    CHECK_THROWS_AS(build_hierarchy(grid, {}), InputError);
}

TEST_CASE("hierarchy labels mirror the grid labels per level") {
    const RiggedMesh rig = make_two_bone_cylinder();
    TetraGrid grid = tetrahedralize(rig.mesh, 0.05);
    assign_part_labels(grid, rig.tmpl);
    const SummitHierarchy h =
        build_hierarchy(grid, {uint32_t(grid.summits.size()), 60, 20});
    REQUIRE(h.has_labels());
    REQUIRE(h.labels.size() == h.levels.size());
    for (std::size_t lvl = 0; lvl < h.level_count(); ++lvl) {
        REQUIRE(h.labels[lvl].size() == h.levels[lvl].size());
        for (std::size_t i = 0; i < h.levels[lvl].size(); ++i)
            CHECK(h.labels[lvl][i] == grid.part_labels[h.levels[lvl][i]]);
    }
}

TEST_CASE("THIE round trip restores levels and labels") {
    const RiggedMesh rig = make_two_bone_cylinder();
    TetraGrid grid = tetrahedralize(rig.mesh, 0.05);
    assign_part_labels(grid, rig.tmpl);
    const SummitHierarchy h =
        build_hierarchy(grid, {uint32_t(grid.summits.size()), 50, 12});

    const auto p = tmp_file("tetshell_h.thie");
    save_thie(h, p.string());
    const SummitHierarchy flat = load_thie(p.string());
    CHECK(flat.levels == h.levels);
    CHECK(!flat.has_labels());  // labels live in the grid, not the file

    const SummitHierarchy restored = load_thie(p.string(), &grid);
    CHECK(restored.levels == h.levels);
    REQUIRE(restored.has_labels());
    CHECK(restored.labels == h.labels);

    // A grid with a different summit count must be refused.
    const TetraGrid other = tetrahedralize(make_icosphere(0.2, 3), 0.05);
    CHECK_THROWS_AS(load_thie(p.string(), &other), InputError);
    std::filesystem::remove(p);
}

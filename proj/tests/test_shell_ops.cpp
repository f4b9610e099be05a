// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "tetshell/error.hpp"
#include "tetshell/shapes.hpp"
#include "tetshell/shell_ops.hpp"
#include "tetshell/tetra_grid.hpp"
#include "tetshell/trimesh.hpp"

using namespace tetshell;

TEST_CASE("inflating a sphere produces a sphere with grown radius") {
    const TriMesh sphere = make_icosphere(0.3, 3);
    const TriMesh shell = inflate_mesh(sphere, 0.05);
    REQUIRE(shell.vertices.size() == sphere.vertices.size());
    CHECK(shell.faces == sphere.faces);  // topology untouched
    for (const Vec3& v : shell.vertices)
        CHECK(v.norm() == doctest::Approx(0.35).epsilon(2e-3));  // normals nearly radial
}

TEST_CASE("inflation moves every vertex by exactly the offset") {
    const TriMesh cube = make_cube(1.0);
    const TriMesh shell = inflate_mesh(cube, 0.02);
    for (std::size_t i = 0; i < cube.vertices.size(); ++i)
        CHECK((shell.vertices[i] - cube.vertices[i]).norm() ==
              doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("inflation requires a positive offset") {
    const TriMesh cube = make_cube(1.0);
    CHECK_THROWS_AS(inflate_mesh(cube, 0.0), InputError);
    CHECK_THROWS_AS(inflate_mesh(cube, -0.1), InputError);
}

TEST_CASE("decimation lands within 20% of the target vertex count") {
    const TriMesh sphere = make_icosphere(0.5, 4);  // 2562 vertices
    for (std::size_t target : {300u, 600u, 1200u}) {
        const TriMesh coarse = decimate(sphere, target);
        CHECK_NOTHROW(validate_mesh(coarse));
        CHECK(coarse.vertices.size() >= std::size_t(double(target) * 0.8));
        CHECK(coarse.vertices.size() <= std::size_t(double(target) * 1.2));
        // Clustering cannot move a vertex outside the original bounds.
        const Aabb in = sphere.bounds(), out = coarse.bounds();
        for (int a = 0; a < 3; ++a) {
            CHECK(out.lo[a] >= in.lo[a] - 1e-12);
            CHECK(out.hi[a] <= in.hi[a] + 1e-12);
        }
    }
}

TEST_CASE("decimation keeps a closed sphere closed enough to re-inflate") {
    const TriMesh coarse = decimate(make_icosphere(0.5, 4), 400);
    // A clustered sphere should still be a plausible sphere.
    double rmin = 1e9, rmax = 0.0;
    for (const Vec3& v : coarse.vertices) {
        rmin = std::min(rmin, v.norm());
        rmax = std::max(rmax, v.norm());
    }
    CHECK(rmin > 0.4);
    CHECK(rmax < 0.51);
}

TEST_CASE("midpoint subdivision follows the 1:4 pattern with shared midpoints") {
    const TriMesh base = make_icosphere(1.0, 2);  // V=162 F=320 E=480
    const TriMesh fine = subdivide_midpoint(base, 1);
    CHECK(fine.faces.size() == 4 * base.faces.size());
    // Closed mesh: E = 3F/2, V' = V + E.
    CHECK(fine.vertices.size() == base.vertices.size() + base.faces.size() * 3 / 2);
    CHECK(count_boundary_edges(fine) == 0);
    CHECK_NOTHROW(validate_mesh(fine));

    const TriMesh fine2 = subdivide_midpoint(base, 2);
    CHECK(fine2.faces.size() == 16 * base.faces.size());
}

TEST_CASE("subdivision midpoints bisect the parent edges") {
    TriMesh tri;
    tri.vertices = {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}};
    tri.faces = {{0, 1, 2}};
    const TriMesh fine = subdivide_midpoint(tri, 1);
    REQUIRE(fine.vertices.size() == 6);
    REQUIRE(fine.faces.size() == 4);
    int on_edges = 0;
    for (const Vec3& v : fine.vertices) {
        if ((v - Vec3{1, 0, 0}).norm() < 1e-15 || (v - Vec3{0, 1, 0}).norm() < 1e-15 ||
            (v - Vec3{1, 1, 0}).norm() < 1e-15)
            ++on_edges;
    }
    CHECK(on_edges == 3);
    double area = 0.0;
    for (uint32_t f = 0; f < fine.faces.size(); ++f) area += face_area(fine, f);
    CHECK(area == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("shell pipeline: inflate, decimate, subdivide yields a usable shell") {
    const TriMesh body = make_icosphere(0.25, 3);
    TriMesh shell = inflate_mesh(body, 0.04);
    shell = decimate(shell, 160);
    shell = subdivide_midpoint(shell, 1);
    CHECK_NOTHROW(validate_mesh(shell));
    double rmin = 1e9;
    for (const Vec3& v : shell.vertices) rmin = std::min(rmin, v.norm());
    CHECK(rmin > 0.25);  // the shell stays strictly outside the body
    // The contract that matters downstream: the result still bounds a volume
    // the stuffing stage accepts (its parity audit rejects open surfaces).
    const TetraGrid grid = tetrahedralize(shell, 0.06);
    CHECK(grid.tets.size() >= 10);
    for (const auto& t : grid.tets)
        CHECK(tet_signed_volume(grid.summits[t[0]], grid.summits[t[1]], grid.summits[t[2]],
                                grid.summits[t[3]]) > 0.0);
}

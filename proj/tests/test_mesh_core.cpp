// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "tetshell/closest_point.hpp"
#include "tetshell/error.hpp"
#include "tetshell/kdtree.hpp"
#include "tetshell/mesh_io.hpp"
#include "tetshell/parallel.hpp"
#include "tetshell/rng.hpp"
#include "tetshell/shapes.hpp"
#include "tetshell/trimesh.hpp"

using namespace tetshell;

namespace {

std::filesystem::path tmp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("Mat3 rotation is orthonormal with unit determinant") {
    const Mat3 r = Mat3::rotation({1, 2, -0.5}, 1.234);
    const Mat3 rrt = r * r.transposed();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(rrt.m[i][j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    CHECK(r.det() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("validate_mesh rejects out-of-range and repeated indices") {
    TriMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.faces = {{0, 1, 2}};
    CHECK_NOTHROW(validate_mesh(m));
    m.faces = {{0, 1, 3}};
    CHECK_THROWS_AS(validate_mesh(m), InputError);
    m.faces = {{0, 1, 1}};
    CHECK_THROWS_AS(validate_mesh(m), InputError);
}

TEST_CASE("cube normals point outward and its area is 6 s^2") {
    TriMesh cube = make_cube(2.0);
    CHECK_NOTHROW(validate_mesh(cube));
    CHECK(count_boundary_edges(cube) == 0);
    CHECK(surface_area(cube) == doctest::Approx(24.0).epsilon(1e-12));
    compute_vertex_normals(cube);
    for (std::size_t i = 0; i < cube.vertices.size(); ++i)
        CHECK(cube.normals[i].dot(cube.vertices[i]) > 0.0);  // center at origin
    for (uint32_t f = 0; f < cube.faces.size(); ++f) {
        const Vec3 c = (cube.vertices[cube.faces[f][0]] + cube.vertices[cube.faces[f][1]] +
                        cube.vertices[cube.faces[f][2]]) /
                       3.0;
        CHECK(face_normal(cube, f).dot(c) > 0.0);
    }
}

TEST_CASE("boundary edge count: open fan vs closed surface") {
    TriMesh tri;
    tri.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    tri.faces = {{0, 1, 2}};
    CHECK(count_boundary_edges(tri) == 3);
    CHECK(count_boundary_edges(make_icosphere(1.0, 2)) == 0);
}

TEST_CASE("icosphere counts follow 1:4 subdivision") {
    for (int level : {0, 1, 2, 3}) {
        const TriMesh s = make_icosphere(1.0, level);
        const std::size_t f = 20u << (2 * level);
        CHECK(s.faces.size() == f);
        CHECK(s.vertices.size() == f / 2 + 2);  // Euler, genus 0
        for (const Vec3& v : s.vertices) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("OBJ round trip preserves topology and coordinates") {
    TriMesh mesh = make_icosphere(0.37, 2);
    compute_vertex_normals(mesh);
    const auto path = tmp_file("tetshell_roundtrip.obj");
    save_obj(mesh, path.string());
    const TriMesh back = load_mesh(path.string());
    REQUIRE(back.vertices.size() == mesh.vertices.size());
    REQUIRE(back.faces.size() == mesh.faces.size());
    CHECK(back.faces == mesh.faces);
    CHECK(back.has_normals());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        CHECK((back.vertices[i] - mesh.vertices[i]).norm() < 1e-7);
    std::filesystem::remove(path);
}

TEST_CASE("PLY binary round trip is float32 exact") {
    TriMesh mesh = make_icosphere(0.9, 2);
    const auto path = tmp_file("tetshell_roundtrip.ply");
    save_ply(mesh, path.string());
    const TriMesh back = load_mesh(path.string());
    REQUIRE(back.vertices.size() == mesh.vertices.size());
    CHECK(back.faces == mesh.faces);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        CHECK(back.vertices[i].x == double(float(mesh.vertices[i].x)));
        CHECK(back.vertices[i].y == double(float(mesh.vertices[i].y)));
        CHECK(back.vertices[i].z == double(float(mesh.vertices[i].z)));
    }
    std::filesystem::remove(path);
}

TEST_CASE("OBJ loader fan-triangulates polygons and reports bad lines") {
    std::istringstream quad(
        "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
        "f 1 2 3 4\n");
    const TriMesh m = load_obj(quad, "quad");
    REQUIRE(m.faces.size() == 2);
    CHECK(m.faces[0] == std::array<uint32_t, 3>{0, 1, 2});
    CHECK(m.faces[1] == std::array<uint32_t, 3>{0, 2, 3});

    std::istringstream bad("v 0 0\n");
    CHECK_THROWS_AS(load_obj(bad, "bad"), InputError);
    std::istringstream oob("v 0 0 0\nf 1 2 3\n");
    CHECK_THROWS_AS(load_obj(oob, "oob"), InputError);
}

TEST_CASE("kd-tree nearest and knn match brute force including ties") {
    Rng rng(7);
    std::vector<Vec3> pts;
    for (int i = 0; i < 400; ++i)
        pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    // Duplicate points create exact distance ties.
    for (int i = 0; i < 20; ++i) pts.push_back(pts[std::size_t(rng.next_index(pts.size()))]);
    const KdTree tree(pts);

    for (int q = 0; q < 120; ++q) {
        const Vec3 query{rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
        std::vector<std::pair<double, uint32_t>> ranked;
        for (uint32_t i = 0; i < pts.size(); ++i)
            ranked.push_back({(pts[i] - query).squared_norm(), i});
        std::sort(ranked.begin(), ranked.end());
        CHECK(tree.nearest(query) == ranked[0].second);
        const std::vector<uint32_t> got = tree.knn(query, 7);
        REQUIRE(got.size() == 7);
        for (std::size_t j = 0; j < got.size(); ++j) CHECK(got[j] == ranked[j].second);
    }
}

TEST_CASE("closest-point index equals brute force on a sphere") {
    TriMesh sphere = make_icosphere(0.5, 3);
    compute_vertex_normals(sphere);
    const ClosestPointIndex index(sphere);
    Rng rng(99);
    for (int q = 0; q < 200; ++q) {
        const Vec3 p{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
        const ClosestPointResult a = index.closest_point(p);
        const ClosestPointResult b = closest_point_brute_force(sphere, p);
        CHECK(a.triangle == b.triangle);
        CHECK(a.distance == doctest::Approx(b.distance).epsilon(1e-12));
        CHECK((a.point - b.point).norm() < 1e-12);
    }
}

TEST_CASE("closest-point index requires normals") {
    const TriMesh sphere = make_icosphere(0.5, 2);  // normals never computed
    CHECK_THROWS_AS(ClosestPointIndex{sphere}, InputError);
}

TEST_CASE("plane-sign and parity inside tests agree on a closed surface") {
    TriMesh sphere = make_icosphere(0.4, 4);
    compute_vertex_normals(sphere);
    const ClosestPointIndex index(sphere);
    Rng rng(31);
    int inside = 0;
    for (int q = 0; q < 300; ++q) {
        const Vec3 p{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)};
        if (std::abs(p.norm() - 0.4) < 0.01) continue;  // skip the tessellation band
        CHECK(index.is_inside(p) == (p.norm() < 0.4));
        CHECK(index.is_inside_parity(p) == (p.norm() < 0.4));
        inside += index.is_inside(p);
    }
    CHECK(inside > 20);  // the sample actually exercised both sides
}

TEST_CASE("rng streams are reproducible and shuffle is seed-stable") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    for (int i = 0; i < 1000; ++i) {
        const double d = a.next_double();
        CHECK(d >= 0.0);
        CHECK(d < 1.0);
    }
    for (int i = 0; i < 1000; ++i) CHECK(a.next_index(13) < 13);

    std::vector<int> v1(257), v2(257);
    for (int i = 0; i < 257; ++i) v1[std::size_t(i)] = v2[std::size_t(i)] = i;
    Rng s1(5), s2(5);
    tetshell::shuffle(v1, s1);
    tetshell::shuffle(v2, s2);
    CHECK(v1 == v2);
    std::vector<int> sorted = v1;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 257; ++i) CHECK(sorted[std::size_t(i)] == i);  // a permutation
}

TEST_CASE("parallel_for output is independent of the worker count") {
    const std::size_t n = 10000;
    auto run = [&](int workers) {
        set_thread_count(workers);
        std::vector<double> out(n);
        parallel_for(n, [&](std::size_t i) { out[i] = std::sin(double(i)) * 0.5; });
        std::vector<double> chunked(n);
        parallel_for_chunks(n, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) chunked[i] = std::sin(double(i)) * 0.5;
        });
        CHECK(out == chunked);
        return out;
    };
    const std::vector<double> serial = run(1);
    const std::vector<double> parallel = run(4);
    CHECK(serial == parallel);
    set_thread_count(0);

    std::atomic<uint64_t> visits{0};
    parallel_for(1234, [&](std::size_t) { visits.fetch_add(1, std::memory_order_relaxed); });
    CHECK(visits.load() == 1234);
}

// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <array>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "tetshell/closest_point.hpp"
#include "tetshell/error.hpp"
#include "tetshell/eval.hpp"
#include "tetshell/mesh_io.hpp"
#include "tetshell/shapes.hpp"
#include "tetshell/tetra_grid.hpp"

using namespace tetshell;

namespace {

std::filesystem::path tmp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("surface samples lie on the mesh and are seed-stable") {
    TriMesh sphere = make_icosphere(0.3, 3);
    const std::vector<Vec3> pts = sample_surface(sphere, 2000, 42);
    REQUIRE(pts.size() == 2000);
    compute_vertex_normals(sphere);
    const ClosestPointIndex index(sphere);
    for (const Vec3& p : pts) CHECK(index.closest_point(p).distance < 1e-9);

    const std::vector<Vec3> again = sample_surface(sphere, 2000, 42);
    CHECK(again == pts);
    const std::vector<Vec3> other = sample_surface(sphere, 2000, 43);
    CHECK(other != pts);
}

TEST_CASE("sampling is area weighted") {
    // Two triangles: one with 9x the area of the other.
    TriMesh m;
    m.vertices = {{0, 0, 0}, {3, 0, 0}, {0, 3, 0}, {10, 0, 0}, {11, 0, 0}, {10, 1, 0}};
    m.faces = {{0, 1, 2}, {3, 4, 5}};
    const std::vector<Vec3> pts = sample_surface(m, 10000, 1);
    int big = 0;
    for (const Vec3& p : pts) big += p.x < 5.0;
    CHECK(big > 8700);  // expect ~9000
    CHECK(big < 9300);
}

TEST_CASE("sampling rejects meshes without area") {
    TriMesh empty;
    CHECK_THROWS_AS(sample_surface(empty, 10, 1), InputError);
    TriMesh degenerate;
    degenerate.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    degenerate.faces = {{0, 1, 2}};  // collinear: zero area
    CHECK_THROWS_AS(sample_surface(degenerate, 10, 1), InputError);
}

TEST_CASE("chamfer distance of concentric spheres is the gap in cm") {
    const TriMesh inner = make_icosphere(0.50, 5);
    const TriMesh outer = make_icosphere(0.52, 5);
    const double d = chamfer_distance(inner, outer, 20000);
    CHECK(d == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("chamfer distance of a mesh with itself vanishes") {
    const TriMesh sphere = make_icosphere(0.4, 4);
    CHECK(chamfer_distance(sphere, sphere, 20000) < 1e-6);
}

TEST_CASE("chamfer distance is exactly symmetric") {
    const TriMesh a = make_icosphere(0.31, 4);
    const TriMesh b = make_ellipsoid(0.33, 0.29, 0.35, 4);
    const double ab = chamfer_distance(a, b, 15000);
    const double ba = chamfer_distance(b, a, 15000);
    CHECK(ab == ba);  // bitwise, not approximately
}

TEST_CASE("translation shows up linearly in the chamfer distance") {
    const TriMesh a = make_icosphere(0.3, 4);
    TriMesh b = a;
    for (Vec3& v : b.vertices) v.x += 0.01;
    // 1 cm translation of a sphere: mean closest distance is below 1 cm
    // (lateral points slide along the surface) but clearly nonzero.
    const double d = chamfer_distance(a, b, 20000);
    CHECK(d > 0.4);
    CHECK(d < 1.01);
}

TEST_CASE("heatmap distances are closest-surface distances in meters") {
    const TriMesh gt = make_icosphere(0.3, 4);
    TriMesh recon = make_icosphere(0.32, 3);
    const std::vector<double> d = error_heatmap(recon, gt);
    REQUIRE(d.size() == recon.vertices.size());
    for (double v : d) CHECK(v == doctest::Approx(0.02).epsilon(0.02));

    const std::vector<double> self = error_heatmap(gt, gt);
    for (double v : self) CHECK(v < 1e-9);
}

TEST_CASE("heatmap PLY stores one color per vertex and loads back") {
    const TriMesh gt = make_icosphere(0.3, 3);
    TriMesh recon = make_icosphere(0.315, 3);
    const std::vector<double> d = error_heatmap(recon, gt);
    const auto p = tmp_file("tetshell_heat.ply");
    save_heatmap_ply(recon, d, 0.02, p.string());

    const TriMesh back = load_mesh(p.string());  // color properties are skipped
    CHECK(back.vertices.size() == recon.vertices.size());
    CHECK(back.faces == recon.faces);

    // The color ramp actually appears in the bytes: uchar color properties.
    std::ifstream in(p, std::ios::binary);
    std::string header(400, '\0');
    in.read(header.data(), 400);
    CHECK(header.find("property uchar red") != std::string::npos);
    CHECK(header.find("property uchar green") != std::string::npos);
    CHECK(header.find("property uchar blue") != std::string::npos);
    std::filesystem::remove(p);
}

TEST_CASE("memory comparison implements ceil-per-axis voxel counting") {
    TetraGrid g;
    g.summits = {{0, 0, 0}, {0.95, 0, 0}, {0, 0.45, 0}, {0, 0, 0.25}};
    g.resolution = 0.01;
    const MemoryReport r = compare_memory(g, 0.1);
    CHECK(r.shell_summits == 4);
    CHECK(r.dims == std::array<std::size_t, 3>{10, 5, 3});
    CHECK(r.uniform_voxels == 150);
    CHECK(r.ratio == doctest::Approx(150.0 / 4.0).epsilon(1e-12));
    CHECK(r.resolution == 0.1);
    CHECK(r.extent.x == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("memory report renders as parseable JSON and a table") {
    const TriMesh sphere = make_icosphere(0.2, 3);
    const TetraGrid g = tetrahedralize(sphere, 0.04);
    const MemoryReport r = compare_memory(g, 0.04);
    CHECK(r.shell_summits == g.summits.size());
    CHECK(r.uniform_voxels == r.dims[0] * r.dims[1] * r.dims[2]);
    CHECK(r.ratio == doctest::Approx(double(r.uniform_voxels) / double(r.shell_summits))
                         .epsilon(1e-12));

    const nlohmann::json j = nlohmann::json::parse(memory_report_json(r));
    CHECK(j.at("shell_summits").get<std::size_t>() == r.shell_summits);
    CHECK(j.at("uniform_voxels").get<std::size_t>() == r.uniform_voxels);
    CHECK(j.at("ratio").get<double>() == doctest::Approx(r.ratio).epsilon(1e-9));

    const std::string table = memory_report_table(r);
    CHECK(table.find(std::to_string(r.shell_summits)) != std::string::npos);
    CHECK(table.find(std::to_string(r.uniform_voxels)) != std::string::npos);
}

TEST_CASE("memory comparison validates the resolution") {
    TetraGrid g;
    g.summits = {{0, 0, 0}, {1, 1, 1}};
    CHECK_THROWS_AS(compare_memory(g, 0.0), InputError);
    CHECK_THROWS_AS(compare_memory(g, -1.0), InputError);
}

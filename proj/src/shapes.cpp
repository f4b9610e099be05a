// SPDX-License-Identifier: Apache-2.0

#include "tetshell/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "tetshell/error.hpp"
#include "tetshell/marching_tetra.hpp"
#include "tetshell/tetra_grid.hpp"
#include "tetshell/tsdf.hpp"

namespace tetshell {

TriMesh make_icosphere(double radius, int subdivisions) {
    if (!(radius > 0.0)) throw InputError("make_icosphere: radius must be positive");
    if (subdivisions < 0) throw InputError("make_icosphere: negative subdivision count");

    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriMesh m;
    m.vertices = {{-1, t, 0},  {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                  {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
               {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
               {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
               {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (Vec3& v : m.vertices) v = v.normalized() * radius;

    for (int it = 0; it < subdivisions; ++it) {
        std::map<uint64_t, uint32_t> midpoint;
        auto mid = [&](uint32_t a, uint32_t b) {
            const uint64_t key = a < b ? (uint64_t(a) << 32 | b) : (uint64_t(b) << 32 | a);
            const auto found = midpoint.find(key);
            if (found != midpoint.end()) return found->second;
            const uint32_t id = (uint32_t)m.vertices.size();
            m.vertices.push_back(((m.vertices[a] + m.vertices[b]) * 0.5).normalized() * radius);
            midpoint.emplace(key, id);
            return id;
        };
        std::vector<std::array<uint32_t, 3>> next;
        next.reserve(m.faces.size() * 4);
        for (const auto& f : m.faces) {
            const uint32_t ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        m.faces = std::move(next);
    }
    compute_vertex_normals(m);
    return m;
}

TriMesh make_ellipsoid(double rx, double ry, double rz, int subdivisions) {
    if (!(rx > 0.0 && ry > 0.0 && rz > 0.0))
        throw InputError("make_ellipsoid: radii must be positive");
    TriMesh m = make_icosphere(1.0, subdivisions);
    for (Vec3& v : m.vertices) v = {v.x * rx, v.y * ry, v.z * rz};
    compute_vertex_normals(m);
    return m;
}

TriMesh make_cube(double side) {
    if (!(side > 0.0)) throw InputError("make_cube: side must be positive");
    const double h = side / 2.0;
    TriMesh m;
    for (int i = 0; i < 8; ++i)
        m.vertices.push_back({i & 1 ? h : -h, i & 2 ? h : -h, i & 4 ? h : -h});
    m.faces = {{0, 2, 3}, {0, 3, 1},   // z = -h
               {4, 5, 7}, {4, 7, 6},   // z = +h
               {0, 1, 5}, {0, 5, 4},   // y = -h
               {2, 6, 7}, {2, 7, 3},   // y = +h
               {0, 4, 6}, {0, 6, 2},   // x = -h
               {1, 3, 7}, {1, 7, 5}};  // x = +h
    compute_vertex_normals(m);
    return m;
}

TriMesh make_cylinder(double radius, double length, int radial_segments, int height_segments) {
    if (!(radius > 0.0 && length > 0.0))
        throw InputError("make_cylinder: radius and length must be positive");
    if (radial_segments < 3 || height_segments < 1)
        throw InputError("make_cylinder: need >= 3 radial and >= 1 height segments");

    TriMesh m;
    for (int r = 0; r <= height_segments; ++r) {
        const double z = -length / 2.0 + length * r / height_segments;
        for (int i = 0; i < radial_segments; ++i) {
            const double a = 2.0 * M_PI * i / radial_segments;
            m.vertices.push_back({radius * std::cos(a), radius * std::sin(a), z});
        }
    }
    auto ring = [&](int r, int i) { return (uint32_t)(r * radial_segments + i % radial_segments); };
    for (int r = 0; r < height_segments; ++r)
        for (int i = 0; i < radial_segments; ++i) {
            m.faces.push_back({ring(r, i), ring(r, i + 1), ring(r + 1, i + 1)});
            m.faces.push_back({ring(r, i), ring(r + 1, i + 1), ring(r + 1, i)});
        }
    const uint32_t bottom = (uint32_t)m.vertices.size();
    m.vertices.push_back({0, 0, -length / 2.0});
    const uint32_t top = (uint32_t)m.vertices.size();
    m.vertices.push_back({0, 0, length / 2.0});
    for (int i = 0; i < radial_segments; ++i) {
        m.faces.push_back({bottom, ring(0, i + 1), ring(0, i)});
        m.faces.push_back({top, ring(height_segments, i), ring(height_segments, i + 1)});
    }
    compute_vertex_normals(m);
    return m;
}

RiggedMesh make_two_bone_cylinder(double radius, double length, double blend_halfwidth,
                                  int radial_segments, int height_segments) {
    RiggedMesh rig;
    rig.mesh = make_cylinder(radius, length, radial_segments, height_segments);

    SkinnedTemplate& t = rig.tmpl;
    t.joints = {{0, 0, -length / 2.0}, {0, 0, 0}, {0, 0, length / 2.0}};
    t.parents = {-1, 0, 1};
    t.vertices = rig.mesh.vertices;
    t.to_star = identity_transforms(3);
    t.skin_weights.reserve(t.vertices.size());
    for (const Vec3& v : t.vertices) {
        SkinWeights w;
        if (v.z <= -blend_halfwidth)
            w = {{1, 1.0}};
        else if (v.z >= blend_halfwidth)
            w = {{2, 1.0}};
        else {
            const double upper = (v.z + blend_halfwidth) / (2.0 * blend_halfwidth);
            w = {{1, 1.0 - upper}, {2, upper}};
        }
        t.skin_weights.push_back(std::move(w));
    }
    return rig;
}

// ------------------------------------------------------------------ humanoid

namespace {

struct Capsule {
    Vec3 a, b;
    double r;
};
struct Blob {
    Vec3 c, radii;
};

double sd_capsule(const Vec3& q, const Capsule& c) {
    const Vec3 pa = q - c.a, ba = c.b - c.a;
    const double h = std::clamp(pa.dot(ba) / ba.squared_norm(), 0.0, 1.0);
    return (pa - ba * h).norm() - c.r;
}

// Scaled-sphere field: zero set is the exact ellipsoid, values off-surface
// are compressed by the smallest radius (good enough for surfacing).
double sd_blob(const Vec3& q, const Blob& b) {
    const Vec3 p{(q.x - b.c.x) / b.radii.x, (q.y - b.c.y) / b.radii.y,
                 (q.z - b.c.z) / b.radii.z};
    return (p.norm() - 1.0) * std::min({b.radii.x, b.radii.y, b.radii.z});
}

struct HumanoidBody {
    std::vector<Capsule> capsules;
    std::vector<Blob> blobs;
    std::vector<Vec3> joints;
    std::vector<int32_t> parents;

    double sdf(const Vec3& q) const {
        double d = std::numeric_limits<double>::max();
        for (const auto& c : capsules) d = std::min(d, sd_capsule(q, c));
        for (const auto& b : blobs) d = std::min(d, sd_blob(q, b));
        return d;
    }
};

// T-pose, y up, feet pointing +z, ground plane near y = 0.
HumanoidBody humanoid_body() {
    HumanoidBody body;
    body.joints = {
        {0, 0.95, 0},       // 0 pelvis (root)
        {0, 1.20, 0},       // 1 spine
        {0, 1.45, 0},       // 2 chest
        {0, 1.72, 0},       // 3 head top
        {-0.14, 1.40, 0},   // 4 l shoulder
        {-0.55, 1.40, 0},   // 5 l elbow
        {-0.93, 1.40, 0},   // 6 l wrist
        {0.14, 1.40, 0},    // 7 r shoulder
        {0.55, 1.40, 0},    // 8 r elbow
        {0.93, 1.40, 0},    // 9 r wrist
        {-0.09, 0.90, 0},   // 10 l hip
        {-0.09, 0.50, 0},   // 11 l knee
        {-0.09, 0.10, 0},   // 12 l ankle
        {-0.09, 0.06, 0.24},  // 13 l toe
        {0.09, 0.90, 0},    // 14 r hip
        {0.09, 0.50, 0},    // 15 r knee
        {0.09, 0.10, 0},    // 16 r ankle
        {0.09, 0.06, 0.24},   // 17 r toe
    };
    body.parents = {-1, 0, 1, 2, 2, 4, 5, 2, 7, 8, 0, 10, 11, 12, 0, 14, 15, 16};

    body.capsules.push_back({{0, 0.95, 0}, {0, 1.38, 0}, 0.085});      // torso
    body.capsules.push_back({{-0.14, 1.40, 0}, {0.14, 1.40, 0}, 0.055});  // clavicle
    body.capsules.push_back({{-0.06, 0.92, 0}, {0.06, 0.92, 0}, 0.085});  // pelvis
    body.capsules.push_back({{0, 1.42, 0}, {0, 1.52, 0}, 0.038});      // neck
    body.blobs.push_back({{0, 1.62, 0}, {0.075, 0.095, 0.08}});        // head
    for (const double s : {-1.0, 1.0}) {
        body.capsules.push_back({{s * 0.14, 1.40, 0}, {s * 0.93, 1.40, 0}, 0.032});  // arm
        body.capsules.push_back({{s * 0.09, 0.92, 0}, {s * 0.09, 0.10, 0}, 0.044});  // leg
        body.capsules.push_back({{s * 0.09, 0.055, 0.02}, {s * 0.09, 0.055, 0.22}, 0.042});  // foot
    }
    return body;
}

}  // namespace

RiggedMesh make_humanoid(double surface_resolution) {
    if (!(surface_resolution > 0.0))
        throw InputError("make_humanoid: resolution must be positive");
    const HumanoidBody body = humanoid_body();

    Aabb box;
    for (const auto& c : body.capsules) {
        box.expand(c.a + Vec3{c.r, c.r, c.r});
        box.expand(c.a - Vec3{c.r, c.r, c.r});
        box.expand(c.b + Vec3{c.r, c.r, c.r});
        box.expand(c.b - Vec3{c.r, c.r, c.r});
    }
    for (const auto& b : body.blobs) {
        box.expand(b.c + b.radii);
        box.expand(b.c - b.radii);
    }
    const double margin = 2.0 * surface_resolution;
    box.lo -= Vec3{margin, margin, margin};
    box.hi += Vec3{margin, margin, margin};

    const TetraGrid grid = tetrahedralize_box(box, surface_resolution);
    TsdfField field;
    field.tau = 4.0 * surface_resolution;
    field.values.resize(grid.summits.size());
    for (std::size_t i = 0; i < grid.summits.size(); ++i)
        field.values[i] = std::clamp(body.sdf(grid.summits[i]) / field.tau, -1.0, 1.0);

    RiggedMesh rig;
    rig.mesh = extract_isosurface(grid, field);

    SkinnedTemplate& t = rig.tmpl;
    t.joints = body.joints;
    t.parents = body.parents;
    t.vertices = rig.mesh.vertices;
    t.to_star = identity_transforms(t.joints.size());
    t.skin_weights.reserve(t.vertices.size());
    for (const Vec3& v : t.vertices) {
        // Hard weight on the nearest bone segment (root has none).
        uint16_t best = 1;
        double best_d = std::numeric_limits<double>::max();
        for (std::size_t b = 1; b < body.joints.size(); ++b) {
            const Capsule seg{body.joints[body.parents[b]], body.joints[b], 0.0};
            const double d = sd_capsule(v, seg);
            if (d < best_d) {
                best_d = d;
                best = (uint16_t)b;
            }
        }
        t.skin_weights.push_back({{best, 1.0}});
    }
    return rig;
}

}  // namespace tetshell

// SPDX-License-Identifier: Apache-2.0

#include "tetshell/tetra_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "tetshell/binary_io.hpp"
#include "tetshell/closest_point.hpp"
#include "tetshell/error.hpp"
#include "tetshell/kdtree.hpp"
#include "tetshell/parallel.hpp"

namespace tetshell {

Aabb TetraGrid::bounds() const {
    Aabb box;
    for (const Vec3& p : summits) box.expand(p);
    return box;
}

double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return (b - a).cross(c - a).dot(d - a) / 6.0;
}

double mean_edge_length(const TetraGrid& grid) {
    // Unique edges over all tetrahedra.
    std::unordered_set<uint64_t> edges;
    double sum = 0.0;
    static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (const auto& t : grid.tets) {
        for (const auto& p : pairs) {
            uint32_t a = t[p[0]], b = t[p[1]];
            if (a > b) std::swap(a, b);
            const uint64_t key = (uint64_t(a) << 32) | b;
            if (edges.insert(key).second)
                sum += (grid.summits[a] - grid.summits[b]).norm();
        }
    }
    return edges.empty() ? 0.0 : sum / double(edges.size());
}

namespace {

// BCC lattice bookkeeping: corner nodes on the integer lattice, center nodes
// at cell midpoints. Node ids index corners first, then centers.
struct BccLattice {
    Vec3 origin;
    double h = 0.0;
    int nx = 0, ny = 0, nz = 0;  // cell counts
    size_t corner_count() const { return size_t(nx + 1) * (ny + 1) * (nz + 1); }
    size_t center_count() const { return size_t(nx) * ny * nz; }
    size_t node_count() const { return corner_count() + center_count(); }

    size_t corner_id(int i, int j, int k) const {
        return (size_t(k) * (ny + 1) + j) * (nx + 1) + i;
    }
    size_t center_id(int i, int j, int k) const {
        return corner_count() + (size_t(k) * ny + j) * nx + i;
    }
    Vec3 node_pos(size_t id) const {
        if (id < corner_count()) {
            const size_t i = id % (nx + 1);
            const size_t j = (id / (nx + 1)) % (ny + 1);
            const size_t k = id / (size_t(nx + 1) * (ny + 1));
            return origin + Vec3(double(i), double(j), double(k)) * h;
        }
        const size_t c = id - corner_count();
        const size_t i = c % nx;
        const size_t j = (c / nx) % ny;
        const size_t k = c / (size_t(nx) * ny);
        return origin + Vec3(double(i) + 0.5, double(j) + 0.5, double(k) + 0.5) * h;
    }
};

BccLattice lattice_for_box(const Aabb& box, double h) {
    BccLattice lat;
    lat.h = h;
    // One-cell margin so the outermost kept ring is always bracketed.
    lat.origin = box.lo - Vec3(h, h, h);
    const Vec3 ext = box.extent() + Vec3(2 * h, 2 * h, 2 * h);
    lat.nx = std::max(1, int(std::ceil(ext.x / h)));
    lat.ny = std::max(1, int(std::ceil(ext.y / h)));
    lat.nz = std::max(1, int(std::ceil(ext.z / h)));
    return lat;
}

// Emits the four tetrahedra that straddle one interior lattice face, in a
// fixed enumeration order: axis-by-axis, then k, j, i, then the four face
// edges in cyclic order. Each tet joins the two cell centers across the face
// with one edge of the shared face.
template <typename Emit>
void enumerate_bcc_tets(const BccLattice& lat, Emit&& emit) {
    for (int axis = 0; axis < 3; ++axis) {
        const int ni = axis == 0 ? lat.nx - 1 : (axis == 1 ? lat.nx : lat.nx);
        const int nj = axis == 1 ? lat.ny - 1 : lat.ny;
        const int nk = axis == 2 ? lat.nz - 1 : lat.nz;
        for (int k = 0; k < nk; ++k)
            for (int j = 0; j < nj; ++j)
                for (int i = 0; i < ni; ++i) {
                    size_t ca, cb;
                    size_t e[4];
                    if (axis == 0) {
                        ca = lat.center_id(i, j, k);
                        cb = lat.center_id(i + 1, j, k);
                        e[0] = lat.corner_id(i + 1, j, k);
                        e[1] = lat.corner_id(i + 1, j + 1, k);
                        e[2] = lat.corner_id(i + 1, j + 1, k + 1);
                        e[3] = lat.corner_id(i + 1, j, k + 1);
                    } else if (axis == 1) {
                        ca = lat.center_id(i, j, k);
                        cb = lat.center_id(i, j + 1, k);
                        e[0] = lat.corner_id(i, j + 1, k);
                        e[1] = lat.corner_id(i + 1, j + 1, k);
                        e[2] = lat.corner_id(i + 1, j + 1, k + 1);
                        e[3] = lat.corner_id(i, j + 1, k + 1);
                    } else {
                        ca = lat.center_id(i, j, k);
                        cb = lat.center_id(i, j, k + 1);
                        e[0] = lat.corner_id(i, j, k + 1);
                        e[1] = lat.corner_id(i + 1, j, k + 1);
                        e[2] = lat.corner_id(i + 1, j + 1, k + 1);
                        e[3] = lat.corner_id(i, j + 1, k + 1);
                    }
                    for (int s = 0; s < 4; ++s)
                        emit(ca, cb, e[s], e[(s + 1) & 3]);
                }
    }
}

TetraGrid assemble_grid(const BccLattice& lat, const std::vector<uint8_t>* inside,
                        double resolution) {
    TetraGrid grid;
    grid.resolution = resolution;
    std::vector<uint32_t> compact(lat.node_count(), UINT32_MAX);
    auto map_node = [&](size_t node) {
        if (compact[node] == UINT32_MAX) {
            compact[node] = uint32_t(grid.summits.size());
            grid.summits.push_back(lat.node_pos(node));
        }
        return compact[node];
    };
    enumerate_bcc_tets(lat, [&](size_t a, size_t b, size_t c, size_t d) {
        if (inside && !((*inside)[a] || (*inside)[b] || (*inside)[c] || (*inside)[d])) return;
        std::array<uint32_t, 4> tet = {map_node(a), map_node(b), map_node(c), map_node(d)};
        const double vol = tet_signed_volume(grid.summits[tet[0]], grid.summits[tet[1]],
                                             grid.summits[tet[2]], grid.summits[tet[3]]);
        if (vol < 0.0) std::swap(tet[2], tet[3]);
        grid.tets.push_back(tet);
    });
    return grid;
}

}  // namespace

TetraGrid tetrahedralize_box(const Aabb& box, double resolution) {
    if (resolution <= 0.0) throw InputError("grid resolution must be > 0");
    if (box.empty()) throw InputError("cannot build a grid over an empty box");
    const BccLattice lat = lattice_for_box(box, resolution);
    return assemble_grid(lat, nullptr, resolution);
}

TetraGrid tetrahedralize(const TriMesh& shell, double resolution) {
    if (resolution <= 0.0) throw InputError("grid resolution must be > 0");
    TriMesh closed = shell;
    if (!closed.has_normals()) compute_vertex_normals(closed);
    const ClosestPointIndex index(closed);

    const BccLattice lat = lattice_for_box(closed.bounds(), resolution);
    const size_t n_nodes = lat.node_count();

    std::vector<uint8_t> inside(n_nodes, 0);
    parallel_for_chunks(n_nodes, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i)
            inside[i] = index.is_inside(lat.node_pos(i)) ? 1 : 0;
    });

    // Parity audit on a strided node sample; heavy disagreement means the
    // shell is open or inverted.
    const size_t samples = std::min<size_t>(500, n_nodes);
    const size_t stride = std::max<size_t>(1, n_nodes / samples);
    size_t audited = 0, mismatched = 0;
    for (size_t i = 0; i < n_nodes; i += stride) {
        const bool parity = index.is_inside_parity(lat.node_pos(i));
        ++audited;
        if (parity != (inside[i] != 0)) ++mismatched;
    }
    if (audited > 0 && double(mismatched) / double(audited) > 0.01)
        throw InputError("shell is not closed: sign test and ray parity disagree on " +
                         std::to_string(mismatched) + "/" + std::to_string(audited) +
                         " sampled nodes");

    TetraGrid grid = assemble_grid(lat, &inside, resolution);
    if (grid.tets.size() < 10)
        throw InputError("degenerate grid: resolution " + std::to_string(resolution) +
                         " leaves only " + std::to_string(grid.tets.size()) + " tetrahedra");
    return grid;
}

void assign_part_labels(TetraGrid& grid, const SkinnedTemplate& tmpl) {
    if (tmpl.vertices.empty()) throw InputError("assign_part_labels: template has no vertices");
    const KdTree tree(tmpl.vertices);
    grid.part_labels.assign(grid.summits.size(), 0);
    parallel_for_chunks(grid.summits.size(), [&](size_t begin, size_t end) {
        for (size_t s = begin; s < end; ++s)
            grid.part_labels[s] = tmpl.dominant_bone(tree.nearest(grid.summits[s]));
    });
}

void save_tgrd(const TetraGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write grid file: " + path);
    out.write("TGRD", 4);
    write_u32(out, 1);
    write_u32(out, uint32_t(grid.summits.size()));
    write_u32(out, uint32_t(grid.tets.size()));
    uint32_t part_count = 0;
    if (grid.has_labels())
        part_count = 1 + uint32_t(*std::max_element(grid.part_labels.begin(),
                                                    grid.part_labels.end()));
    write_u32(out, part_count);
    for (const Vec3& p : grid.summits) {
        write_f32(out, float(p.x));
        write_f32(out, float(p.y));
        write_f32(out, float(p.z));
    }
    for (const auto& t : grid.tets)
        for (uint32_t idx : t) write_u32(out, idx);
    for (size_t s = 0; s < grid.summits.size(); ++s)
        write_u16(out, grid.has_labels() ? grid.part_labels[s] : uint16_t(0));
    write_f32(out, float(grid.resolution));
    if (!out) throw Error("short write: " + path);
}

TetraGrid load_tgrd(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open grid file: " + path);
    expect_magic(in, "TGRD", path);
    const uint32_t version = read_u32(in, path);
    if (version != 1) throw InputError(path + ": unsupported TGRD version");
    const uint32_t s = read_u32(in, path);
    const uint32_t t = read_u32(in, path);
    const uint32_t parts = read_u32(in, path);
    TetraGrid grid;
    grid.summits.resize(s);
    for (auto& p : grid.summits) {
        p.x = read_f32(in, path);
        p.y = read_f32(in, path);
        p.z = read_f32(in, path);
    }
    grid.tets.resize(t);
    for (auto& tet : grid.tets)
        for (auto& idx : tet) {
            idx = read_u32(in, path);
            if (idx >= s) throw InputError(path + ": tetra index out of range");
        }
    std::vector<uint16_t> labels(s);
    for (auto& l : labels) l = read_u16(in, path);
    if (parts > 0) grid.part_labels = std::move(labels);
    grid.resolution = read_f32(in, path);
    return grid;
}

}  // namespace tetshell

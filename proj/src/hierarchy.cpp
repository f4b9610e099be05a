// SPDX-License-Identifier: Apache-2.0

#include "tetshell/hierarchy.hpp"

#include <fstream>
#include <limits>
#include <numeric>

#include "tetshell/binary_io.hpp"
#include "tetshell/error.hpp"

namespace tetshell {

// FPS over the points named by `prev`, keeping `m` of them. Classic min-dist
// array scheme, O(|prev| * m). Scanning candidates in ascending position with
// a strict > comparison resolves distance ties toward the earlier entry.
static std::vector<uint32_t> fps_subset(const std::vector<Vec3>& pts,
                                        const std::vector<uint32_t>& prev, uint32_t m) {
    const std::size_t n = prev.size();
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::vector<char> taken(n, 0);
    std::vector<uint32_t> out;
    out.reserve(m);

    std::size_t cur = 0;
    taken[cur] = 1;
    out.push_back(prev[cur]);
    while (out.size() < m) {
        const Vec3 p = pts[prev[cur]];
        std::size_t best = n;
        double best_d2 = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dd = (pts[prev[i]] - p).squared_norm();
            if (dd < d2[i]) d2[i] = dd;
            if (!taken[i] && d2[i] > best_d2) {
                best_d2 = d2[i];
                best = i;
            }
        }
        cur = best;
        taken[cur] = 1;
        out.push_back(prev[cur]);
    }
    return out;
}

SummitHierarchy build_hierarchy(const TetraGrid& grid, const std::vector<uint32_t>& level_sizes) {
    if (grid.summits.empty()) throw InputError("build_hierarchy: empty grid");
    if (level_sizes.empty()) throw InputError("build_hierarchy: no level sizes");
    if (level_sizes[0] != grid.summits.size())
        throw InputError("build_hierarchy: first level size must equal the summit count");
    for (std::size_t l = 1; l < level_sizes.size(); ++l)
        if (level_sizes[l] >= level_sizes[l - 1] || level_sizes[l] == 0)
            throw InputError("build_hierarchy: level sizes must strictly decrease and stay positive");

    SummitHierarchy h;
    h.levels.resize(level_sizes.size());
    h.levels[0].resize(grid.summits.size());
    std::iota(h.levels[0].begin(), h.levels[0].end(), 0u);
    for (std::size_t l = 1; l < level_sizes.size(); ++l)
        h.levels[l] = fps_subset(grid.summits, h.levels[l - 1], level_sizes[l]);

    if (grid.has_labels()) {
        h.labels.resize(h.levels.size());
        for (std::size_t l = 0; l < h.levels.size(); ++l) {
            h.labels[l].reserve(h.levels[l].size());
            for (uint32_t id : h.levels[l]) h.labels[l].push_back(grid.part_labels[id]);
        }
    }
    return h;
}

void save_thie(const SummitHierarchy& h, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out.write("THIE", 4);
    write_u32(out, 1);  // version
    write_u32(out, (uint32_t)h.levels.size());
    for (const auto& level : h.levels) {
        write_u32(out, (uint32_t)level.size());
        for (uint32_t id : level) write_u32(out, id);
    }
    if (!out) throw Error("write failed: " + path);
}

SummitHierarchy load_thie(const std::string& path, const TetraGrid* grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    expect_magic(in, "THIE", path);
    const uint32_t version = read_u32(in, path);
    if (version != 1) throw InputError(path + ": unsupported version");
    const uint32_t nlevels = read_u32(in, path);
    if (nlevels == 0) throw InputError(path + ": no levels");

    SummitHierarchy h;
    h.levels.resize(nlevels);
    for (uint32_t l = 0; l < nlevels; ++l) {
        const uint32_t size = read_u32(in, path);
        if (l > 0 && size >= h.levels[l - 1].size())
            throw InputError(path + ": level sizes must strictly decrease");
        h.levels[l].resize(size);
        for (uint32_t i = 0; i < size; ++i) h.levels[l][i] = read_u32(in, path);
    }

    const uint32_t n0 = (uint32_t)h.levels[0].size();
    for (const auto& level : h.levels)
        for (uint32_t id : level)
            if (id >= n0) throw InputError(path + ": summit index out of range");

    if (grid) {
        if (grid->summits.size() != n0)
            throw InputError(path + ": hierarchy does not match grid summit count");
        if (grid->has_labels()) {
            h.labels.resize(h.levels.size());
            for (std::size_t l = 0; l < h.levels.size(); ++l) {
                h.labels[l].reserve(h.levels[l].size());
                for (uint32_t id : h.levels[l]) h.labels[l].push_back(grid->part_labels[id]);
            }
        }
    }
    return h;
}

}  // namespace tetshell

// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_HIERARCHY_HPP
#define TETSHELL_HIERARCHY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tetshell/tetra_grid.hpp"

namespace tetshell {

// Nested summit subsets for the coarse-to-fine decoder. Every level stores
// level-0 summit ids, so positions are exact copies of grid summits; level 0
// is the identity permutation. Indices appear in selection order, which makes
// the first entry of every level summit 0.
struct SummitHierarchy {
    std::vector<std::vector<uint32_t>> levels;
    std::vector<std::vector<uint16_t>> labels;  // per level, parallel to levels; empty if grid unlabeled

    std::size_t level_count() const { return levels.size(); }
    bool has_labels() const { return !labels.empty(); }
};

// Farthest-point sampling per level, each level drawn from the previous one.
// Deterministic: starts at the previous level's first entry, distance ties go
// to the earlier candidate. level_sizes must start at the grid's summit count
// and strictly decrease.
SummitHierarchy build_hierarchy(const TetraGrid& grid, const std::vector<uint32_t>& level_sizes);

// "THIE" container. Labels are not stored; pass the grid on load to restore
// them (and to validate index ranges against the summit count).
void save_thie(const SummitHierarchy& h, const std::string& path);
SummitHierarchy load_thie(const std::string& path, const TetraGrid* grid = nullptr);

}  // namespace tetshell

#endif

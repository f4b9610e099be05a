// SPDX-License-Identifier: Apache-2.0

#ifndef TETSHELL_KDTREE_HPP
#define TETSHELL_KDTREE_HPP

#include <cstdint>
#include <vector>

#include "tetshell/vec3.hpp"

namespace tetshell {

// k-d tree over a point set for nearest and k-nearest queries. Ties are
// broken by lowest point index, so results match a brute-force scan exactly.
class KdTree {
public:
    KdTree() = default;
    explicit KdTree(std::vector<Vec3> points);

    size_t size() const { return points_.size(); }
    const std::vector<Vec3>& points() const { return points_; }

    // Index of the nearest point. Requires a non-empty tree.
    uint32_t nearest(const Vec3& q) const;

    // The min(k, size) nearest point indices ordered by (distance², index).
    std::vector<uint32_t> knn(const Vec3& q, size_t k) const;

private:
    struct Node {
        Aabb box;
        uint32_t start = 0, count = 0;  // leaf range into order_; count 0 = inner
        uint32_t right = 0;
    };

    uint32_t build(uint32_t begin, uint32_t end);

    std::vector<Vec3> points_;
    std::vector<uint32_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace tetshell

#endif

// SPDX-License-Identifier: Apache-2.0

#include "tetshell/kdtree.hpp"

#include <algorithm>
#include <limits>

#include "tetshell/error.hpp"

namespace tetshell {

KdTree::KdTree(std::vector<Vec3> points) : points_(std::move(points)) {
    const uint32_t n = uint32_t(points_.size());
    order_.resize(n);
    for (uint32_t i = 0; i < n; ++i) order_[i] = i;
    if (n > 0) {
        nodes_.reserve(size_t(2) * n);
        build(0, n);
    }
}

uint32_t KdTree::build(uint32_t begin, uint32_t end) {
    const uint32_t id = uint32_t(nodes_.size());
    nodes_.push_back({});
    Aabb box;
    for (uint32_t i = begin; i < end; ++i) box.expand(points_[order_[i]]);
    nodes_[id].box = box;
    constexpr uint32_t kLeafSize = 8;
    if (end - begin <= kLeafSize) {
        nodes_[id].start = begin;
        nodes_[id].count = end - begin;
        return id;
    }
    const Vec3 ext = box.extent();
    int axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > ext[axis]) axis = 2;
    const uint32_t mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](uint32_t a, uint32_t b) {
                         const double pa = points_[a][axis], pb = points_[b][axis];
                         return pa < pb || (pa == pb && a < b);
                     });
    build(begin, mid);
    nodes_[id].right = build(mid, end);
    nodes_[id].count = 0;
    return id;
}

uint32_t KdTree::nearest(const Vec3& q) const {
    if (points_.empty()) throw InputError("nearest query on empty point set");
    double best_d2 = std::numeric_limits<double>::max();
    uint32_t best = 0;
    uint32_t stack[96];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const uint32_t id = stack[--top];
        const Node& node = nodes_[id];
        if (node.box.squared_distance(q) > best_d2) continue;
        if (node.count > 0) {
            for (uint32_t i = 0; i < node.count; ++i) {
                const uint32_t p = order_[node.start + i];
                const double d2 = (points_[p] - q).squared_norm();
                if (d2 < best_d2 || (d2 == best_d2 && p < best)) {
                    best_d2 = d2;
                    best = p;
                }
            }
            continue;
        }
        const uint32_t l = id + 1, r = node.right;
        const double dl = nodes_[l].box.squared_distance(q);
        const double dr = nodes_[r].box.squared_distance(q);
        if (dl <= dr) {
            if (dr <= best_d2) stack[top++] = r;
            if (dl <= best_d2) stack[top++] = l;
        } else {
            if (dl <= best_d2) stack[top++] = l;
            if (dr <= best_d2) stack[top++] = r;
        }
    }
    return best;
}

std::vector<uint32_t> KdTree::knn(const Vec3& q, size_t k) const {
    if (points_.empty() || k == 0) return {};
    k = std::min(k, points_.size());

    // Max-heap on (d², index); a candidate enters iff lexicographically
    // smaller than the current worst.
    struct Entry {
        double d2;
        uint32_t idx;
        bool operator<(const Entry& o) const {
            return d2 < o.d2 || (d2 == o.d2 && idx < o.idx);
        }
    };
    std::vector<Entry> heap;
    heap.reserve(k);
    auto worst = [&]() { return heap.front(); };

    uint32_t stack[96];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const uint32_t id = stack[--top];
        const Node& node = nodes_[id];
        const double lb = node.box.squared_distance(q);
        if (heap.size() == k && lb > worst().d2) continue;
        if (node.count > 0) {
            for (uint32_t i = 0; i < node.count; ++i) {
                const uint32_t p = order_[node.start + i];
                const Entry e{(points_[p] - q).squared_norm(), p};
                if (heap.size() < k) {
                    heap.push_back(e);
                    std::push_heap(heap.begin(), heap.end());
                } else if (e < worst()) {
                    std::pop_heap(heap.begin(), heap.end());
                    heap.back() = e;
                    std::push_heap(heap.begin(), heap.end());
                }
            }
            continue;
        }
        const uint32_t l = id + 1, r = node.right;
        const double dl = nodes_[l].box.squared_distance(q);
        const double dr = nodes_[r].box.squared_distance(q);
        if (dl <= dr) {
            stack[top++] = r;
            stack[top++] = l;
        } else {
            stack[top++] = l;
            stack[top++] = r;
        }
    }
    std::sort_heap(heap.begin(), heap.end());
    std::vector<uint32_t> out(heap.size());
    for (size_t i = 0; i < heap.size(); ++i) out[i] = heap[i].idx;
    return out;
}

}  // namespace tetshell

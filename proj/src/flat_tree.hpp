#pragma once

#include "j2k/ast.hpp"

#include <cstdint>
#include <vector>

namespace j2k::detail {

/// Index-addressed view of an AstNode tree. Ids are pre-order, so node i's
/// descendants are exactly the ids in (i, i + size[i]).
struct FlatTree {
    std::vector<const AstNode*> node;
    std::vector<int> parent;
    std::vector<std::vector<int>> children;
    std::vector<int> size;
    std::vector<int> height;
    std::vector<int> depth;
    std::vector<std::uint64_t> hash;
    std::vector<int> post_order;

    explicit FlatTree(const AstNode& root);

    int count() const { return static_cast<int>(node.size()); }
    bool is_descendant(int d, int of) const { return d > of && d < of + size[of]; }
    bool same_label(int a, const FlatTree& other, int b) const {
        return node[a]->kind == other.node[b]->kind;
    }
};

/// Same kind, value and ordered children, recursively.
bool isomorphic(const FlatTree& a, int x, const FlatTree& b, int y);

}  // namespace j2k::detail

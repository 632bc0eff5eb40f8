#pragma once

#include "j2k/ast.hpp"

#include <random>

namespace j2k::testing {

/// Random unified tree rooted at a CompilationUnit. Node kinds mix context
/// kinds (Class, Method, If) with leaves and grammar-specific Other kinds.
AstNode random_tree(std::mt19937& rng, int depth);

/// Applies `k` random edits (relabel, insert subtree, delete subtree, move
/// subtree, swap siblings) to a copy of `tree`. `touched` receives the
/// total size of subtrees inserted, deleted or moved.
AstNode mutate_tree(std::mt19937& rng, const AstNode& tree, int k, std::size_t& touched);

}  // namespace j2k::testing

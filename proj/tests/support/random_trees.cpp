#include "random_trees.hpp"

#include <algorithm>
#include <vector>

namespace j2k::testing {

namespace {

using Tag = UnifiedKind::Tag;

UnifiedKind random_kind(std::mt19937& rng) {
    static const UnifiedKind kinds[] = {
        Tag::Class,      Tag::Method, Tag::If,    Tag::Block,   Tag::Invocation,          Tag::Identifier,
        Tag::Literal,    Tag::Return, Tag::LocalVariable,       UnifiedKind::other("argument_list"),
        UnifiedKind::other("binary_expression"),
    };
    return kinds[rng() % std::size(kinds)];
}

AstNode random_node(std::mt19937& rng, int depth) {
    AstNode n;
    n.kind = random_kind(rng);
    n.grammar_type = n.kind.name();
    if (rng() % 2) n.value = "v" + std::to_string(rng() % 4);
    if (depth > 0) {
        const int k = static_cast<int>(rng() % 4);
        for (int i = 0; i < k; ++i) n.children.push_back(random_node(rng, depth - 1));
    }
    return n;
}

void collect(AstNode& n, std::vector<AstNode*>& out) {
    out.push_back(&n);
    for (auto& c : n.children) collect(c, out);
}

bool contains(const AstNode& root, const AstNode* target) {
    if (&root == target) return true;
    for (const auto& c : root.children) {
        if (contains(c, target)) return true;
    }
    return false;
}

// Parent of `target` within `root`, or nullptr for the root itself.
AstNode* parent_of(AstNode& root, const AstNode* target) {
    for (auto& c : root.children) {
        if (&c == target) return &root;
        if (auto* p = parent_of(c, target)) return p;
    }
    return nullptr;
}

AstNode* by_id(AstNode& root, int id) {
    if (root.id == id) return &root;
    for (auto& c : root.children) {
        if (auto* hit = by_id(c, id)) return hit;
    }
    return nullptr;
}

}  // namespace

AstNode random_tree(std::mt19937& rng, int depth) {
    AstNode root;
    root.kind = Tag::CompilationUnit;
    root.grammar_type = "compilation_unit";
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) root.children.push_back(random_node(rng, depth - 1));
    assign_preorder_ids(root);
    return root;
}

AstNode mutate_tree(std::mt19937& rng, const AstNode& tree, int k, std::size_t& touched) {
    AstNode out = tree;
    for (int step = 0; step < k; ++step) {
        assign_preorder_ids(out);
        std::vector<AstNode*> nodes;
        collect(out, nodes);
        AstNode* n = nodes[rng() % nodes.size()];
        switch (rng() % 5) {
            case 0:  // relabel
                n->value = "w" + std::to_string(rng() % 5);
                break;
            case 1: {  // insert a fresh subtree
                AstNode fresh = random_node(rng, 2);
                touched += subtree_size(fresh);
                const auto at = rng() % (n->children.size() + 1);
                n->children.insert(n->children.begin() + static_cast<long>(at), std::move(fresh));
                break;
            }
            case 2:  // delete a subtree
                if (!n->children.empty()) {
                    const auto at = rng() % n->children.size();
                    touched += subtree_size(n->children[at]);
                    n->children.erase(n->children.begin() + static_cast<long>(at));
                }
                break;
            case 3: {  // move a non-root subtree under a node outside it
                if (n == &out) break;
                std::vector<int> targets;
                for (auto* t : nodes) {
                    if (!contains(*n, t)) targets.push_back(t->id);
                }
                const int dest_id = targets[rng() % targets.size()];
                AstNode moved = *n;
                touched += subtree_size(moved);
                AstNode* parent = parent_of(out, n);
                parent->children.erase(parent->children.begin() + (n - parent->children.data()));
                AstNode* dest = by_id(out, dest_id);
                const auto at = rng() % (dest->children.size() + 1);
                dest->children.insert(dest->children.begin() + static_cast<long>(at), std::move(moved));
                break;
            }
            case 4:  // swap two siblings
                if (n->children.size() >= 2) {
                    const auto a = rng() % n->children.size();
                    const auto b = rng() % n->children.size();
                    if (a != b) touched += subtree_size(n->children[a]) + subtree_size(n->children[b]);
                    std::swap(n->children[a], n->children[b]);
                }
                break;
        }
    }
    assign_preorder_ids(out);
    return out;
}

}  // namespace j2k::testing

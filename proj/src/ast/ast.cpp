#include "j2k/ast.hpp"

#include "j2k/error.hpp"
#include "parsers.hpp"

#include <algorithm>
#include <stdexcept>

namespace j2k {
namespace {

void assign_kinds_and_ids(AstNode& node, const KindMap& map, int& next_id) {
    node.id = next_id++;
    node.kind = map.lookup(node.grammar_type);
    for (auto& child : node.children) assign_kinds_and_ids(child, map, next_id);
}

void dump(std::ostream& out, const AstNode& node, int depth) {
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << node.kind.name() << " [" << node.grammar_type
        << "]";
    if (node.value) out << " \"" << *node.value << '"';
    out << " @" << node.span.begin << ".." << node.span.end << '\n';
    for (const auto& c : node.children) dump(out, c, depth + 1);
}

// Path of nodes from root to the node with `id` (inclusive); empty if absent.
// Pre-order ids let each step pick the last child whose id is <= target.
std::vector<const AstNode*> path_to(const AstNode& root, int id) {
    std::vector<const AstNode*> path;
    const AstNode* cur = &root;
    while (true) {
        path.push_back(cur);
        if (cur->id == id) return path;
        const auto it = std::upper_bound(cur->children.begin(), cur->children.end(), id,
                                         [](int target, const AstNode& c) { return target < c.id; });
        if (it == cur->children.begin()) return {};
        cur = &*std::prev(it);
        if (cur->id > id) return {};
    }
}

}  // namespace

AstNode parse(std::string_view content, Language language, const KindMaps& maps) {
    if (content.find('\0') != std::string_view::npos) {
        throw Error(ErrorCode::UndecodableContent, "content contains NUL bytes");
    }
    AstNode root;
    const KindMap* map = nullptr;
    switch (language) {
        case Language::Java:
            root = detail::parse_java(content);
            map = maps.java;
            break;
        case Language::Kotlin:
            root = detail::parse_kotlin(content);
            map = maps.kotlin;
            break;
        case Language::Other:
            throw std::invalid_argument("parse() needs Java or Kotlin");
    }
    int next_id = 0;
    assign_kinds_and_ids(root, *map, next_id);
    return root;
}

const AstNode* find_node(const AstNode& root, int node_id) {
    const auto path = path_to(root, node_id);
    return path.empty() ? nullptr : path.back();
}

bool is_context_kind(const UnifiedKind& kind) {
    using Tag = UnifiedKind::Tag;
    return kind.is(Tag::CompilationUnit) || kind.is(Tag::Class) || kind.is(Tag::Method) || kind.is(Tag::If);
}

UnifiedKind enclosing_kind(const AstNode& root, int node_id) {
    const auto path = path_to(root, node_id);
    if (path.empty()) throw Error(ErrorCode::UnknownNode, "no node with id " + std::to_string(node_id));
    for (auto it = path.rbegin() + 1; it != path.rend(); ++it) {
        if (is_context_kind((*it)->kind)) return (*it)->kind;
    }
    return UnifiedKind::Tag::CompilationUnit;
}

std::size_t subtree_size(const AstNode& node) {
    std::size_t n = 1;
    for (const auto& c : node.children) n += subtree_size(c);
    return n;
}

void assign_preorder_ids(AstNode& root) {
    int next_id = 0;
    std::vector<AstNode*> stack{&root};
    while (!stack.empty()) {
        AstNode* n = stack.back();
        stack.pop_back();
        n->id = next_id++;
        for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
    }
}

void dump_tree(std::ostream& out, const AstNode& root) {
    dump(out, root, 0);
}

}  // namespace j2k

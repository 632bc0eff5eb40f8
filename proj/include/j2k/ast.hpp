#pragma once

#include "j2k/language.hpp"

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace j2k {

/// Language-neutral node vocabulary shared by the Java and Kotlin front ends.
class UnifiedKind {
public:
    enum class Tag {
        CompilationUnit,
        Class,
        Method,
        Property,
        LocalVariable,
        Invocation,
        If,
        Assignment,
        Return,
        Block,
        Parameter,
        Literal,
        Identifier,
        Other,
    };

    UnifiedKind() = default;
    UnifiedKind(Tag tag) : tag_(tag) {}  // NOLINT: implicit by intent
    static UnifiedKind other(std::string grammar_name) {
        UnifiedKind k(Tag::Other);
        k.other_name_ = std::move(grammar_name);
        return k;
    }

    Tag tag() const { return tag_; }
    bool is(Tag t) const { return tag_ == t; }
    const std::string& other_name() const { return other_name_; }

    /// Stable identifier: "Method", "LocalVariable", or "Other:<grammar name>".
    std::string name() const;
    /// Human label used in pattern items: "Local Variable", "Property Declaration", ...
    std::string label() const;
    /// Inverse of name(). Throws std::invalid_argument for unknown names.
    static UnifiedKind parse(std::string_view name);

    friend bool operator==(const UnifiedKind&, const UnifiedKind&) = default;
    friend std::strong_ordering operator<=>(const UnifiedKind&, const UnifiedKind&) = default;

private:
    Tag tag_ = Tag::Other;
    std::string other_name_;
};

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    friend bool operator==(const Span&, const Span&) = default;
};

struct AstNode {
    int id = 0;  ///< pre-order index within its tree
    UnifiedKind kind;
    std::string grammar_type;
    std::optional<std::string> value;
    std::vector<AstNode> children;
    Span span;
};

/// Grammar node type -> UnifiedKind, loaded from a resource table.
/// Types missing from the table map to Other(type).
class KindMap {
public:
    /// Lines of "<grammar_type> <UnifiedKind name>"; '#' starts a comment.
    /// Throws std::invalid_argument on malformed or duplicate entries.
    static KindMap parse(std::string_view text);
    static const KindMap& builtin(Language language);

    UnifiedKind lookup(std::string_view grammar_type) const;
    bool contains(std::string_view grammar_type) const;
    const std::map<std::string, UnifiedKind, std::less<>>& entries() const { return entries_; }

private:
    std::map<std::string, UnifiedKind, std::less<>> entries_;
};

/// Mapping tables used by parse(); defaults to the tables compiled in from resources/.
struct KindMaps {
    const KindMap* java = &KindMap::builtin(Language::Java);
    const KindMap* kotlin = &KindMap::builtin(Language::Kotlin);
};

/// Owns tables loaded from `<dir>/java.kinds` and `<dir>/kotlin.kinds`;
/// a missing file falls back to the builtin table.
class LoadedKindMaps {
public:
    explicit LoadedKindMaps(const std::filesystem::path& dir);
    KindMaps maps() const;

private:
    std::optional<KindMap> java_;
    std::optional<KindMap> kotlin_;
};

/// Parses Java or Kotlin source into the unified tree. Syntax errors never
/// fail: unparseable regions become Other("error") nodes. Throws
/// Error{UndecodableContent} for binary input and std::invalid_argument for
/// Language::Other.
AstNode parse(std::string_view content, Language language, const KindMaps& maps = {});

/// Node with the given pre-order id, or nullptr.
const AstNode* find_node(const AstNode& root, int node_id);

/// Kinds that act as the "in <parent>" context of a change.
bool is_context_kind(const UnifiedKind& kind);

/// Kind of the nearest proper ancestor that is a context kind; CompilationUnit
/// if none. Throws Error{UnknownNode} for ids not in the tree.
UnifiedKind enclosing_kind(const AstNode& root, int node_id);

std::size_t subtree_size(const AstNode& node);

/// Renumbers ids 0..n-1 in pre-order.
void assign_preorder_ids(AstNode& root);

/// One line per node: indentation, kind, grammar type, value, span.
void dump_tree(std::ostream& out, const AstNode& root);

}  // namespace j2k

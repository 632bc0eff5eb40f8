#pragma once

#include "j2k/ast.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace j2k {

struct DiffParams {
    int min_height = 2;
    double dice_threshold = 0.5;
    std::size_t max_size = 100;
};

/// One-to-one pairs of (old node id, new node id).
class MappingSet {
public:
    void add(int old_id, int new_id);
    void remove(int old_id, int new_id);

    bool has_old(int old_id) const { return old_to_new_.count(old_id) != 0; }
    bool has_new(int new_id) const { return new_to_old_.count(new_id) != 0; }
    std::optional<int> new_for(int old_id) const;
    std::optional<int> old_for(int new_id) const;
    bool contains(int old_id, int new_id) const;

    std::size_t size() const { return old_to_new_.size(); }
    /// Sorted by old id.
    std::vector<std::pair<int, int>> pairs() const;

private:
    std::map<int, int> old_to_new_;
    std::map<int, int> new_to_old_;
};

/// GumTree matching: greedy top-down on isomorphic subtrees, bottom-up
/// container matching on dice, optimal recovery inside small containers.
/// Pairs whose parents are not paired with each other survive only when the
/// subtrees are isomorphic.
MappingSet match_trees(const AstNode& old_tree, const AstNode& new_tree, const DiffParams& params = {});

enum class EditOp { Insert, Delete, Update, Move };

std::string_view to_string(EditOp op);

/// Node of the tree being edited: an old-tree node, or a node created by an
/// earlier Insert (identified by its new-tree id).
struct WorkRef {
    bool inserted = false;
    int id = -1;
    friend bool operator==(const WorkRef&, const WorkRef&) = default;
};

struct EditAction {
    EditOp op = EditOp::Insert;
    UnifiedKind kind;
    std::string grammar_type;
    /// Insert: the new node's value. Update: the replacement value.
    /// Delete and Move: the node's value.
    std::optional<std::string> value;
    /// Enclosing context kind, taken from the new tree for Insert, Update
    /// and Move and from the old tree for Delete.
    UnifiedKind parent_kind;
    std::optional<int> old_id;
    std::optional<int> new_id;
    /// Insert and Move: destination parent and child position.
    WorkRef parent;
    std::size_t position = 0;
};

using EditScript = std::vector<EditAction>;

/// Chawathe edit script turning old_tree into new_tree under `mapping`.
EditScript edit_script(const AstNode& old_tree, const AstNode& new_tree, const MappingSet& mapping);

/// match_trees followed by edit_script.
EditScript diff_trees(const AstNode& old_tree, const AstNode& new_tree, const DiffParams& params = {});

/// Replays a script on a copy of old_tree. Node ids of the result are
/// meaningless; compare with isomorphic(). Throws std::logic_error when an
/// action does not fit the tree.
AstNode apply(const AstNode& old_tree, const EditScript& script);

/// Same kind, value and ordered children, recursively. Ids and spans ignored.
bool isomorphic(const AstNode& a, const AstNode& b);

/// One JSON object per line: {"op","kind","value","parent_kind"}.
void write_jsonl(std::ostream& out, const EditScript& script);

}  // namespace j2k

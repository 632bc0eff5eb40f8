#include "j2k/source_diff.hpp"

#include "j2k/error.hpp"

#include <algorithm>
#include <set>

namespace j2k {
namespace {

// Touched Method nodes that sit below another touched Method node.
void nested_methods(const AstNode& node, const std::set<int>& touched, bool under_touched, std::set<int>& out) {
    const bool here = node.kind.is(UnifiedKind::Tag::Method) && touched.count(node.id) != 0;
    if (here && under_touched) out.insert(node.id);
    for (const auto& c : node.children) nested_methods(c, touched, under_touched || here, out);
}

std::vector<std::string> outermost_method_names(const AstNode& tree, const EditScript& script, EditOp op) {
    std::set<int> touched;
    for (const auto& a : script) {
        if (a.op != op || !a.kind.is(UnifiedKind::Tag::Method)) continue;
        touched.insert(op == EditOp::Delete ? *a.old_id : *a.new_id);
    }
    std::set<int> nested;
    nested_methods(tree, touched, false, nested);
    std::vector<std::string> names;
    for (int id : touched) {
        if (nested.count(id)) continue;
        names.push_back(method_name(*find_node(tree, id)));
    }
    return names;
}

void collect_methods(const AstNode& node, std::vector<std::string>& out) {
    if (node.kind.is(UnifiedKind::Tag::Method)) {
        out.push_back(method_name(node));
        return;
    }
    for (const auto& c : node.children) collect_methods(c, out);
}

}  // namespace

bool CommitDiffs::has_language(Language language) const {
    return std::any_of(files.begin(), files.end(), [&](const FileDiff& f) { return f.language == language; });
}

std::string method_name(const AstNode& method) {
    return method.value.value_or("constructor");
}

std::vector<std::string> method_names(const AstNode& root) {
    std::vector<std::string> out;
    collect_methods(root, out);
    return out;
}

CommitDiffs diff_modified_sources(const CommitRecord& commit, const DiffOptions& options) {
    CommitDiffs out;
    for (const auto& change : commit.changes) {
        if (change.kind != ChangeKind::Modified) continue;
        const Language language = detect_language(change.path());
        if (language == Language::Other) continue;
        const std::string before = change.old_content->load();
        const std::string after = change.new_content->load();
        try {
            const AstNode old_tree = parse(before, language, options.maps);
            const AstNode new_tree = parse(after, language, options.maps);
            FileDiff diff;
            diff.path = change.path();
            diff.language = language;
            diff.script = diff_trees(old_tree, new_tree, options.params);
            diff.deleted_methods = outermost_method_names(old_tree, diff.script, EditOp::Delete);
            diff.inserted_methods = outermost_method_names(new_tree, diff.script, EditOp::Insert);
            out.files.push_back(std::move(diff));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::UndecodableContent) throw;
            out.skipped.push_back({commit.id, change.path(), e.what()});
        }
    }
    return out;
}

}  // namespace j2k

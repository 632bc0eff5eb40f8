#pragma once

#include "j2k/ast.hpp"
#include "j2k/language.hpp"
#include "j2k/repository.hpp"
#include "j2k/tree_diff.hpp"

#include <string>
#include <vector>

namespace j2k {

struct DiffOptions {
    DiffParams params;
    KindMaps maps;
};

/// Edit script of one Modified Java or Kotlin file.
struct FileDiff {
    std::string path;
    Language language = Language::Other;
    EditScript script;
    /// Names of deleted / inserted Method nodes, outermost only: a method
    /// nested inside another deleted (inserted) method is not listed.
    std::vector<std::string> deleted_methods;
    std::vector<std::string> inserted_methods;
};

/// A file version that could not be parsed and was left out of the analysis.
struct SkippedFile {
    std::string commit_id;
    std::string path;
    std::string reason;
};

struct CommitDiffs {
    std::vector<FileDiff> files;
    std::vector<SkippedFile> skipped;

    bool has_language(Language language) const;
};

/// Diffs every Modified Java and Kotlin file of the commit against its
/// previous version.
CommitDiffs diff_modified_sources(const CommitRecord& commit, const DiffOptions& options = {});

/// Outermost Method nodes of the tree, in pre-order.
std::vector<std::string> method_names(const AstNode& root);

/// Name used for a Method node in evidence lists.
std::string method_name(const AstNode& method);

}  // namespace j2k

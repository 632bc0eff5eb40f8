#pragma once

#include "j2k/ast.hpp"
#include "j2k/rational.hpp"
#include "j2k/repository.hpp"
#include "j2k/source_diff.hpp"
#include "j2k/tree_diff.hpp"

#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace j2k {

/// One AST change: "ACTION-Entity in Parent (L)".
struct PatternItem {
    EditOp action = EditOp::Insert;
    UnifiedKind entity;
    UnifiedKind parent;
    Language language = Language::Java;

    /// e.g. "UPD-Invocation in Method (J)"
    std::string text() const;

    friend bool operator==(const PatternItem& a, const PatternItem& b) { return a.text() == b.text(); }
    friend std::strong_ordering operator<=>(const PatternItem& a, const PatternItem& b) {
        return a.text() <=> b.text();
    }
};

std::string_view action_code(EditOp op);

struct Transaction {
    std::string commit_id;
    std::size_t order_index = 0;
    /// Distinct items sorted by text.
    std::vector<PatternItem> items;
};

/// Items of one commit's diffs, or nullopt unless the commit modifies both
/// languages and yields items in each.
std::optional<Transaction> build_transaction(const CommitRecord& commit, const CommitDiffs& diffs);

std::vector<Transaction> build_transactions(const std::vector<CommitRecord>& commits, const DiffOptions& options = {},
                                            std::vector<SkippedFile>* skipped = nullptr);

struct FrequentItemset {
    std::vector<PatternItem> items;
    std::size_t count = 0;
    Rational support;
    std::size_t size() const { return items.size(); }
};

/// All itemsets of size <= max_size whose support is >= min_support, sorted
/// by size, then descending support, then item texts.
std::vector<FrequentItemset> apriori(const std::vector<Transaction>& transactions, const Rational& min_support,
                                     std::size_t max_size);

/// Columns: size, support (6 decimals), items joined by ';'.
void write_itemsets_csv(std::ostream& out, const std::vector<FrequentItemset>& itemsets);

}  // namespace j2k

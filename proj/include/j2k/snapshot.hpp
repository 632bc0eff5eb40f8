#pragma once

#include "j2k/language.hpp"
#include "j2k/rational.hpp"
#include "j2k/repository.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace j2k {

/// One non-negative total per Language.
struct LanguageCounts {
    std::array<std::size_t, 3> values{};

    std::size_t& operator[](Language l) { return values[static_cast<std::size_t>(l)]; }
    std::size_t operator[](Language l) const { return values[static_cast<std::size_t>(l)]; }

    friend bool operator==(const LanguageCounts&, const LanguageCounts&) = default;
};

struct LanguageSnapshot {
    std::string commit_id;
    std::size_t order_index = 0;
    LanguageCounts sloc;
    LanguageCounts files;

    /// Kotlin / (Kotlin + Java) sLOC; nullopt when both are zero.
    std::optional<Rational> kotlin_proportion() const;

    friend bool operator==(const LanguageSnapshot&, const LanguageSnapshot&) = default;
};

/// IDE-generated test stubs that are created once and never touched again.
struct GeneratedTestPolicy {
    bool enabled = true;
    std::vector<std::string> basenames{"ExampleUnitTest.java", "ApplicationTest.java"};

    static GeneratedTestPolicy disabled() { return GeneratedTestPolicy{false, {}}; }
};

/// Paths the policy excludes for this history: basename matches and the path
/// is never modified or renamed after the commit that created it.
std::set<std::string> excluded_paths(const std::vector<CommitRecord>& history,
                                     const GeneratedTestPolicy& policy);

/// Full-tree sLOC and file totals after every commit, maintained
/// incrementally from each commit's changes.
std::vector<LanguageSnapshot> snapshot_series(const std::vector<CommitRecord>& history,
                                              const GeneratedTestPolicy& policy = {});

/// Columns: commit_index, commit_id, java_sloc, kotlin_sloc, java_files,
/// kotlin_files, kotlin_proportion (empty when undefined).
void write_snapshot_csv(std::ostream& out, const std::vector<LanguageSnapshot>& series);

}  // namespace j2k

#pragma once

#include "j2k/error.hpp"
#include "j2k/migration.hpp"
#include "j2k/patterns.hpp"
#include "j2k/rational.hpp"
#include "j2k/repository.hpp"
#include "j2k/snapshot.hpp"
#include "j2k/tree_diff.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace j2k {

inline constexpr std::string_view kSchemaVersion = "1.0.0";
inline constexpr std::string_view kToolName = "j2k-miner";

struct AnalysisConfig {
    std::filesystem::path repo_path;
    std::optional<std::string> branch;
    std::set<MigrationKind> detectors{MigrationKind::FileLevel, MigrationKind::MethodLevel,
                                      MigrationKind::UpdateInsert};
    bool exclude_generated_tests = true;
    bool name_matching = false;
    Rational min_support{4, 1000};
    std::size_t max_itemset_size = 4;
    BaselineMode recent_baseline_mode = BaselineMode::KotlinEra;
    std::filesystem::path output_dir = "j2k-report";
    bool emit_json = true;
    bool emit_csv = true;
    DiffParams diff_params;
    /// Directory with java.kinds / kotlin.kinds overriding the built-in tables.
    std::optional<std::filesystem::path> kinds_dir;

    /// Throws Error{InvalidConfig}.
    void validate() const;
};

/// "file,method,update_insert" in any order. Throws Error{InvalidConfig}.
std::set<MigrationKind> parse_detectors(std::string_view list);
std::string_view detector_name(MigrationKind kind);

struct AuthorRow {
    std::string author_name;
    std::string author_email;
    std::size_t event_count = 0;
    std::size_t commit_count = 0;
};

struct AnalysisReport {
    AnalysisConfig config;
    std::string repository_path;
    std::optional<std::string> tip;
    std::vector<CommitRecord> commits;
    std::vector<LanguageSnapshot> snapshots;
    /// Indexed like commits.
    std::vector<std::vector<MigrationEvent>> events;
    std::vector<std::optional<Transaction>> transactions;
    std::set<std::string> excluded_paths;
    std::vector<SkippedFile> skipped;

    AppStatus status = AppStatus::Other;
    std::optional<MigrationInterval> interval;
    std::optional<Rational> file_migration_proportion;
    std::vector<EvolutionTrend> trends;
    std::optional<ErrorCode> trends_error;
    std::vector<FrequentItemset> itemsets;

    std::vector<MigrationEvent> all_events() const;
};

/// Walk, snapshots, detectors, app-level summary and pattern mining.
AnalysisReport analyze(const AnalysisConfig& config);

/// One row per (name, email) over commits with events, by descending
/// event count, then name, then email.
std::vector<AuthorRow> list_migration_authors(const AnalysisReport& report);

nlohmann::ordered_json to_json(const AnalysisReport& report);

/// report.json, snapshots.csv and itemsets.csv as selected by the config.
/// Throws Error{UnwritableOutput}.
void write_outputs(const AnalysisReport& report);

/// analyze() followed by write_outputs().
AnalysisReport run(const AnalysisConfig& config);

/// The JSON schema the report conforms to.
std::string_view report_schema();

}  // namespace j2k

#pragma once

#include "j2k/rational.hpp"
#include "j2k/repository.hpp"
#include "j2k/snapshot.hpp"
#include "j2k/source_diff.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace j2k {

enum class MigrationKind { FileLevel, MethodLevel, UpdateInsert };

std::string_view to_string(MigrationKind kind);

struct MigrationEvent {
    std::string commit_id;
    std::size_t order_index = 0;
    MigrationKind kind = MigrationKind::FileLevel;
    std::vector<std::string> java_paths;
    std::vector<std::string> kotlin_paths;
    /// FileLevel: the shared basename without extension.
    std::optional<std::string> basename;
    /// MethodLevel and UpdateInsert.
    std::vector<std::string> deleted_java_methods;
    std::vector<std::string> inserted_kotlin_methods;

    friend bool operator==(const MigrationEvent&, const MigrationEvent&) = default;
};

/// One event per (removed .java, added .kt) pair with equal basenames.
/// Same-directory pairs win, then pairs are formed in path order.
std::vector<MigrationEvent> detect_file_migration(const CommitRecord& commit);

/// True when the commit modifies at least one Java and one Kotlin file.
bool modifies_both_languages(const CommitRecord& commit);

/// One MethodLevel event when a modified Java file loses a method and a
/// modified Kotlin file gains one. With name_matching, only methods whose
/// names occur on both sides count.
std::vector<MigrationEvent> detect_method_migration(const CommitRecord& commit, const CommitDiffs& diffs,
                                                    bool name_matching = false);

/// One UpdateInsert event when a modified Java file loses a method and the
/// commit adds a Kotlin file.
std::vector<MigrationEvent> detect_update_insert_migration(const CommitRecord& commit, const CommitDiffs& diffs,
                                                           const KindMaps& maps = {});

/// Whether any method-based detector or the pattern miner needs source diffs.
bool needs_source_diff(const CommitRecord& commit);

enum class AppStatus { FullyMigratedJ2K, MixedLatest, KotlinOnlyHistory, JavaOnlyLatest, Other };

std::string_view to_string(AppStatus status);

AppStatus classify_app(const std::vector<LanguageSnapshot>& snapshots);

struct MigrationInterval {
    /// First snapshot with Kotlin sLOC > 0.
    std::size_t first_kotlin_index = 0;
    /// Commit that removes the last Java code, i.e. one past the last
    /// snapshot with Java sLOC > 0.
    std::size_t last_java_index = 0;
    std::int64_t length = 0;
    Rational normalized_length;
};

enum class MigrationClass { OneStep, Staggered, Anomalous };

std::string_view to_string(MigrationClass c);

MigrationClass classify_interval(const MigrationInterval& interval);

/// Present only for FullyMigratedJ2K histories.
std::optional<MigrationInterval> compute_interval(const std::vector<LanguageSnapshot>& snapshots);

/// Commits inside the interval with at least one FileLevel event, divided by
/// the interval length. Throws Error{UndefinedForAnomalous} when length < 1.
Rational file_migration_proportion(const std::vector<MigrationEvent>& events, const MigrationInterval& interval);

enum class Baseline { FirstKotlin, Recent };
enum class Direction { Up, Down, Equal };
enum class BaselineMode { KotlinEra, AllCommits };

std::string_view to_string(Baseline b);
std::string_view to_string(Direction d);
std::string_view to_string(BaselineMode m);
BaselineMode parse_baseline_mode(std::string_view text);

struct EvolutionTrend {
    Baseline baseline = Baseline::FirstKotlin;
    std::size_t baseline_index = 0;
    std::string baseline_commit_id;
    std::size_t latest_index = 0;
    std::size_t baseline_kotlin_sloc = 0;
    std::size_t latest_kotlin_sloc = 0;
    /// Absent proportions (no Java or Kotlin code) compare as 0.
    Rational baseline_proportion;
    Rational latest_proportion;
    Direction amount_direction = Direction::Equal;
    Direction proportion_direction = Direction::Equal;
};

/// Order index of the Recent baseline. KotlinEra: latest - floor(K / 10),
/// K = commits from the first Kotlin commit through the latest. AllCommits:
/// latest - floor(N / 10) over all N commits.
std::size_t recent_baseline_index(std::size_t first_kotlin_index, std::size_t latest_index, std::size_t commit_count,
                                  BaselineMode mode);

/// FirstKotlin and Recent trends. Throws Error{NoKotlinHistory} without any
/// Kotlin code and Error{DegenerateHistory} when Kotlin first appears in the
/// latest commit.
std::vector<EvolutionTrend> compute_trends(const std::vector<LanguageSnapshot>& snapshots,
                                           BaselineMode mode = BaselineMode::KotlinEra);

}  // namespace j2k

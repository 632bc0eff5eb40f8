#pragma once

#include "fixture_repo.hpp"

#include "j2k/migration.hpp"
#include "j2k/report.hpp"

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace j2k::testing {

struct ExpectedEvent {
    std::size_t index = 0;
    MigrationKind kind = MigrationKind::FileLevel;
    std::vector<std::string> java_paths;
    std::vector<std::string> kotlin_paths;
    std::optional<std::string> basename;
    std::vector<std::string> deleted;
    std::vector<std::string> inserted;
};

struct ExpectedInterval {
    std::size_t first_kotlin = 0;
    std::size_t last_java = 0;
    std::int64_t length = 0;
    Rational normalized;
    MigrationClass cls = MigrationClass::OneStep;
};

struct ExpectedTrend {
    Baseline baseline = Baseline::FirstKotlin;
    std::size_t baseline_index = 0;
    std::size_t baseline_kotlin_sloc = 0;
    std::size_t latest_kotlin_sloc = 0;
    Rational baseline_proportion;
    Rational latest_proportion;
    Direction amount = Direction::Equal;
    Direction proportion = Direction::Equal;
};

/// A scripted repository together with everything the analysis must report.
struct Fixture {
    std::string name;
    std::function<FixtureRepo()> repo;
    std::function<void(AnalysisConfig&)> configure;

    std::size_t commits = 0;
    AppStatus status = AppStatus::Other;
    std::optional<ExpectedInterval> interval;
    std::optional<Rational> proportion;
    std::vector<ExpectedEvent> events;
    /// Checked when set.
    std::optional<std::vector<ExpectedTrend>> trends;
    std::optional<ErrorCode> trends_error;
    std::set<std::string> excluded;
    /// Per-commit (java, kotlin) sLOC, checked when non-empty.
    std::vector<std::pair<std::size_t, std::size_t>> sloc;
};

/// Every scripted fixture, covering each detector and app-level case.
const std::vector<Fixture>& fixture_suite();
const Fixture& fixture(const std::string& name);

/// Builds the fixture in a temporary directory and analyzes it.
struct FixtureRun {
    std::unique_ptr<BuiltRepo> repo;
    AnalysisConfig config;
    AnalysisReport report;
};
FixtureRun run_fixture(const Fixture& f);

/// Human-readable mismatches between the report and the expectations; empty
/// when everything matches.
std::vector<std::string> check_fixture(const Fixture& f, const AnalysisReport& report);

/// 110 commits, Kotlin added by the 10th.
FixtureRepo worked_example_repo();
/// 100 commits whose migration interval spans 93 commits with 15 file migrations.
FixtureRepo proportion_repo();
/// `commits` commits over roughly `files` source files, mixing edits and migrations.
FixtureRepo synthetic_repo(std::size_t commits, std::size_t files, unsigned seed);

}  // namespace j2k::testing

#include "j2k/migration.hpp"

#include "j2k/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace j2k {

std::string_view to_string(MigrationKind kind) {
    switch (kind) {
        case MigrationKind::FileLevel: return "FileLevel";
        case MigrationKind::MethodLevel: return "MethodLevel";
        case MigrationKind::UpdateInsert: return "UpdateInsert";
    }
    return "?";
}

std::string_view to_string(AppStatus status) {
    switch (status) {
        case AppStatus::FullyMigratedJ2K: return "FullyMigratedJ2K";
        case AppStatus::MixedLatest: return "MixedLatest";
        case AppStatus::KotlinOnlyHistory: return "KotlinOnlyHistory";
        case AppStatus::JavaOnlyLatest: return "JavaOnlyLatest";
        case AppStatus::Other: return "Other";
    }
    return "?";
}

std::string_view to_string(MigrationClass c) {
    switch (c) {
        case MigrationClass::OneStep: return "OneStep";
        case MigrationClass::Staggered: return "Staggered";
        case MigrationClass::Anomalous: return "Anomalous";
    }
    return "?";
}

std::string_view to_string(Baseline b) {
    return b == Baseline::FirstKotlin ? "FirstKotlin" : "Recent";
}

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::Up: return "Up";
        case Direction::Down: return "Down";
        case Direction::Equal: return "Equal";
    }
    return "?";
}

std::string_view to_string(BaselineMode m) {
    return m == BaselineMode::KotlinEra ? "kotlin_era" : "all_commits";
}

BaselineMode parse_baseline_mode(std::string_view text) {
    if (text == "kotlin_era") return BaselineMode::KotlinEra;
    if (text == "all_commits") return BaselineMode::AllCommits;
    throw std::invalid_argument("unknown recent baseline mode: " + std::string(text));
}

// ---- detectors -------------------------------------------------------------

namespace {

std::string_view stem(std::string_view path) {
    auto base = path_basename(path);
    const auto dot = base.rfind('.');
    return dot == std::string_view::npos ? base : base.substr(0, dot);
}

MigrationEvent event_for(const CommitRecord& commit, MigrationKind kind) {
    MigrationEvent e;
    e.commit_id = commit.id;
    e.order_index = commit.order_index;
    e.kind = kind;
    return e;
}

bool has_change(const CommitRecord& commit, ChangeKind kind, Language language) {
    return std::any_of(commit.changes.begin(), commit.changes.end(), [&](const FileChange& c) {
        return c.kind == kind && detect_language(c.path()) == language;
    });
}

}  // namespace

std::vector<MigrationEvent> detect_file_migration(const CommitRecord& commit) {
    std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::string>>, std::less<>> by_stem;
    for (const auto& c : commit.changes) {
        if (c.kind == ChangeKind::Removed && path_extension(*c.old_path) == "java") {
            by_stem[std::string(stem(*c.old_path))].first.push_back(*c.old_path);
        } else if (c.kind == ChangeKind::Added && path_extension(*c.new_path) == "kt") {
            by_stem[std::string(stem(*c.new_path))].second.push_back(*c.new_path);
        }
    }
    std::vector<MigrationEvent> events;
    for (auto& [name, sides] : by_stem) {
        auto& [javas, kotlins] = sides;
        if (javas.empty() || kotlins.empty()) continue;
        std::sort(javas.begin(), javas.end());
        std::sort(kotlins.begin(), kotlins.end());
        std::vector<bool> java_used(javas.size(), false);
        std::vector<bool> kotlin_used(kotlins.size(), false);
        std::vector<std::pair<std::string, std::string>> pairs;
        for (std::size_t i = 0; i < javas.size(); ++i) {
            for (std::size_t j = 0; j < kotlins.size(); ++j) {
                if (kotlin_used[j] || path_dirname(javas[i]) != path_dirname(kotlins[j])) continue;
                java_used[i] = kotlin_used[j] = true;
                pairs.emplace_back(javas[i], kotlins[j]);
                break;
            }
        }
        std::size_t j = 0;
        for (std::size_t i = 0; i < javas.size(); ++i) {
            if (java_used[i]) continue;
            while (j < kotlins.size() && kotlin_used[j]) ++j;
            if (j == kotlins.size()) break;
            kotlin_used[j] = true;
            pairs.emplace_back(javas[i], kotlins[j]);
        }
        for (auto& [java, kotlin] : pairs) {
            MigrationEvent e = event_for(commit, MigrationKind::FileLevel);
            e.java_paths = {java};
            e.kotlin_paths = {kotlin};
            e.basename = name;
            events.push_back(std::move(e));
        }
    }
    std::sort(events.begin(), events.end(),
              [](const MigrationEvent& a, const MigrationEvent& b) { return a.java_paths < b.java_paths; });
    return events;
}

bool modifies_both_languages(const CommitRecord& commit) {
    return has_change(commit, ChangeKind::Modified, Language::Java) &&
           has_change(commit, ChangeKind::Modified, Language::Kotlin);
}

bool needs_source_diff(const CommitRecord& commit) {
    if (!has_change(commit, ChangeKind::Modified, Language::Java)) return false;
    return has_change(commit, ChangeKind::Modified, Language::Kotlin) ||
           has_change(commit, ChangeKind::Added, Language::Kotlin);
}

std::vector<MigrationEvent> detect_method_migration(const CommitRecord& commit, const CommitDiffs& diffs,
                                                    bool name_matching) {
    if (!modifies_both_languages(commit)) return {};
    std::set<std::string> kotlin_names;
    for (const auto& f : diffs.files) {
        if (f.language == Language::Kotlin) kotlin_names.insert(f.inserted_methods.begin(), f.inserted_methods.end());
    }
    std::set<std::string> java_names;
    for (const auto& f : diffs.files) {
        if (f.language == Language::Java) java_names.insert(f.deleted_methods.begin(), f.deleted_methods.end());
    }
    auto counts = [&](const std::string& name, const std::set<std::string>& other) {
        return !name_matching || other.count(name) != 0;
    };

    MigrationEvent e = event_for(commit, MigrationKind::MethodLevel);
    for (const auto& f : diffs.files) {
        std::vector<std::string> names;
        if (f.language == Language::Java) {
            for (const auto& n : f.deleted_methods) {
                if (counts(n, kotlin_names)) names.push_back(n);
            }
            if (names.empty()) continue;
            e.java_paths.push_back(f.path);
            e.deleted_java_methods.insert(e.deleted_java_methods.end(), names.begin(), names.end());
        } else if (f.language == Language::Kotlin) {
            for (const auto& n : f.inserted_methods) {
                if (counts(n, java_names)) names.push_back(n);
            }
            if (names.empty()) continue;
            e.kotlin_paths.push_back(f.path);
            e.inserted_kotlin_methods.insert(e.inserted_kotlin_methods.end(), names.begin(), names.end());
        }
    }
    if (e.java_paths.empty() || e.kotlin_paths.empty()) return {};
    return {e};
}

std::vector<MigrationEvent> detect_update_insert_migration(const CommitRecord& commit, const CommitDiffs& diffs,
                                                           const KindMaps& maps) {
    MigrationEvent e = event_for(commit, MigrationKind::UpdateInsert);
    for (const auto& f : diffs.files) {
        if (f.language != Language::Java || f.deleted_methods.empty()) continue;
        e.java_paths.push_back(f.path);
        e.deleted_java_methods.insert(e.deleted_java_methods.end(), f.deleted_methods.begin(),
                                      f.deleted_methods.end());
    }
    if (e.java_paths.empty()) return {};
    for (const auto& c : commit.changes) {
        if (c.kind != ChangeKind::Added || detect_language(*c.new_path) != Language::Kotlin) continue;
        e.kotlin_paths.push_back(*c.new_path);
        try {
            const auto names = method_names(parse(c.new_content->load(), Language::Kotlin, maps));
            e.inserted_kotlin_methods.insert(e.inserted_kotlin_methods.end(), names.begin(), names.end());
        } catch (const Error& err) {
            if (err.code() != ErrorCode::UndecodableContent) throw;
        }
    }
    if (e.kotlin_paths.empty()) return {};
    return {e};
}

// ---- app-level characterization ----------------------------------------------

namespace {

bool has(const LanguageSnapshot& s, Language l) {
    return s.sloc[l] > 0;
}

}  // namespace

AppStatus classify_app(const std::vector<LanguageSnapshot>& snapshots) {
    if (snapshots.empty()) throw std::invalid_argument("classify_app needs at least one snapshot");
    const auto& first = snapshots.front();
    const auto& last = snapshots.back();
    if (has(first, Language::Java) && !has(first, Language::Kotlin) && !has(last, Language::Java) &&
        has(last, Language::Kotlin)) {
        return AppStatus::FullyMigratedJ2K;
    }
    const bool never_java = std::none_of(snapshots.begin(), snapshots.end(),
                                         [](const LanguageSnapshot& s) { return has(s, Language::Java); });
    const bool some_kotlin = std::any_of(snapshots.begin(), snapshots.end(),
                                         [](const LanguageSnapshot& s) { return has(s, Language::Kotlin); });
    if (never_java && some_kotlin) return AppStatus::KotlinOnlyHistory;
    if (has(last, Language::Java) && !has(last, Language::Kotlin)) return AppStatus::JavaOnlyLatest;
    if (has(last, Language::Java) && has(last, Language::Kotlin)) return AppStatus::MixedLatest;
    return AppStatus::Other;
}

MigrationClass classify_interval(const MigrationInterval& interval) {
    if (interval.length == 1) return MigrationClass::OneStep;
    return interval.length > 1 ? MigrationClass::Staggered : MigrationClass::Anomalous;
}

std::optional<MigrationInterval> compute_interval(const std::vector<LanguageSnapshot>& snapshots) {
    if (snapshots.empty() || classify_app(snapshots) != AppStatus::FullyMigratedJ2K) return std::nullopt;
    MigrationInterval interval;
    const auto first_kotlin = std::find_if(snapshots.begin(), snapshots.end(),
                                           [](const LanguageSnapshot& s) { return has(s, Language::Kotlin); });
    const auto last_java = std::find_if(snapshots.rbegin(), snapshots.rend(),
                                        [](const LanguageSnapshot& s) { return has(s, Language::Java); });
    interval.first_kotlin_index = first_kotlin->order_index;
    // The commit removing the last Java code still uses Java.
    interval.last_java_index = last_java->order_index + 1;
    interval.length = static_cast<std::int64_t>(interval.last_java_index) -
                      static_cast<std::int64_t>(interval.first_kotlin_index) + 1;
    interval.normalized_length = Rational(interval.length, static_cast<std::int64_t>(snapshots.size()));
    return interval;
}

Rational file_migration_proportion(const std::vector<MigrationEvent>& events, const MigrationInterval& interval) {
    if (interval.length < 1) {
        throw Error(ErrorCode::UndefinedForAnomalous, "file-migration proportion is undefined for anomalous intervals");
    }
    std::set<std::size_t> commits;
    for (const auto& e : events) {
        if (e.kind != MigrationKind::FileLevel) continue;
        if (e.order_index >= interval.first_kotlin_index && e.order_index <= interval.last_java_index) {
            commits.insert(e.order_index);
        }
    }
    return Rational(static_cast<std::int64_t>(commits.size()), interval.length);
}

std::size_t recent_baseline_index(std::size_t first_kotlin_index, std::size_t latest_index, std::size_t commit_count,
                                  BaselineMode mode) {
    const std::size_t span = mode == BaselineMode::KotlinEra ? latest_index - first_kotlin_index + 1 : commit_count;
    const std::size_t back = span / 10;
    return back > latest_index ? 0 : latest_index - back;
}

namespace {

template <typename T>
Direction compare(const T& latest, const T& baseline) {
    if (latest > baseline) return Direction::Up;
    if (latest < baseline) return Direction::Down;
    return Direction::Equal;
}

EvolutionTrend trend(Baseline kind, const LanguageSnapshot& base, const LanguageSnapshot& latest) {
    EvolutionTrend t;
    t.baseline = kind;
    t.baseline_index = base.order_index;
    t.baseline_commit_id = base.commit_id;
    t.latest_index = latest.order_index;
    t.baseline_kotlin_sloc = base.sloc[Language::Kotlin];
    t.latest_kotlin_sloc = latest.sloc[Language::Kotlin];
    t.baseline_proportion = base.kotlin_proportion().value_or(Rational(0));
    t.latest_proportion = latest.kotlin_proportion().value_or(Rational(0));
    t.amount_direction = compare(t.latest_kotlin_sloc, t.baseline_kotlin_sloc);
    t.proportion_direction = compare(t.latest_proportion, t.baseline_proportion);
    return t;
}

}  // namespace

std::vector<EvolutionTrend> compute_trends(const std::vector<LanguageSnapshot>& snapshots, BaselineMode mode) {
    const auto first = std::find_if(snapshots.begin(), snapshots.end(),
                                    [](const LanguageSnapshot& s) { return has(s, Language::Kotlin); });
    if (first == snapshots.end()) throw Error(ErrorCode::NoKotlinHistory, "no commit contains Kotlin code");
    const auto f = static_cast<std::size_t>(first - snapshots.begin());
    const std::size_t l = snapshots.size() - 1;
    if (f == l) throw Error(ErrorCode::DegenerateHistory, "Kotlin first appears in the latest commit");
    const std::size_t r = recent_baseline_index(f, l, snapshots.size(), mode);
    return {trend(Baseline::FirstKotlin, snapshots[f], snapshots[l]),
            trend(Baseline::Recent, snapshots[r], snapshots[l])};
}

}  // namespace j2k

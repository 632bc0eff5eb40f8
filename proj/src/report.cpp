#include "j2k/report.hpp"

#include "j2k/error.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace j2k {

namespace resources {
extern const std::string_view report_schema;
}  // namespace resources

std::string_view report_schema() {
    return resources::report_schema;
}

using json = nlohmann::ordered_json;

std::string_view detector_name(MigrationKind kind) {
    switch (kind) {
        case MigrationKind::FileLevel: return "file";
        case MigrationKind::MethodLevel: return "method";
        case MigrationKind::UpdateInsert: return "update_insert";
    }
    return "?";
}

std::set<MigrationKind> parse_detectors(std::string_view list) {
    std::set<MigrationKind> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto comma = list.find(',', start);
        if (comma == std::string_view::npos) comma = list.size();
        auto name = list.substr(start, comma - start);
        while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
        while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
        if (name == "file") {
            out.insert(MigrationKind::FileLevel);
        } else if (name == "method") {
            out.insert(MigrationKind::MethodLevel);
        } else if (name == "update_insert") {
            out.insert(MigrationKind::UpdateInsert);
        } else if (!name.empty()) {
            throw Error(ErrorCode::InvalidConfig, "unknown detector: " + std::string(name));
        }
        start = comma + 1;
    }
    if (out.empty()) throw Error(ErrorCode::InvalidConfig, "at least one detector must be enabled");
    return out;
}

void AnalysisConfig::validate() const {
    if (detectors.empty()) throw Error(ErrorCode::InvalidConfig, "at least one detector must be enabled");
    if (min_support <= Rational(0) || min_support > Rational(1)) {
        throw Error(ErrorCode::InvalidConfig, "min support must be in (0, 1]");
    }
    if (max_itemset_size < 1) throw Error(ErrorCode::InvalidConfig, "max itemset size must be at least 1");
    if (!emit_json && !emit_csv) throw Error(ErrorCode::InvalidConfig, "no output format selected");
    if (diff_params.min_height < 1) throw Error(ErrorCode::InvalidConfig, "min height must be at least 1");
    if (diff_params.dice_threshold < 0.0 || diff_params.dice_threshold > 1.0) {
        throw Error(ErrorCode::InvalidConfig, "dice threshold must be in [0, 1]");
    }
}

std::vector<MigrationEvent> AnalysisReport::all_events() const {
    std::vector<MigrationEvent> out;
    for (const auto& per_commit : events) out.insert(out.end(), per_commit.begin(), per_commit.end());
    return out;
}

AnalysisReport analyze(const AnalysisConfig& config) {
    config.validate();
    AnalysisReport report;
    report.config = config;

    std::optional<LoadedKindMaps> loaded;
    DiffOptions diff_options;
    diff_options.params = config.diff_params;
    if (config.kinds_dir) {
        try {
            loaded.emplace(*config.kinds_dir);
        } catch (const std::invalid_argument& e) {
            throw Error(ErrorCode::InvalidConfig, std::string("kind table: ") + e.what());
        }
        diff_options.maps = loaded->maps();
    }

    const Repository repo = Repository::open(config.repo_path);
    report.repository_path = repo.path().string();
    WalkOptions walk;
    walk.branch = config.branch;
    report.tip = repo.resolve_tip(walk);
    report.commits = repo.walk_history(walk);

    const GeneratedTestPolicy policy = config.exclude_generated_tests ? GeneratedTestPolicy{}
                                                                      : GeneratedTestPolicy::disabled();
    report.excluded_paths = excluded_paths(report.commits, policy);
    report.snapshots = snapshot_series(report.commits, policy);

    const bool file = config.detectors.count(MigrationKind::FileLevel) != 0;
    const bool method = config.detectors.count(MigrationKind::MethodLevel) != 0;
    const bool update_insert = config.detectors.count(MigrationKind::UpdateInsert) != 0;

    for (const auto& commit : report.commits) {
        std::vector<MigrationEvent> events;
        std::optional<Transaction> transaction;
        if (file) events = detect_file_migration(commit);
        if (needs_source_diff(commit)) {
            const CommitDiffs diffs = diff_modified_sources(commit, diff_options);
            report.skipped.insert(report.skipped.end(), diffs.skipped.begin(), diffs.skipped.end());
            if (method) {
                for (auto& e : detect_method_migration(commit, diffs, config.name_matching)) events.push_back(std::move(e));
            }
            if (update_insert) {
                for (auto& e : detect_update_insert_migration(commit, diffs, diff_options.maps)) {
                    events.push_back(std::move(e));
                }
            }
            transaction = build_transaction(commit, diffs);
        }
        report.events.push_back(std::move(events));
        report.transactions.push_back(std::move(transaction));
    }

    if (!report.snapshots.empty()) {
        report.status = classify_app(report.snapshots);
        report.interval = compute_interval(report.snapshots);
        if (file && report.interval && report.interval->length >= 1) {
            report.file_migration_proportion = file_migration_proportion(report.all_events(), *report.interval);
        }
        try {
            report.trends = compute_trends(report.snapshots, config.recent_baseline_mode);
        } catch (const Error& e) {
            report.trends_error = e.code();
        }
    } else {
        report.trends_error = ErrorCode::NoKotlinHistory;
    }

    std::vector<Transaction> transactions;
    for (const auto& t : report.transactions) {
        if (t) transactions.push_back(*t);
    }
    report.itemsets = apriori(transactions, config.min_support, config.max_itemset_size);
    return report;
}

std::vector<AuthorRow> list_migration_authors(const AnalysisReport& report) {
    std::map<std::pair<std::string, std::string>, AuthorRow> rows;
    for (std::size_t i = 0; i < report.commits.size(); ++i) {
        const auto& events = report.events[i];
        if (events.empty()) continue;
        const auto& c = report.commits[i];
        auto& row = rows[{c.author_name, c.author_email}];
        row.author_name = c.author_name;
        row.author_email = c.author_email;
        row.event_count += events.size();
        row.commit_count += 1;
    }
    std::vector<AuthorRow> out;
    for (auto& [key, row] : rows) out.push_back(std::move(row));
    std::stable_sort(out.begin(), out.end(), [](const AuthorRow& a, const AuthorRow& b) {
        if (a.event_count != b.event_count) return a.event_count > b.event_count;
        return std::tie(a.author_name, a.author_email) < std::tie(b.author_name, b.author_email);
    });
    return out;
}

// ---- JSON ------------------------------------------------------------------

namespace {

json rational(const Rational& r) {
    json j;
    j["numerator"] = r.numerator();
    j["denominator"] = r.denominator();
    j["value"] = r.to_double();
    return j;
}

template <typename T>
json optional_or_null(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

json strings(const std::vector<std::string>& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back(s);
    return a;
}

json event_json(const MigrationEvent& e) {
    json j;
    j["kind"] = to_string(e.kind);
    j["commit_id"] = e.commit_id;
    j["order_index"] = e.order_index;
    j["java_paths"] = strings(e.java_paths);
    j["kotlin_paths"] = strings(e.kotlin_paths);
    json evidence;
    if (e.kind == MigrationKind::FileLevel) {
        evidence["basename"] = optional_or_null(e.basename);
    } else {
        evidence["deleted_java_methods"] = strings(e.deleted_java_methods);
        evidence["inserted_kotlin_methods"] = strings(e.inserted_kotlin_methods);
    }
    j["evidence"] = evidence;
    return j;
}

json snapshot_json(const LanguageSnapshot& s) {
    json j;
    j["java_sloc"] = s.sloc[Language::Java];
    j["kotlin_sloc"] = s.sloc[Language::Kotlin];
    j["other_sloc"] = s.sloc[Language::Other];
    j["java_files"] = s.files[Language::Java];
    j["kotlin_files"] = s.files[Language::Kotlin];
    j["other_files"] = s.files[Language::Other];
    const auto p = s.kotlin_proportion();
    j["kotlin_proportion"] = p ? rational(*p) : json(nullptr);
    return j;
}

json config_json(const AnalysisConfig& c) {
    json j;
    j["repo_path"] = c.repo_path.string();
    j["branch"] = optional_or_null(c.branch);
    json detectors = json::array();
    for (auto k : c.detectors) detectors.push_back(detector_name(k));
    j["detectors"] = detectors;
    j["exclude_generated_tests"] = c.exclude_generated_tests;
    j["name_matching"] = c.name_matching;
    j["min_support"] = rational(c.min_support);
    j["max_itemset_size"] = c.max_itemset_size;
    j["recent_baseline_mode"] = to_string(c.recent_baseline_mode);
    json formats = json::array();
    if (c.emit_json) formats.push_back("json");
    if (c.emit_csv) formats.push_back("csv");
    j["formats"] = formats;
    j["kinds_dir"] = c.kinds_dir ? json(c.kinds_dir->string()) : json(nullptr);
    return j;
}

json trend_json(const EvolutionTrend& t) {
    json j;
    j["baseline"] = to_string(t.baseline);
    j["baseline_index"] = t.baseline_index;
    j["baseline_commit_id"] = t.baseline_commit_id;
    j["latest_index"] = t.latest_index;
    j["baseline_kotlin_sloc"] = t.baseline_kotlin_sloc;
    j["latest_kotlin_sloc"] = t.latest_kotlin_sloc;
    j["baseline_proportion"] = rational(t.baseline_proportion);
    j["latest_proportion"] = rational(t.latest_proportion);
    j["amount_direction"] = to_string(t.amount_direction);
    j["proportion_direction"] = to_string(t.proportion_direction);
    return j;
}

json commit_json(const AnalysisReport& r, std::size_t i) {
    const CommitRecord& c = r.commits[i];
    json j;
    j["order_index"] = c.order_index;
    j["id"] = c.id;
    j["parent_ids"] = strings(c.parent_ids);
    j["timestamp"] = c.timestamp;
    j["author_name"] = c.author_name;
    j["author_email"] = c.author_email;
    j["message"] = c.message;
    json changes = json::array();
    for (const auto& ch : c.changes) {
        json x;
        x["kind"] = to_string(ch.kind);
        x["old_path"] = optional_or_null(ch.old_path);
        x["new_path"] = optional_or_null(ch.new_path);
        changes.push_back(x);
    }
    j["changes"] = changes;
    j["snapshot"] = snapshot_json(r.snapshots[i]);
    json events = json::array();
    for (const auto& e : r.events[i]) events.push_back(event_json(e));
    j["events"] = events;
    if (const auto& t = r.transactions[i]) {
        json items = json::array();
        for (const auto& item : t->items) items.push_back(item.text());
        j["transaction"] = items;
    } else {
        j["transaction"] = nullptr;
    }
    return j;
}

json summary_json(const AnalysisReport& r) {
    json j;
    j["app_status"] = to_string(r.status);
    if (r.interval) {
        json i;
        i["first_kotlin_index"] = r.interval->first_kotlin_index;
        i["last_java_index"] = r.interval->last_java_index;
        i["length"] = r.interval->length;
        i["normalized_length"] = rational(r.interval->normalized_length);
        j["migration_interval"] = i;
        j["migration_class"] = to_string(classify_interval(*r.interval));
    } else {
        j["migration_interval"] = nullptr;
        j["migration_class"] = nullptr;
    }
    j["file_migration_proportion"] = r.file_migration_proportion ? rational(*r.file_migration_proportion) : json(nullptr);
    json trends = json::array();
    for (const auto& t : r.trends) trends.push_back(trend_json(t));
    j["trends"] = trends;
    j["trends_error"] = r.trends_error ? json(to_string(*r.trends_error)) : json(nullptr);

    std::map<MigrationKind, std::size_t> counts{
        {MigrationKind::FileLevel, 0}, {MigrationKind::MethodLevel, 0}, {MigrationKind::UpdateInsert, 0}};
    json commits = json::array();
    for (std::size_t i = 0; i < r.commits.size(); ++i) {
        if (r.events[i].empty()) continue;
        std::set<MigrationKind> kinds;
        for (const auto& e : r.events[i]) {
            ++counts[e.kind];
            kinds.insert(e.kind);
        }
        json m;
        m["order_index"] = r.commits[i].order_index;
        m["commit_id"] = r.commits[i].id;
        json k = json::array();
        for (auto kind : kinds) k.push_back(to_string(kind));
        m["kinds"] = k;
        commits.push_back(m);
    }
    json count_json;
    for (auto [kind, n] : counts) count_json[std::string(to_string(kind))] = n;
    j["event_counts"] = count_json;
    j["migration_commits"] = commits;

    json authors = json::array();
    for (const auto& a : list_migration_authors(r)) {
        json row;
        row["author_name"] = a.author_name;
        row["author_email"] = a.author_email;
        row["event_count"] = a.event_count;
        row["commit_count"] = a.commit_count;
        authors.push_back(row);
    }
    j["migration_authors"] = authors;
    j["excluded_generated_tests"] = strings({r.excluded_paths.begin(), r.excluded_paths.end()});
    json skipped = json::array();
    for (const auto& s : r.skipped) {
        json x;
        x["commit_id"] = s.commit_id;
        x["path"] = s.path;
        x["reason"] = s.reason;
        skipped.push_back(x);
    }
    j["skipped_files"] = skipped;
    j["transaction_count"] = std::count_if(r.transactions.begin(), r.transactions.end(),
                                           [](const auto& t) { return t.has_value(); });
    return j;
}

}  // namespace

nlohmann::ordered_json to_json(const AnalysisReport& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    json tool;
    tool["name"] = kToolName;
    tool["version"] = J2K_VERSION;
    j["tool"] = tool;
    j["config"] = config_json(r.config);
    json repo;
    repo["path"] = r.repository_path;
    repo["tip"] = optional_or_null(r.tip);
    repo["history"] = "first-parent";
    repo["rename_similarity"] = WalkOptions{}.rename_similarity;
    repo["commit_count"] = r.commits.size();
    j["repository"] = repo;
    json params;
    params["min_height"] = r.config.diff_params.min_height;
    params["dice_threshold"] = r.config.diff_params.dice_threshold;
    params["max_size"] = r.config.diff_params.max_size;
    j["diff_parameters"] = params;
    json commits = json::array();
    for (std::size_t i = 0; i < r.commits.size(); ++i) commits.push_back(commit_json(r, i));
    j["commits"] = commits;
    j["summary"] = summary_json(r);
    json itemsets = json::array();
    for (const auto& f : r.itemsets) {
        json x;
        x["size"] = f.size();
        x["count"] = f.count;
        x["support"] = rational(f.support);
        json items = json::array();
        for (const auto& item : f.items) items.push_back(item.text());
        x["items"] = items;
        itemsets.push_back(x);
    }
    j["frequent_itemsets"] = itemsets;
    return j;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot write " + path.string());
}

void prepare_output_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::UnwritableOutput, "cannot create output directory " + dir.string());
    }
}

}  // namespace

void write_outputs(const AnalysisReport& report) {
    const auto& dir = report.config.output_dir;
    prepare_output_dir(dir);
    if (report.config.emit_json) {
        write_file(dir / "report.json",
                   to_json(report).dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n");
    }
    if (report.config.emit_csv) {
        std::ostringstream snapshots;
        write_snapshot_csv(snapshots, report.snapshots);
        write_file(dir / "snapshots.csv", snapshots.str());
        std::ostringstream itemsets;
        write_itemsets_csv(itemsets, report.itemsets);
        write_file(dir / "itemsets.csv", itemsets.str());
    }
}

AnalysisReport run(const AnalysisConfig& config) {
    config.validate();
    Repository::open(config.repo_path);
    prepare_output_dir(config.output_dir);
    AnalysisReport report = analyze(config);
    write_outputs(report);
    return report;
}

}  // namespace j2k

#include "j2k/ast.hpp"
#include "j2k/error.hpp"
#include "j2k/report.hpp"
#include "j2k/tree_diff.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum ExitCode {
    kOk = 0,
    kFailure = 1,
    kConfig = 2,
    kNotARepository = 3,
    kUnwritableOutput = 4,
    kCorruptHistory = 5,
    kUnreadableRepository = 6,
};

int exit_code_for(j2k::ErrorCode code) {
    switch (code) {
        case j2k::ErrorCode::InvalidConfig: return kConfig;
        case j2k::ErrorCode::NotARepository: return kNotARepository;
        case j2k::ErrorCode::UnwritableOutput: return kUnwritableOutput;
        case j2k::ErrorCode::CorruptHistory: return kCorruptHistory;
        case j2k::ErrorCode::UnreadableRepository: return kUnreadableRepository;
        default: return kFailure;
    }
}

// Machine-readable error record on stderr.
int report_error(std::string_view code, const std::string& message, int exit_code) {
    nlohmann::ordered_json j;
    j["error"]["code"] = code;
    j["error"]["message"] = message;
    j["error"]["exit_code"] = exit_code;
    std::cerr << j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace) << '\n';
    return exit_code;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

j2k::Language language_for(const std::string& path, const std::string& forced) {
    if (forced == "java") return j2k::Language::Java;
    if (forced == "kotlin") return j2k::Language::Kotlin;
    const auto l = j2k::detect_language(path);
    if (l == j2k::Language::Other) {
        throw j2k::Error(j2k::ErrorCode::InvalidConfig, path + " is neither Java nor Kotlin; pass --language");
    }
    return l;
}

struct AnalyzeArgs {
    std::string repo;
    std::string branch;
    std::string detectors = "file,method,update_insert";
    std::string min_support = "0.004";
    std::size_t max_itemset_size = 4;
    bool no_exclude_generated_tests = false;
    bool match_method_names = false;
    std::string recent_baseline = "kotlin_era";
    std::string out = "j2k-report";
    std::string format = "json,csv";
    std::string kinds_dir;
    int min_height = 2;
    double dice_threshold = 0.5;
    std::size_t max_size = 100;
};

j2k::AnalysisConfig to_config(const AnalyzeArgs& a) {
    j2k::AnalysisConfig c;
    c.repo_path = a.repo;
    if (!a.branch.empty()) c.branch = a.branch;
    c.detectors = j2k::parse_detectors(a.detectors);
    try {
        c.min_support = j2k::Rational::parse(a.min_support);
        c.recent_baseline_mode = j2k::parse_baseline_mode(a.recent_baseline);
    } catch (const std::invalid_argument& e) {
        throw j2k::Error(j2k::ErrorCode::InvalidConfig, e.what());
    }
    c.max_itemset_size = a.max_itemset_size;
    c.exclude_generated_tests = !a.no_exclude_generated_tests;
    c.name_matching = a.match_method_names;
    c.output_dir = a.out;
    c.emit_json = c.emit_csv = false;
    std::stringstream formats(a.format);
    for (std::string f; std::getline(formats, f, ',');) {
        if (f == "json") {
            c.emit_json = true;
        } else if (f == "csv") {
            c.emit_csv = true;
        } else if (!f.empty()) {
            throw j2k::Error(j2k::ErrorCode::InvalidConfig, "unknown format: " + f);
        }
    }
    if (!a.kinds_dir.empty()) c.kinds_dir = a.kinds_dir;
    c.diff_params = {a.min_height, a.dice_threshold, a.max_size};
    return c;
}

int run_analyze(const AnalyzeArgs& args) {
    const auto report = j2k::run(to_config(args));
    const auto events = report.all_events();
    std::cout << "commits: " << report.commits.size() << '\n'
              << "app status: " << j2k::to_string(report.status) << '\n'
              << "migration events: " << events.size() << '\n'
              << "frequent itemsets: " << report.itemsets.size() << '\n'
              << "output: " << report.config.output_dir.string() << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reconstructs Java-to-Kotlin migration from a git history."};
    app.set_version_flag("--version", std::string(j2k::kToolName) + " " + J2K_VERSION);
    app.require_subcommand(1);

    AnalyzeArgs a;
    auto* analyze = app.add_subcommand("analyze", "Analyze a repository and write report files");
    analyze->add_option("--repo", a.repo, "Path to the git repository")->required()->envname("J2K_MINER_REPO");
    analyze->add_option("--branch", a.branch, "Branch or revision to walk (default: HEAD)")
        ->envname("J2K_MINER_BRANCH");
    analyze->add_option("--detectors", a.detectors, "Comma-separated subset of file,method,update_insert")
        ->envname("J2K_MINER_DETECTORS")
        ->capture_default_str();
    analyze->add_option("--min-support", a.min_support, "Apriori minimum support, decimal or fraction")
        ->envname("J2K_MINER_MIN_SUPPORT")
        ->capture_default_str();
    analyze->add_option("--max-itemset-size", a.max_itemset_size, "Largest itemset to mine")
        ->envname("J2K_MINER_MAX_ITEMSET_SIZE")
        ->capture_default_str();
    analyze->add_flag("--no-exclude-generated-tests", a.no_exclude_generated_tests,
                      "Count IDE-generated ExampleUnitTest.java / ApplicationTest.java")
        ->envname("J2K_MINER_NO_EXCLUDE_GENERATED_TESTS");
    analyze->add_flag("--match-method-names", a.match_method_names,
                      "Method-level detector requires equal deleted and inserted method names")
        ->envname("J2K_MINER_MATCH_METHOD_NAMES");
    analyze->add_option("--recent-baseline", a.recent_baseline, "kotlin_era or all_commits")
        ->check(CLI::IsMember({"kotlin_era", "all_commits"}))
        ->envname("J2K_MINER_RECENT_BASELINE")
        ->capture_default_str();
    analyze->add_option("--out", a.out, "Output directory")->envname("J2K_MINER_OUT")->capture_default_str();
    analyze->add_option("--format", a.format, "Comma-separated subset of json,csv")
        ->envname("J2K_MINER_FORMAT")
        ->capture_default_str();
    analyze->add_option("--kinds-dir", a.kinds_dir, "Directory with java.kinds / kotlin.kinds overrides")
        ->envname("J2K_MINER_KINDS_DIR");
    analyze->add_option("--min-height", a.min_height, "Tree matcher minimum subtree height")
        ->envname("J2K_MINER_MIN_HEIGHT")
        ->capture_default_str();
    analyze->add_option("--dice-threshold", a.dice_threshold, "Tree matcher container dice threshold")
        ->envname("J2K_MINER_DICE_THRESHOLD")
        ->capture_default_str();
    analyze->add_option("--max-size", a.max_size, "Tree matcher recovery size limit")
        ->envname("J2K_MINER_MAX_SIZE")
        ->capture_default_str();

    std::string old_file, new_file, diff_language;
    auto* diff = app.add_subcommand("diff", "Print the edit script between two source files as JSON lines");
    diff->add_option("old", old_file, "Old version")->required();
    diff->add_option("new", new_file, "New version")->required();
    diff->add_option("--language", diff_language, "java or kotlin (default: from extension)")
        ->check(CLI::IsMember({"java", "kotlin"}));

    std::string parse_file, parse_language;
    bool dump = false;
    auto* parse = app.add_subcommand("parse", "Parse one source file");
    parse->add_option("file", parse_file, "Source file")->required();
    parse->add_option("--language", parse_language, "java or kotlin (default: from extension)")
        ->check(CLI::IsMember({"java", "kotlin"}));
    parse->add_flag("--dump-tree", dump, "Print the unified tree, one node per line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return report_error("InvalidConfig", e.what(), kConfig);
    }

    try {
        if (*analyze) return run_analyze(a);
        if (*diff) {
            const auto language = language_for(old_file, diff_language);
            const auto before = j2k::parse(read_file(old_file), language);
            const auto after = j2k::parse(read_file(new_file), language);
            j2k::write_jsonl(std::cout, j2k::diff_trees(before, after));
            return kOk;
        }
        if (*parse) {
            const auto tree = j2k::parse(read_file(parse_file), language_for(parse_file, parse_language));
            if (dump) {
                j2k::dump_tree(std::cout, tree);
            } else {
                std::cout << tree.kind.name() << ": " << j2k::subtree_size(tree) << " nodes\n";
            }
            return kOk;
        }
    } catch (const j2k::Error& e) {
        return report_error(j2k::to_string(e.code()), e.what(), exit_code_for(e.code()));
    } catch (const std::exception& e) {
        return report_error("Failure", e.what(), kFailure);
    }
    return kFailure;
}

#include "fixtures.hpp"

#include "sources.hpp"

#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace j2k::testing {

namespace {

using E = ExpectedEvent;

E file_event(std::size_t index, std::string java, std::string kotlin, std::string basename) {
    return E{index, MigrationKind::FileLevel, {std::move(java)}, {std::move(kotlin)}, std::move(basename), {}, {}};
}

E method_event(std::size_t index, MigrationKind kind, std::vector<std::string> java, std::vector<std::string> kotlin,
               std::vector<std::string> deleted, std::vector<std::string> inserted) {
    return E{index, kind, std::move(java), std::move(kotlin), std::nullopt, std::move(deleted), std::move(inserted)};
}

ExpectedTrend trend(Baseline b, std::size_t index, std::size_t base_k, std::size_t latest_k, Rational base_p,
                    Rational latest_p, Direction amount, Direction proportion) {
    return ExpectedTrend{b, index, base_k, latest_k, base_p, latest_p, amount, proportion};
}

constexpr auto FK = Baseline::FirstKotlin;
constexpr auto RC = Baseline::Recent;
constexpr auto Up = Direction::Up;
constexpr auto Down = Direction::Down;
constexpr auto Eq = Direction::Equal;

const std::string kBinary = std::string("\x89PNG\r\n\x1a\n", 8) + std::string(16, '\0') + "IHDR";

// ---- repositories ------------------------------------------------------------

FixtureRepo one_step_repo() {
    FixtureRepo r;
    r.write("A.java", java_class("A", 10)).write("B.java", java_class("B", 6)).write("build.gradle", "apply plugin\n");
    r.commit("java app");
    r.write("A.java", java_class("A", 12)).commit("grow A");
    // B.kt keeps B.java's bytes so git sees a rename candidate across extensions.
    r.remove("A.java").remove("B.java").write("A.kt", kotlin_class("A", 9)).write("B.kt", java_class("B", 6));
    r.commit("convert to kotlin");
    r.write("A.kt", kotlin_class("A", 14)).commit("grow A.kt");
    return r;
}

FixtureRepo staggered_repo() {
    FixtureRepo r;
    r.write("A.java", java_class("A", 8)).write("B.java", java_class("B", 8)).write("C.java", java_class("C", 8));
    r.write("res/icon.png", kBinary).commit("init");
    r.remove("A.java").write("A.kt", kotlin_class("A", 7)).commit("migrate A");
    r.write("B.java", java_class("B", 12)).commit("edit B");
    r.remove("B.java").write("B.kt", kotlin_class("B", 9)).commit("migrate B");
    r.remove("C.java").write("C.kt", kotlin_class("C", 5)).commit("migrate C");
    r.write("README.md", "notes\n").commit("docs");
    return r;
}

FixtureRepo anomalous_repo() {
    FixtureRepo r;
    r.write("Main.java", java_class("Main", 10)).commit("init");
    r.write("Main.java", java_class("Main", 11)).commit("edit");
    r.remove("Main.java").write("README.md", "rewrite pending\n").commit("drop java");
    r.write("docs/notes.md", "plan\n").commit("docs");
    r.write("Main.kt", kotlin_class("Main", 9)).commit("kotlin");
    return r;
}

FixtureRepo directory_moved_repo() {
    FixtureRepo r;
    r.write("app/src/main/java/com/x/Foo.java", java_class("Foo", 6));
    r.write("app/src/main/java/com/x/Bar.java", java_class("Bar", 6));
    r.write("x/Baz.java", java_class("Baz", 5)).write("y/Baz.java", java_class("Baz", 5)).commit("init");
    r.remove("app/src/main/java/com/x/Foo.java").write("app/src/main/kotlin/com/x/Foo.kt", kotlin_class("Foo", 5));
    r.commit("move Foo to kotlin dir");
    r.remove("x/Baz.java").remove("y/Baz.java").write("x/Baz.kt", kotlin_class("Baz", 4)).commit("merge Baz");
    r.remove("app/src/main/java/com/x/Bar.java").write("app/src/main/kotlin/com/x/Qux.kt", kotlin_class("Qux", 4));
    r.commit("replace Bar");
    return r;
}

FixtureRepo method_level_repo() {
    FixtureRepo r;
    r.write("src/Util.java", java_methods("Util", {"getX", "helper", "keep"}, {"count"}));
    r.write("src/Ext.kt", kotlin_functions("Ext", {"a"})).commit("init");
    r.write("src/Util.java", java_methods("Util", {"helper", "keep"}, {"count"}));
    r.write("src/Ext.kt", kotlin_functions("Ext", {"a", "computeX"})).commit("move getX");
    r.write("src/Util.java", java_methods("Util", {"keep"}, {"count"}));
    r.write("src/Ext.kt", kotlin_functions("Ext", {"a", "computeX", "helper"})).commit("move helper");
    r.write("src/Util.java", java_methods("Util", {"keep"}));
    r.write("src/Ext.kt", kotlin_functions("Ext", {"a", "computeX", "helper", "extra"})).commit("drop field");
    return r;
}

FixtureRepo update_insert_repo() {
    FixtureRepo r;
    r.write("src/Legacy.java", java_methods("Legacy", {"alpha", "beta", "gamma", "delta"}));
    r.write("src/Old.kt", kotlin_functions("Old", {"one"})).commit("init");
    r.write("src/Legacy.java", java_methods("Legacy", {"alpha", "gamma", "delta"}));
    r.write("src/Beta.kt", kotlin_functions("Beta", {"beta"})).commit("extract beta");
    r.write("src/Legacy.java", java_methods("Legacy", {"gamma", "delta"})).commit("drop alpha");
    r.write("src/Legacy.java", java_methods("Legacy", {"delta"}));
    r.write("src/Old.kt", kotlin_functions("Old", {"one", "gammaK"}));
    r.write("src/Gamma.kt", kotlin_functions("Gamma", {"gamma"})).commit("extract gamma");
    return r;
}

FixtureRepo trend_repo(std::size_t java_after, std::size_t kotlin_after) {
    FixtureRepo r;
    r.write("src/Main.java", java_class("Main", 20)).commit("java");
    r.write("src/Main.kt", kotlin_class("Main", 10)).commit("kotlin");
    for (int i = 2; i <= 11; ++i) r.write("NOTES.md", "rev " + std::to_string(i) + "\n").commit("notes");
    r.write("src/Main.java", java_class("Main", java_after)).write("src/Main.kt", kotlin_class("Main", kotlin_after));
    r.write("NOTES.md", "rev 12\n").commit("latest");
    return r;
}

const std::string kUnitTest = "app/src/test/java/com/x/ExampleUnitTest.java";
const std::string kAppTest = "app/src/androidTest/java/com/x/ApplicationTest.java";

FixtureRepo generated_kotlin_only_repo() {
    FixtureRepo r;
    r.write("app/src/main/java/com/x/MainActivity.kt", kotlin_class("MainActivity", 12));
    r.write(kUnitTest, java_class("ExampleUnitTest", 8)).write(kAppTest, java_class("ApplicationTest", 7));
    r.commit("new project");
    r.write("app/src/main/java/com/x/MainActivity.kt", kotlin_class("MainActivity", 15)).commit("work");
    return r;
}

FixtureRepo generated_migrated_repo() {
    FixtureRepo r;
    r.write("app/src/main/java/com/x/MainActivity.java", java_class("MainActivity", 10));
    r.write("app/src/main/java/com/x/Util.java", java_class("Util", 6));
    r.write(kUnitTest, java_class("ExampleUnitTest", 8)).write(kAppTest, java_class("ApplicationTest", 7));
    r.commit("new project");
    r.remove("app/src/main/java/com/x/MainActivity.java");
    r.write("app/src/main/java/com/x/MainActivity.kt", kotlin_class("MainActivity", 9)).commit("convert activity");
    r.write(kAppTest, java_class("ApplicationTest", 9)).commit("real instrumentation test");
    r.remove("app/src/main/java/com/x/Util.java").remove(kAppTest);
    r.write("app/src/main/java/com/x/Util.kt", kotlin_class("Util", 5)).commit("convert util");
    return r;
}

FixtureRepo merge_repo() {
    FixtureRepo r;
    const int root = r.write("src/App.java", java_class("App", 8)).commit("init");
    r.branch("feature", root);
    r.write("src/Side.kt", kotlin_class("Side", 6)).commit("side");
    const int side = r.write("src/Side.kt", kotlin_class("Side", 7)).commit("side 2");
    r.branch("main");
    r.write("src/App.java", java_class("App", 9)).commit("main work");
    r.write("src/Side.kt", kotlin_class("Side", 7)).commit("merge feature", {side});
    return r;
}

FixtureRepo mixed_start_repo() {
    FixtureRepo r;
    r.write("A.java", java_class("A", 6)).write("B.kt", kotlin_class("B", 5)).commit("both");
    r.remove("A.java").write("A.kt", kotlin_class("A", 5)).commit("convert A");
    return r;
}

FixtureRepo java_only_repo() {
    FixtureRepo r;
    r.write("A.java", java_class("A", 6)).commit("init");
    r.write("A.java", java_class("A", 7)).commit("edit");
    return r;
}

// ---- expectations ------------------------------------------------------------

std::vector<Fixture> build_suite() {
    std::vector<Fixture> s;

    {
        Fixture f{"one_step", one_step_repo};
        f.commits = 4;
        f.status = AppStatus::FullyMigratedJ2K;
        f.interval = ExpectedInterval{2, 2, 1, Rational(1, 4), MigrationClass::OneStep};
        f.proportion = Rational(1);
        f.events = {file_event(2, "A.java", "A.kt", "A"), file_event(2, "B.java", "B.kt", "B")};
        f.trends = {{trend(FK, 2, 15, 20, Rational(1), Rational(1), Up, Eq),
                     trend(RC, 3, 20, 20, Rational(1), Rational(1), Eq, Eq)}};
        f.sloc = {{16, 0}, {18, 0}, {0, 15}, {0, 20}};
        s.push_back(f);
    }
    {
        Fixture f{"staggered", staggered_repo};
        f.commits = 6;
        f.status = AppStatus::FullyMigratedJ2K;
        f.interval = ExpectedInterval{1, 4, 4, Rational(2, 3), MigrationClass::Staggered};
        f.proportion = Rational(3, 4);
        f.events = {file_event(1, "A.java", "A.kt", "A"), file_event(3, "B.java", "B.kt", "B"),
                    file_event(4, "C.java", "C.kt", "C")};
        f.trends = {{trend(FK, 1, 7, 21, Rational(7, 23), Rational(1), Up, Up),
                     trend(RC, 5, 21, 21, Rational(1), Rational(1), Eq, Eq)}};
        f.sloc = {{24, 0}, {16, 7}, {20, 7}, {8, 16}, {0, 21}, {0, 21}};
        s.push_back(f);
    }
    {
        Fixture f{"anomalous", anomalous_repo};
        f.commits = 5;
        f.status = AppStatus::FullyMigratedJ2K;
        f.interval = ExpectedInterval{4, 2, -1, Rational(-1, 5), MigrationClass::Anomalous};
        f.trends = std::vector<ExpectedTrend>{};
        f.trends_error = ErrorCode::DegenerateHistory;
        f.sloc = {{10, 0}, {11, 0}, {0, 0}, {0, 0}, {0, 9}};
        s.push_back(f);
    }
    {
        Fixture f{"directory_moved", directory_moved_repo};
        f.commits = 4;
        f.status = AppStatus::FullyMigratedJ2K;
        f.interval = ExpectedInterval{1, 3, 3, Rational(3, 4), MigrationClass::Staggered};
        f.proportion = Rational(2, 3);
        f.events = {file_event(1, "app/src/main/java/com/x/Foo.java", "app/src/main/kotlin/com/x/Foo.kt", "Foo"),
                    file_event(2, "x/Baz.java", "x/Baz.kt", "Baz")};
        f.trends = {{trend(FK, 1, 5, 13, Rational(5, 21), Rational(1), Up, Up),
                     trend(RC, 3, 13, 13, Rational(1), Rational(1), Eq, Eq)}};
        f.sloc = {{22, 0}, {16, 5}, {6, 9}, {0, 13}};
        s.push_back(f);
    }
    {
        Fixture f{"method_level", method_level_repo};
        f.commits = 4;
        f.status = AppStatus::MixedLatest;
        f.events = {method_event(1, MigrationKind::MethodLevel, {"src/Util.java"}, {"src/Ext.kt"}, {"getX"},
                                 {"computeX"}),
                    method_event(2, MigrationKind::MethodLevel, {"src/Util.java"}, {"src/Ext.kt"}, {"helper"},
                                 {"helper"})};
        s.push_back(f);
    }
    {
        Fixture f{"method_level_name_matching", method_level_repo};
        f.configure = [](AnalysisConfig& c) { c.name_matching = true; };
        f.commits = 4;
        f.status = AppStatus::MixedLatest;
        f.events = {method_event(2, MigrationKind::MethodLevel, {"src/Util.java"}, {"src/Ext.kt"}, {"helper"},
                                 {"helper"})};
        s.push_back(f);
    }
    {
        Fixture f{"update_insert", update_insert_repo};
        f.commits = 4;
        f.status = AppStatus::MixedLatest;
        f.events = {method_event(1, MigrationKind::UpdateInsert, {"src/Legacy.java"}, {"src/Beta.kt"}, {"beta"},
                                 {"beta"}),
                    method_event(3, MigrationKind::MethodLevel, {"src/Legacy.java"}, {"src/Old.kt"}, {"gamma"},
                                 {"gammaK"}),
                    method_event(3, MigrationKind::UpdateInsert, {"src/Legacy.java"}, {"src/Gamma.kt"}, {"gamma"},
                                 {"gamma"})};
        s.push_back(f);
    }

    // Kotlin/Java sLOC move from (10, 20) at the first Kotlin commit to the
    // values below in the latest commit; the Recent baseline (index 11)
    // still holds the first-Kotlin values.
    struct Cell {
        const char* name;
        std::size_t java;
        std::size_t kotlin;
        Direction amount;
        Direction proportion;
    };
    const Cell cells[] = {
        {"trend_up_up", 20, 20, Up, Up},           {"trend_up_down", 60, 12, Up, Down},
        {"trend_up_equal", 40, 20, Up, Eq},        {"trend_down_up", 4, 8, Down, Up},
        {"trend_down_down", 20, 5, Down, Down},    {"trend_down_equal", 10, 5, Down, Eq},
        {"trend_equal_up", 10, 10, Eq, Up},        {"trend_equal_down", 30, 10, Eq, Down},
        {"trend_equal_equal", 20, 10, Eq, Eq},
    };
    for (const auto& c : cells) {
        const std::size_t java = c.java;
        const std::size_t kotlin = c.kotlin;
        Fixture f{c.name, [java, kotlin] { return trend_repo(java, kotlin); }};
        f.commits = 13;
        f.status = AppStatus::MixedLatest;
        const Rational base(10, 30);
        const Rational latest(static_cast<std::int64_t>(kotlin), static_cast<std::int64_t>(kotlin + java));
        f.trends = {{trend(FK, 1, 10, kotlin, base, latest, c.amount, c.proportion),
                     trend(RC, 11, 10, kotlin, base, latest, c.amount, c.proportion)}};
        s.push_back(f);
    }

    {
        Fixture f{"generated_tests_kotlin_only", generated_kotlin_only_repo};
        f.commits = 2;
        f.status = AppStatus::KotlinOnlyHistory;
        f.excluded = {kAppTest, kUnitTest};
        f.trends = {{trend(FK, 0, 12, 15, Rational(1), Rational(1), Up, Eq),
                     trend(RC, 1, 15, 15, Rational(1), Rational(1), Eq, Eq)}};
        f.sloc = {{0, 12}, {0, 15}};
        s.push_back(f);
    }
    {
        Fixture f{"generated_tests_migrated", generated_migrated_repo};
        f.commits = 4;
        f.status = AppStatus::FullyMigratedJ2K;
        f.interval = ExpectedInterval{1, 3, 3, Rational(3, 4), MigrationClass::Staggered};
        f.proportion = Rational(2, 3);
        f.events = {file_event(1, "app/src/main/java/com/x/MainActivity.java",
                               "app/src/main/java/com/x/MainActivity.kt", "MainActivity"),
                    file_event(3, "app/src/main/java/com/x/Util.java", "app/src/main/java/com/x/Util.kt", "Util")};
        f.excluded = {kUnitTest};
        f.trends = {{trend(FK, 1, 9, 14, Rational(9, 22), Rational(1), Up, Up),
                     trend(RC, 3, 14, 14, Rational(1), Rational(1), Eq, Eq)}};
        f.sloc = {{23, 0}, {13, 9}, {15, 9}, {0, 14}};
        s.push_back(f);
    }
    {
        Fixture f{"generated_tests_disabled", generated_migrated_repo};
        f.configure = [](AnalysisConfig& c) { c.exclude_generated_tests = false; };
        f.commits = 4;
        f.status = AppStatus::MixedLatest;
        f.events = {file_event(1, "app/src/main/java/com/x/MainActivity.java",
                               "app/src/main/java/com/x/MainActivity.kt", "MainActivity"),
                    file_event(3, "app/src/main/java/com/x/Util.java", "app/src/main/java/com/x/Util.kt", "Util")};
        f.trends = {{trend(FK, 1, 9, 14, Rational(3, 10), Rational(7, 11), Up, Up),
                     trend(RC, 3, 14, 14, Rational(7, 11), Rational(7, 11), Eq, Eq)}};
        f.sloc = {{31, 0}, {21, 9}, {23, 9}, {8, 14}};
        s.push_back(f);
    }
    {
        Fixture f{"merge_first_parent", merge_repo};
        f.commits = 3;
        f.status = AppStatus::MixedLatest;
        f.trends = std::vector<ExpectedTrend>{};
        f.trends_error = ErrorCode::DegenerateHistory;
        f.sloc = {{8, 0}, {9, 0}, {9, 7}};
        s.push_back(f);
    }
    {
        Fixture f{"mixed_start", mixed_start_repo};
        f.commits = 2;
        f.status = AppStatus::Other;
        f.events = {file_event(1, "A.java", "A.kt", "A")};
        s.push_back(f);
    }
    {
        Fixture f{"java_only", java_only_repo};
        f.commits = 2;
        f.status = AppStatus::JavaOnlyLatest;
        f.trends = std::vector<ExpectedTrend>{};
        f.trends_error = ErrorCode::NoKotlinHistory;
        s.push_back(f);
    }
    {
        Fixture f{"worked_example_110", worked_example_repo};
        f.commits = 110;
        f.status = AppStatus::MixedLatest;
        // Kotlin sLOC is 5 at index 9 and grows by one per commit.
        f.trends = {{trend(FK, 9, 5, 105, Rational(5, 25), Rational(105, 125), Up, Up),
                     trend(RC, 99, 95, 105, Rational(95, 115), Rational(105, 125), Up, Up)}};
        s.push_back(f);
    }
    {
        Fixture f{"proportion_93", proportion_repo};
        f.commits = 100;
        f.status = AppStatus::FullyMigratedJ2K;
        f.interval = ExpectedInterval{1, 93, 93, Rational(93, 100), MigrationClass::Staggered};
        f.proportion = Rational(15, 93);
        for (std::size_t j = 0; j < 15; ++j) {
            const std::string n = "F" + std::to_string(j);
            f.events.push_back(file_event(2 + 6 * j, "src/" + n + ".java", "src/" + n + ".kt", n));
        }
        s.push_back(f);
    }
    return s;
}

std::string describe(const MigrationEvent& e) {
    std::ostringstream out;
    out << "#" << e.order_index << " " << to_string(e.kind) << " java=[";
    for (const auto& p : e.java_paths) out << p << " ";
    out << "] kotlin=[";
    for (const auto& p : e.kotlin_paths) out << p << " ";
    out << "] basename=" << e.basename.value_or("-") << " deleted=[";
    for (const auto& p : e.deleted_java_methods) out << p << " ";
    out << "] inserted=[";
    for (const auto& p : e.inserted_kotlin_methods) out << p << " ";
    out << "]";
    return out.str();
}

}  // namespace

FixtureRepo worked_example_repo() {
    FixtureRepo r;
    for (int i = 0; i < 9; ++i) {
        r.write("src/Main.java", java_class("Main", 20) + "// rev " + std::to_string(i) + "\n").commit("java");
    }
    for (std::size_t i = 9; i < 110; ++i) r.write("src/Main.kt", kotlin_class("Main", 5 + (i - 9))).commit("kotlin");
    return r;
}

FixtureRepo proportion_repo() {
    FixtureRepo r;
    r.write("src/Core.java", java_class("Core", 10));
    for (int j = 0; j < 15; ++j) r.write("src/F" + std::to_string(j) + ".java", java_class("F" + std::to_string(j), 4));
    r.commit("java app");
    r.write("src/Start.kt", kotlin_class("Start", 4)).commit("first kotlin");
    for (int i = 2; i <= 92; ++i) {
        if ((i - 2) % 6 == 0 && (i - 2) / 6 < 15) {
            const std::string n = "F" + std::to_string((i - 2) / 6);
            r.remove("src/" + n + ".java").write("src/" + n + ".kt", kotlin_class(n, 4)).commit("migrate " + n);
        } else {
            r.write("src/Core.java", java_class("Core", 10) + "// rev " + std::to_string(i) + "\n").commit("core");
        }
    }
    r.remove("src/Core.java").write("src/Start.kt", kotlin_class("Start", 5)).commit("drop core");
    for (int i = 94; i < 100; ++i) r.write("src/Start.kt", kotlin_class("Start", static_cast<std::size_t>(i - 88))).commit("kt");
    return r;
}

FixtureRepo synthetic_repo(std::size_t commits, std::size_t files, unsigned seed) {
    std::mt19937 rng(seed);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    struct Source {
        std::string path;
        std::string name;
        bool kotlin;
        std::vector<std::string> methods;
        int next = 0;
    };
    std::vector<Source> sources;
    auto render = [](const Source& s) {
        return s.kotlin ? kotlin_functions(s.name, s.methods, {"state"}) : java_methods(s.name, s.methods, {"state"});
    };
    auto make = [&](bool kotlin) {
        Source s;
        const std::size_t id = sources.size();
        s.name = "C" + std::to_string(id);
        s.path = "app/src/main/java/com/acme/p" + std::to_string(id % 12) + "/" + s.name + (kotlin ? ".kt" : ".java");
        s.kotlin = kotlin;
        for (int m = 0; m < 3; ++m) s.methods.push_back(s.name + "m" + std::to_string(s.next++));
        return s;
    };
    FixtureRepo r;
    const std::size_t initial = files * 3 / 4;
    for (std::size_t i = 0; i < initial; ++i) {
        sources.push_back(make(i % 10 == 0));
        r.write(sources.back().path, render(sources.back()));
    }
    r.commit("initial import");

    auto of = [&](bool kotlin) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < sources.size(); ++i) {
            if (sources[i].kotlin == kotlin) out.push_back(i);
        }
        return out;
    };
    auto edit = [&](Source& s) {
        if (!s.methods.empty() && rng() % 3 == 0) {
            s.methods.erase(s.methods.begin() + static_cast<long>(pick(s.methods.size())));
        } else {
            s.methods.push_back(s.name + "m" + std::to_string(s.next++));
        }
        r.write(s.path, render(s));
    };
    for (std::size_t c = 1; c < commits; ++c) {
        const auto java = of(false);
        const auto kotlin = of(true);
        const unsigned roll = rng() % 100;
        if (roll < 45 && !java.empty()) {
            edit(sources[java[pick(java.size())]]);
        } else if (roll < 60 && !java.empty() && !kotlin.empty()) {
            edit(sources[java[pick(java.size())]]);
            edit(sources[kotlin[pick(kotlin.size())]]);
        } else if (roll < 70 && !java.empty()) {
            Source& s = sources[java[pick(java.size())]];
            r.remove(s.path);
            s.path = s.path.substr(0, s.path.size() - 4) + "kt";
            s.kotlin = true;
            r.write(s.path, render(s));
        } else if (roll < 75 && sources.size() < files) {
            sources.push_back(make(rng() % 2 == 0));
            r.write(sources.back().path, render(sources.back()));
        } else if (roll < 95 && !kotlin.empty()) {
            edit(sources[kotlin[pick(kotlin.size())]]);
        } else {
            r.write("README.md", "revision " + std::to_string(c) + "\n");
        }
        r.commit("change " + std::to_string(c));
    }
    return r;
}

const std::vector<Fixture>& fixture_suite() {
    static const std::vector<Fixture> suite = build_suite();
    return suite;
}

const Fixture& fixture(const std::string& name) {
    for (const auto& f : fixture_suite()) {
        if (f.name == name) return f;
    }
    throw std::out_of_range("no fixture named " + name);
}

FixtureRun run_fixture(const Fixture& f) {
    FixtureRun run;
    run.repo = std::make_unique<BuiltRepo>(f.repo());
    run.config.repo_path = run.repo->path();
    if (f.configure) f.configure(run.config);
    run.report = analyze(run.config);
    return run;
}

std::vector<std::string> check_fixture(const Fixture& f, const AnalysisReport& r) {
    std::vector<std::string> errors;
    auto fail = [&](const std::string& what) { errors.push_back(f.name + ": " + what); };

    if (r.commits.size() != f.commits) {
        fail("commit count " + std::to_string(r.commits.size()) + " != " + std::to_string(f.commits));
        return errors;
    }
    if (r.status != f.status) {
        fail(std::string("status ") + std::string(to_string(r.status)) + " != " + std::string(to_string(f.status)));
    }

    if (f.interval.has_value() != r.interval.has_value()) {
        fail("interval presence differs");
    } else if (f.interval) {
        const auto& e = *f.interval;
        const auto& a = *r.interval;
        if (a.first_kotlin_index != e.first_kotlin || a.last_java_index != e.last_java || a.length != e.length ||
            a.normalized_length != e.normalized || classify_interval(a) != e.cls) {
            fail("interval (" + std::to_string(a.first_kotlin_index) + ", " + std::to_string(a.last_java_index) +
                 ", " + std::to_string(a.length) + ", " + a.normalized_length.to_string() + ", " +
                 std::string(to_string(classify_interval(a))) + ")");
        }
    }
    if (f.proportion != r.file_migration_proportion) {
        fail("proportion " + (r.file_migration_proportion ? r.file_migration_proportion->to_string() : "absent"));
    }

    std::vector<MigrationEvent> expected;
    for (const auto& e : f.events) {
        MigrationEvent m;
        m.commit_id = r.commits[e.index].id;
        m.order_index = e.index;
        m.kind = e.kind;
        m.java_paths = e.java_paths;
        m.kotlin_paths = e.kotlin_paths;
        m.basename = e.basename;
        m.deleted_java_methods = e.deleted;
        m.inserted_kotlin_methods = e.inserted;
        expected.push_back(std::move(m));
    }
    const auto actual = r.all_events();
    if (actual != expected) {
        std::string msg = "events differ; got:";
        for (const auto& e : actual) msg += "\n    " + describe(e);
        msg += "\n  want:";
        for (const auto& e : expected) msg += "\n    " + describe(e);
        fail(msg);
    }

    if (f.trends) {
        if (r.trends.size() != f.trends->size()) {
            fail("trend count " + std::to_string(r.trends.size()));
        } else {
            for (std::size_t i = 0; i < r.trends.size(); ++i) {
                const auto& a = r.trends[i];
                const auto& e = (*f.trends)[i];
                if (a.baseline != e.baseline || a.baseline_index != e.baseline_index ||
                    a.baseline_kotlin_sloc != e.baseline_kotlin_sloc || a.latest_kotlin_sloc != e.latest_kotlin_sloc ||
                    a.baseline_proportion != e.baseline_proportion || a.latest_proportion != e.latest_proportion ||
                    a.amount_direction != e.amount || a.proportion_direction != e.proportion ||
                    a.latest_index != r.commits.size() - 1 || a.baseline_commit_id != r.commits[e.baseline_index].id) {
                    fail(std::string("trend ") + std::string(to_string(a.baseline)) + " at " +
                         std::to_string(a.baseline_index) + ": " + std::to_string(a.baseline_kotlin_sloc) + "->" +
                         std::to_string(a.latest_kotlin_sloc) + " " + a.baseline_proportion.to_string() + "->" +
                         a.latest_proportion.to_string() + " " + std::string(to_string(a.amount_direction)) + "/" +
                         std::string(to_string(a.proportion_direction)));
                }
            }
        }
        if (r.trends_error != f.trends_error) fail("trends error differs");
    }

    if (r.excluded_paths != f.excluded) fail("excluded paths differ");

    if (!f.sloc.empty()) {
        for (std::size_t i = 0; i < f.sloc.size() && i < r.snapshots.size(); ++i) {
            const auto& s = r.snapshots[i];
            if (s.sloc[Language::Java] != f.sloc[i].first || s.sloc[Language::Kotlin] != f.sloc[i].second) {
                fail("sLOC at #" + std::to_string(i) + " is (" + std::to_string(s.sloc[Language::Java]) + ", " +
                     std::to_string(s.sloc[Language::Kotlin]) + ")");
            }
        }
    }
    return errors;
}

}  // namespace j2k::testing

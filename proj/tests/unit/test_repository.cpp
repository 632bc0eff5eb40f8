#include <doctest.h>

#include "fixture_repo.hpp"
#include "fixtures.hpp"
#include "git_oracle.hpp"
#include "sources.hpp"

#include "j2k/error.hpp"
#include "j2k/repository.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

using namespace j2k;
using namespace j2k::testing;
namespace fs = std::filesystem;

namespace {

ErrorCode open_error(const fs::path& p) {
    try {
        Repository::open(p);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("open succeeded for " << p);
    return ErrorCode::InvalidConfig;
}

// Applies every change to a path set, checking the per-kind invariants.
std::set<std::string> replay(const std::vector<CommitRecord>& commits) {
    std::set<std::string> paths;
    for (const auto& c : commits) {
        for (const auto& ch : c.changes) {
            switch (ch.kind) {
                case ChangeKind::Added:
                    CHECK_FALSE(ch.old_path);
                    REQUIRE(ch.new_path);
                    CHECK(ch.new_content);
                    CHECK(paths.insert(*ch.new_path).second);
                    break;
                case ChangeKind::Removed:
                    CHECK_FALSE(ch.new_path);
                    REQUIRE(ch.old_path);
                    CHECK(paths.erase(*ch.old_path) == 1);
                    break;
                case ChangeKind::Modified:
                    REQUIRE(ch.old_path);
                    REQUIRE(ch.new_path);
                    CHECK(*ch.old_path == *ch.new_path);
                    CHECK(ch.old_content->load() != ch.new_content->load());
                    CHECK(paths.count(*ch.new_path) == 1);
                    break;
                case ChangeKind::Renamed:
                    REQUIRE(ch.old_path);
                    REQUIRE(ch.new_path);
                    CHECK(*ch.old_path != *ch.new_path);
                    CHECK(paths.erase(*ch.old_path) == 1);
                    CHECK(paths.insert(*ch.new_path).second);
                    break;
            }
            CHECK(ch.path().find('\\') == std::string::npos);
            CHECK(ch.path().front() != '/');
        }
    }
    return paths;
}

std::set<std::string> keys(const std::map<std::string, std::string>& m) {
    std::set<std::string> out;
    for (const auto& [k, v] : m) out.insert(k);
    return out;
}

}  // namespace

TEST_SUITE("repository") {

TEST_CASE("open rejects what is not a repository root") {
    TempDir empty;
    CHECK(open_error(empty.path()) == ErrorCode::NotARepository);
    CHECK(open_error(empty.path() / "missing") == ErrorCode::NotARepository);
    std::ofstream(empty.path() / "file.txt") << "x";
    CHECK(open_error(empty.path() / "file.txt") == ErrorCode::NotARepository);

    FixtureRepo r;
    r.write("src/A.java", java_class("A", 4)).commit("init");
    BuiltRepo built(r);
    fs::create_directories(built.path() / "src");
    CHECK(open_error(built.path() / "src") == ErrorCode::NotARepository);
}

TEST_CASE("single root commit") {
    FixtureRepo r;
    r.author({"Grace", "grace@example.org"});
    r.write("A.java", "class A {}\n").commit("first");
    BuiltRepo built(r);
    const auto commits = Repository::open(built.path()).walk_history();
    REQUIRE(commits.size() == 1);
    const auto& c = commits[0];
    CHECK(c.order_index == 0);
    CHECK(c.id.size() == 40);
    CHECK(c.parent_ids.empty());
    CHECK(c.author_name == "Grace");
    CHECK(c.author_email == "grace@example.org");
    CHECK(c.message == "first");
    CHECK(c.timestamp == 1600000060);
    REQUIRE(c.changes.size() == 1);
    CHECK(c.changes[0].kind == ChangeKind::Added);
    CHECK(*c.changes[0].new_path == "A.java");
    CHECK_FALSE(c.changes[0].old_path);
    CHECK(c.changes[0].new_content->load() == "class A {}\n");
}

TEST_CASE("linear history is oldest first with contiguous indices") {
    FixtureRepo r;
    r.write("a.txt", "1\n").commit("one");
    r.write("a.txt", "2\n").commit("two");
    r.write("b.txt", "3\n").commit("three");
    BuiltRepo built(r);
    const auto commits = Repository::open(built.path()).walk_history();
    REQUIRE(commits.size() == 3);
    const auto oracle = first_parent_commits(built.path());
    for (std::size_t i = 0; i < commits.size(); ++i) {
        CHECK(commits[i].order_index == i);
        CHECK(commits[i].id == oracle[i]);
        if (i > 0) CHECK(commits[i].parent_ids == std::vector<std::string>{commits[i - 1].id});
    }
    CHECK(commits[1].changes[0].kind == ChangeKind::Modified);
    CHECK(commits[1].changes[0].old_content->load() == "1\n");
    CHECK(commits[1].changes[0].new_content->load() == "2\n");
}

TEST_CASE("merge commits are diffed against the first parent only") {
    const auto& f = fixture("merge_first_parent");
    BuiltRepo built(f.repo());
    const auto commits = Repository::open(built.path()).walk_history();
    const auto oracle = first_parent_commits(built.path());
    REQUIRE(commits.size() == oracle.size());
    REQUIRE(commits.size() == 3);
    for (std::size_t i = 0; i < commits.size(); ++i) CHECK(commits[i].id == oracle[i]);

    const auto& merge = commits[2];
    CHECK(merge.parent_ids.size() == 2);
    CHECK(merge.parent_ids[0] == commits[1].id);
    const auto raw = raw_diff(built.path(), merge.id);
    REQUIRE(merge.changes.size() == 1);
    CHECK(merge.changes[0].kind == ChangeKind::Added);
    CHECK(raw.added == std::set<std::string>{*merge.changes[0].new_path});
    // The side branch commits never show up on their own.
    const auto side = git(built.path(), {"rev-parse", "feature"});
    for (const auto& c : commits) CHECK(c.id + "\n" != side);
}

TEST_CASE("branch option selects another head") {
    const auto& f = fixture("merge_first_parent");
    BuiltRepo built(f.repo());
    const auto repo = Repository::open(built.path());
    WalkOptions options;
    options.branch = "feature";
    const auto commits = repo.walk_history(options);
    CHECK(commits.size() == 3);
    CHECK(commits.back().id == first_parent_commits(built.path(), "feature").back());
    options.branch = "no-such-branch";
    CHECK_THROWS_AS(repo.walk_history(options), Error);
}

TEST_CASE("unborn branch walks nothing") {
    TempDir dir;
    git(dir.path(), {"init", "-q"});
    const auto repo = Repository::open(dir.path());
    CHECK_FALSE(repo.resolve_tip());
    CHECK(repo.walk_history().empty());
}

TEST_CASE("bare repositories are accepted") {
    BuiltRepo built(fixture("staggered").repo(), true);
    const auto commits = Repository::open(built.path()).walk_history();
    CHECK(commits.size() == 6);
}

TEST_CASE("renames keep their extension, cross-language pairs split") {
    FixtureRepo r;
    const std::string body = java_class("Shared", 30);
    r.write("old/Shared.java", body).write("Conv.java", java_class("Conv", 30)).commit("init");
    r.rename("old/Shared.java", "new/Shared.java").commit("move");
    // Identical bytes under a new extension: git alone would call this a rename.
    r.remove("Conv.java").write("Conv.kt", java_class("Conv", 30)).commit("convert");
    BuiltRepo built(r);
    const auto commits = Repository::open(built.path()).walk_history();
    REQUIRE(commits.size() == 3);
    REQUIRE(commits[1].changes.size() == 1);
    CHECK(commits[1].changes[0].kind == ChangeKind::Renamed);
    CHECK(*commits[1].changes[0].old_path == "old/Shared.java");
    CHECK(*commits[1].changes[0].new_path == "new/Shared.java");
    CHECK(commits[1].changes[0].new_content->load() == body);

    std::map<std::string, ChangeKind> kinds;
    for (const auto& ch : commits[2].changes) kinds[ch.path()] = ch.kind;
    CHECK(kinds == std::map<std::string, ChangeKind>{{"Conv.java", ChangeKind::Removed},
                                                     {"Conv.kt", ChangeKind::Added}});
}

TEST_CASE("change invariants and final tree on every fixture") {
    for (const auto& f : fixture_suite()) {
        CAPTURE(f.name);
        const FixtureRepo r = f.repo();
        BuiltRepo built(r);
        const auto commits = Repository::open(built.path()).walk_history();
        const auto paths = replay(commits);
        CHECK(paths == keys(r.files()));
    }
}

TEST_CASE("walking twice yields identical records") {
    BuiltRepo built(fixture("update_insert").repo());
    const auto repo = Repository::open(built.path());
    const auto a = repo.walk_history();
    const auto b = Repository::open(built.path()).walk_history();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].message == b[i].message);
        REQUIRE(a[i].changes.size() == b[i].changes.size());
        for (std::size_t k = 0; k < a[i].changes.size(); ++k) {
            CHECK(a[i].changes[k].kind == b[i].changes[k].kind);
            CHECK(a[i].changes[k].old_path == b[i].changes[k].old_path);
            CHECK(a[i].changes[k].new_path == b[i].changes[k].new_path);
            CHECK(a[i].changes[k].new_content == b[i].changes[k].new_content);
        }
    }
}

TEST_CASE("binary content is returned byte for byte") {
    std::string bytes("\x89PNG\0\0\x01\xff", 8);
    FixtureRepo r;
    r.write("icon.png", bytes).commit("icon");
    BuiltRepo built(r);
    const auto commits = Repository::open(built.path()).walk_history();
    const auto loaded = commits[0].changes[0].new_content->load();
    CHECK(loaded == bytes);
    CHECK(looks_binary(loaded));
    CHECK_FALSE(looks_binary("plain text"));
    CHECK_FALSE(looks_binary(std::string(8000, 'a') + std::string(1, '\0')));
}

TEST_CASE("missing objects surface as CorruptHistory") {
    FixtureRepo r;
    r.write("A.java", "class A {}\n").commit("one");
    r.write("A.java", "class A { int x; }\n").commit("two");
    BuiltRepo built(r);
    // Explode the pack into loose objects, then delete one blob.
    const fs::path objects = built.path() / ".git" / "objects";
    TempDir hold;
    for (const auto& e : fs::directory_iterator(objects / "pack")) fs::rename(e.path(), hold.path() / e.path().filename());
    for (const auto& e : fs::directory_iterator(hold.path())) {
        if (e.path().extension() == ".pack") {
            std::ifstream in(e.path(), std::ios::binary);
            std::string pack((std::istreambuf_iterator<char>(in)), {});
            git(built.path(), {"unpack-objects", "-q"}, pack);
        }
    }
    const std::string blob = git(built.path(), {"rev-parse", "HEAD:A.java"}).substr(0, 40);
    fs::remove(objects / blob.substr(0, 2) / blob.substr(2));

    bool corrupt = false;
    try {
        for (const auto& c : Repository::open(built.path()).walk_history()) {
            for (const auto& ch : c.changes) {
                if (ch.new_content) ch.new_content->load();
            }
        }
    } catch (const Error& e) {
        corrupt = e.code() == ErrorCode::CorruptHistory;
    }
    CHECK(corrupt);
}

TEST_CASE("path helpers") {
    CHECK(path_extension("a/b.c/Foo.java") == "java");
    CHECK(path_extension("a/b.c/Makefile").empty());
    CHECK(path_basename("a/b/Foo.kt") == "Foo.kt");
    CHECK(path_basename("Foo.kt") == "Foo.kt");
    CHECK(path_dirname("a/b/Foo.kt") == "a/b");
    CHECK(path_dirname("Foo.kt").empty());
}

}

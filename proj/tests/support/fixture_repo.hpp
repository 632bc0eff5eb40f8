#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace j2k::testing {

/// Temporary directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& prefix = "j2k-test");
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

struct Author {
    std::string name = "Ada Dev";
    std::string email = "ada@example.com";
};

/// Scripted git history built with `git fast-import`. Commit times are fixed
/// so repeated builds produce the same hashes.
class FixtureRepo {
public:
    FixtureRepo();

    /// Subsequent commits go to this branch. A new branch starts at `from`
    /// (a mark returned by commit()) or as an orphan when omitted.
    FixtureRepo& branch(const std::string& name, std::optional<int> from = std::nullopt);

    FixtureRepo& write(const std::string& path, std::string content);
    FixtureRepo& remove(const std::string& path);
    FixtureRepo& rename(const std::string& from, const std::string& to);
    FixtureRepo& author(Author a);

    /// Commits the staged operations on the current branch and returns the
    /// commit's mark. `merge` adds further parents.
    int commit(const std::string& message, const std::vector<int>& merge = {});

    /// Imports everything into a fresh repository at `dir` with `main`
    /// checked out as HEAD (bare when requested).
    void build(const std::filesystem::path& dir, bool bare = false) const;

    std::size_t commit_count() const { return commits_; }
    /// Current file contents of the branch head, as tracked by the builder.
    const std::map<std::string, std::string>& files(const std::string& branch = "main") const;

private:
    struct Op {
        enum Kind { Write, Remove, Rename } kind;
        std::string path;
        std::string content;
        std::string to;
    };

    std::string stream_;
    std::vector<Op> staged_;
    std::string branch_ = "main";
    std::optional<int> pending_from_;
    std::map<std::string, std::map<std::string, std::string>> trees_;
    std::map<int, std::map<std::string, std::string>> tree_at_;
    Author author_;
    int next_mark_ = 1;
    std::size_t commits_ = 0;
};

/// Builds `repo` in a temporary directory that lives as long as the object.
class BuiltRepo {
public:
    explicit BuiltRepo(const FixtureRepo& repo, bool bare = false);
    const std::filesystem::path& path() const { return dir_.path(); }

private:
    TempDir dir_;
};

/// Runs git with the given arguments in `repo` and returns stdout. Throws
/// std::runtime_error on a nonzero exit.
std::string git(const std::filesystem::path& repo, const std::vector<std::string>& args,
                const std::string& input = {});

}  // namespace j2k::testing

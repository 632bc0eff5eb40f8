#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace j2k {

class BlobStore;

/// Lazily resolvable reference to one blob in the object store.
class ContentHandle {
public:
    ContentHandle(std::shared_ptr<BlobStore> store, std::string blob_id)
        : store_(std::move(store)), blob_id_(std::move(blob_id)) {}

    const std::string& blob_id() const { return blob_id_; }
    /// Exact bytes of this file version. Throws Error{CorruptHistory} if unreadable.
    std::string load() const;

    friend bool operator==(const ContentHandle& a, const ContentHandle& b) {
        return a.blob_id_ == b.blob_id_;
    }

private:
    std::shared_ptr<BlobStore> store_;
    std::string blob_id_;
};

enum class ChangeKind { Added, Removed, Modified, Renamed };

std::string_view to_string(ChangeKind kind);

struct FileChange {
    ChangeKind kind = ChangeKind::Modified;
    std::optional<std::string> old_path;
    std::optional<std::string> new_path;
    std::optional<ContentHandle> old_content;
    std::optional<ContentHandle> new_content;

    /// new_path when present, otherwise old_path.
    const std::string& path() const { return new_path ? *new_path : *old_path; }
};

struct CommitRecord {
    std::string id;
    std::vector<std::string> parent_ids;
    std::size_t order_index = 0;
    std::int64_t timestamp = 0;
    std::string author_name;
    std::string author_email;
    std::string message;
    std::vector<FileChange> changes;
};

struct WalkOptions {
    /// Branch, tag or revision to walk; the checked-out HEAD when empty.
    std::optional<std::string> branch;
    /// Minimum content similarity, in percent, for git to report a rename.
    int rename_similarity = 60;
};

/// Read-only view of a local git repository. All object access goes through
/// the `git` executable; nothing is ever written to the repository.
class Repository {
public:
    /// Throws Error{NotARepository} or Error{UnreadableRepository}.
    static Repository open(const std::filesystem::path& path);

    const std::filesystem::path& path() const { return path_; }

    /// Commit id the walk would start from, or nullopt for an unborn branch.
    std::optional<std::string> resolve_tip(const WalkOptions& options = {}) const;

    /// Commits oldest-first along the first-parent chain, each diffed against
    /// its first parent (the empty tree for the root).
    std::vector<CommitRecord> walk_history(const WalkOptions& options = {}) const;

private:
    Repository(std::filesystem::path path, std::shared_ptr<BlobStore> store)
        : path_(std::move(path)), store_(std::move(store)) {}

    std::filesystem::path path_;
    std::shared_ptr<BlobStore> store_;
};

/// NUL byte within the first 8000 bytes.
bool looks_binary(std::string_view content);

/// Text after the last '.' of the basename, empty when there is none.
std::string_view path_extension(std::string_view path);
std::string_view path_basename(std::string_view path);
std::string_view path_dirname(std::string_view path);

}  // namespace j2k

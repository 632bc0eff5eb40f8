#include "j2k/repository.hpp"

#include "j2k/error.hpp"
#include "j2k/process.hpp"

#include <algorithm>
#include <mutex>
#include <system_error>

namespace j2k {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotARepository: return "NotARepository";
        case ErrorCode::UnreadableRepository: return "UnreadableRepository";
        case ErrorCode::CorruptHistory: return "CorruptHistory";
        case ErrorCode::UndecodableContent: return "UndecodableContent";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::UndefinedForAnomalous: return "UndefinedForAnomalous";
        case ErrorCode::DegenerateHistory: return "DegenerateHistory";
        case ErrorCode::NoKotlinHistory: return "NoKotlinHistory";
        case ErrorCode::UnwritableOutput: return "UnwritableOutput";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

std::string_view to_string(ChangeKind kind) {
    switch (kind) {
        case ChangeKind::Added: return "Added";
        case ChangeKind::Removed: return "Removed";
        case ChangeKind::Modified: return "Modified";
        case ChangeKind::Renamed: return "Renamed";
    }
    return "Modified";
}

bool looks_binary(std::string_view content) {
    return content.substr(0, 8000).find('\0') != std::string_view::npos;
}

std::string_view path_basename(std::string_view path) {
    const auto slash = path.rfind('/');
    return slash == std::string_view::npos ? path : path.substr(slash + 1);
}

std::string_view path_dirname(std::string_view path) {
    const auto slash = path.rfind('/');
    return slash == std::string_view::npos ? std::string_view{} : path.substr(0, slash);
}

std::string_view path_extension(std::string_view path) {
    const auto base = path_basename(path);
    const auto dot = base.rfind('.');
    return dot == std::string_view::npos ? std::string_view{} : base.substr(dot + 1);
}

// Serializes access to one `git cat-file --batch` child.
class BlobStore {
public:
    explicit BlobStore(std::filesystem::path repo) : repo_(std::move(repo)) {}

    std::string read(const std::string& blob_id) {
        std::lock_guard lock(mutex_);
        if (!process_) {
            process_ = std::make_unique<PipedProcess>(
                std::vector<std::string>{"git", "-C", repo_.string(), "cat-file", "--batch"});
        }
        process_->write(blob_id);
        process_->write("\n");
        process_->flush();

        std::string header;
        if (!process_->read_line(header)) fail(blob_id);
        // "<id> <type> <size>" or "<id> missing"
        const auto last_space = header.rfind(' ');
        if (last_space == std::string::npos || header.ends_with(" missing")) fail(blob_id);
        std::size_t size = 0;
        try {
            size = std::stoull(header.substr(last_space + 1));
        } catch (const std::exception&) {
            fail(blob_id);
        }
        std::string content;
        std::string trailer;
        if (!process_->read_exact(size, content) || !process_->read_exact(1, trailer)) fail(blob_id);
        return content;
    }

private:
    [[noreturn]] void fail(const std::string& blob_id) {
        process_.reset();
        throw Error(ErrorCode::CorruptHistory, "cannot read object " + blob_id);
    }

    std::filesystem::path repo_;
    std::mutex mutex_;
    std::unique_ptr<PipedProcess> process_;
};

std::string ContentHandle::load() const {
    return store_->read(blob_id_);
}

namespace {

ProcessResult git(const std::filesystem::path& repo, std::vector<std::string> args,
                  std::string_view input = {}) {
    std::vector<std::string> argv{"git", "-C", repo.string(), "-c", "core.quotepath=off"};
    argv.insert(argv.end(), std::make_move_iterator(args.begin()), std::make_move_iterator(args.end()));
    return run_process(argv, input);
}

std::string trim_newline(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

bool is_hex_id(std::string_view s) {
    return s.size() == 40 && std::all_of(s.begin(), s.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
}

constexpr std::string_view kNullId = "0000000000000000000000000000000000000000";
constexpr std::string_view kGitlinkMode = "160000";

}  // namespace

Repository Repository::open(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_directory(path, ec)) {
        throw Error(ErrorCode::NotARepository, "not a directory: " + path.string());
    }
    const auto canonical = std::filesystem::canonical(path, ec);
    if (ec) throw Error(ErrorCode::UnreadableRepository, "cannot resolve " + path.string());

    ProcessResult probe;
    try {
        probe = git(canonical, {"rev-parse", "--is-bare-repository", "--absolute-git-dir"});
        if (probe.exit_code == 0 && probe.out.rfind("false", 0) == 0) {
            probe = git(canonical, {"rev-parse", "--is-bare-repository", "--show-toplevel"});
        }
    } catch (const std::system_error& e) {
        throw Error(ErrorCode::UnreadableRepository, std::string("cannot run git: ") + e.what());
    }
    if (probe.exit_code != 0) {
        throw Error(ErrorCode::NotARepository, "not a git repository: " + path.string());
    }
    // Second line: the git dir of a bare repository or the top level of a
    // work tree. Anything nested inside either is not a repository root.
    const std::string output = trim_newline(probe.out);
    const auto lines = split(output, '\n');
    if (lines.size() < 2 || std::filesystem::path(std::string(lines[1])) != canonical) {
        throw Error(ErrorCode::NotARepository, "not a git repository root: " + path.string());
    }
    return Repository(canonical, std::make_shared<BlobStore>(canonical));
}

std::optional<std::string> Repository::resolve_tip(const WalkOptions& options) const {
    const std::string rev = options.branch.value_or("HEAD");
    const auto result = git(path_, {"rev-parse", "--verify", "-q", rev + "^{commit}"});
    if (result.exit_code != 0) {
        if (options.branch) throw Error(ErrorCode::InvalidConfig, "unknown branch or revision: " + rev);
        return std::nullopt;
    }
    return trim_newline(result.out);
}

std::vector<CommitRecord> Repository::walk_history(const WalkOptions& options) const {
    const auto tip = resolve_tip(options);
    if (!tip) return {};

    const auto log = git(path_, {"log", "--first-parent", "--reverse", "-z", "--no-color",
                                 "--format=%H%x01%P%x01%at%x01%an%x01%ae%x01%B", *tip});
    if (log.exit_code != 0) {
        throw Error(ErrorCode::CorruptHistory, "git log failed: " + trim_newline(log.err));
    }

    std::vector<CommitRecord> commits;
    std::string_view out = log.out;
    if (!out.empty() && out.back() == '\0') out.remove_suffix(1);
    for (auto record : split(out, '\0')) {
        if (record.empty()) continue;
        const auto fields = split(record, '\x01');
        if (fields.size() < 6 || !is_hex_id(fields[0])) {
            throw Error(ErrorCode::CorruptHistory, "unparseable commit record");
        }
        CommitRecord c;
        c.id = std::string(fields[0]);
        for (auto p : split(fields[1], ' ')) {
            if (!p.empty()) c.parent_ids.emplace_back(p);
        }
        c.timestamp = std::stoll(std::string(fields[2]));
        c.author_name = std::string(fields[3]);
        c.author_email = std::string(fields[4]);
        // %B may itself contain \x01; rejoin the tail.
        std::string message(fields[5]);
        for (std::size_t i = 6; i < fields.size(); ++i) {
            message += '\x01';
            message += fields[i];
        }
        c.message = trim_newline(std::move(message));
        c.order_index = commits.size();
        commits.push_back(std::move(c));
    }

    std::string request;
    for (const auto& c : commits) {
        request += c.id;
        if (!c.parent_ids.empty()) {
            request += ' ';
            request += c.parent_ids.front();
        }
        request += '\n';
    }
    const auto diff = git(path_, {"diff-tree", "--stdin", "-r", "-z", "--no-abbrev", "--root",
                                  "--no-color", "--no-ext-diff", "--no-textconv",
                                  "-M" + std::to_string(options.rename_similarity) + "%"},
                          request);
    if (diff.exit_code != 0) {
        throw Error(ErrorCode::CorruptHistory, "git diff-tree failed: " + trim_newline(diff.err));
    }

    // Output is "<commit>\0" followed by raw entries, and nothing at all for
    // commits whose diff is empty.
    std::size_t cursor = 0;
    CommitRecord* current = nullptr;
    std::string_view diff_out = diff.out;
    if (!diff_out.empty() && diff_out.back() == '\0') diff_out.remove_suffix(1);
    const auto tokens = diff_out.empty() ? std::vector<std::string_view>{} : split(diff_out, '\0');
    auto make_handle = [&](std::string_view id) { return ContentHandle(store_, std::string(id)); };

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto tok = tokens[i];
        if (tok.empty()) continue;
        if (tok.front() != ':') {
            if (!is_hex_id(tok)) throw Error(ErrorCode::CorruptHistory, "unexpected diff-tree output");
            while (cursor < commits.size() && commits[cursor].id != tok) ++cursor;
            if (cursor == commits.size()) throw Error(ErrorCode::CorruptHistory, "diff for unknown commit");
            current = &commits[cursor];
            continue;
        }
        if (!current) throw Error(ErrorCode::CorruptHistory, "diff entry before commit header");

        // ":<old mode> <new mode> <old id> <new id> <status>"
        const auto meta = split(tok.substr(1), ' ');
        if (meta.size() != 5 || i + 1 >= tokens.size()) {
            throw Error(ErrorCode::CorruptHistory, "malformed diff entry");
        }
        const auto old_mode = meta[0], new_mode = meta[1], old_id = meta[2], new_id = meta[3];
        const char status = meta[4].empty() ? '?' : meta[4].front();
        const std::string first_path(tokens[++i]);
        std::string second_path;
        if (status == 'R' || status == 'C') {
            if (i + 1 >= tokens.size()) throw Error(ErrorCode::CorruptHistory, "malformed rename entry");
            second_path = std::string(tokens[++i]);
        }
        const bool old_is_blob = old_id != kNullId && old_mode != kGitlinkMode;
        const bool new_is_blob = new_id != kNullId && new_mode != kGitlinkMode;

        auto add = [&](const std::string& path, std::string_view id) {
            FileChange fc;
            fc.kind = ChangeKind::Added;
            fc.new_path = path;
            fc.new_content = make_handle(id);
            current->changes.push_back(std::move(fc));
        };
        auto remove = [&](const std::string& path, std::string_view id) {
            FileChange fc;
            fc.kind = ChangeKind::Removed;
            fc.old_path = path;
            fc.old_content = make_handle(id);
            current->changes.push_back(std::move(fc));
        };

        switch (status) {
            case 'A':
                if (new_is_blob) add(first_path, new_id);
                break;
            case 'D':
                if (old_is_blob) remove(first_path, old_id);
                break;
            case 'M':
            case 'T':
                if (old_is_blob && new_is_blob) {
                    if (old_id == new_id) break;  // mode-only change
                    FileChange fc;
                    fc.kind = ChangeKind::Modified;
                    fc.old_path = first_path;
                    fc.new_path = first_path;
                    fc.old_content = make_handle(old_id);
                    fc.new_content = make_handle(new_id);
                    current->changes.push_back(std::move(fc));
                } else if (old_is_blob) {
                    remove(first_path, old_id);
                } else if (new_is_blob) {
                    add(first_path, new_id);
                }
                break;
            case 'R':
                if (!old_is_blob || !new_is_blob) break;
                if (path_extension(first_path) != path_extension(second_path)) {
                    // Cross-extension renames stay visible to the file-level detector.
                    remove(first_path, old_id);
                    add(second_path, new_id);
                } else {
                    FileChange fc;
                    fc.kind = ChangeKind::Renamed;
                    fc.old_path = first_path;
                    fc.new_path = second_path;
                    fc.old_content = make_handle(old_id);
                    fc.new_content = make_handle(new_id);
                    current->changes.push_back(std::move(fc));
                }
                break;
            case 'C':
                if (new_is_blob) add(second_path, new_id);
                break;
            default:
                throw Error(ErrorCode::CorruptHistory, "unsupported diff status " + std::string(meta[4]));
        }
    }

    // Split renames leave removals after additions; keep each commit path-sorted.
    for (auto& c : commits) {
        std::stable_sort(c.changes.begin(), c.changes.end(), [](const FileChange& a, const FileChange& b) {
            return a.path() < b.path();
        });
    }
    return commits;
}

}  // namespace j2k

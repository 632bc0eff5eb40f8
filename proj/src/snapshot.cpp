#include "j2k/snapshot.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_map>

namespace j2k {

std::optional<Rational> LanguageSnapshot::kotlin_proportion() const {
    const auto kotlin = sloc[Language::Kotlin];
    const auto total = kotlin + sloc[Language::Java];
    if (total == 0) return std::nullopt;
    return Rational(static_cast<std::int64_t>(kotlin), static_cast<std::int64_t>(total));
}

std::set<std::string> excluded_paths(const std::vector<CommitRecord>& history,
                                     const GeneratedTestPolicy& policy) {
    std::set<std::string> candidates;
    std::set<std::string> touched;
    if (!policy.enabled) return candidates;

    auto matches = [&](const std::string& path) {
        const auto base = path_basename(path);
        return std::find(policy.basenames.begin(), policy.basenames.end(), base) != policy.basenames.end();
    };
    for (const auto& commit : history) {
        for (const auto& change : commit.changes) {
            switch (change.kind) {
                case ChangeKind::Added:
                    if (matches(*change.new_path)) candidates.insert(*change.new_path);
                    break;
                case ChangeKind::Modified:
                    touched.insert(*change.new_path);
                    break;
                case ChangeKind::Renamed:
                    touched.insert(*change.old_path);
                    touched.insert(*change.new_path);
                    break;
                case ChangeKind::Removed:
                    break;
            }
        }
    }
    std::set<std::string> result;
    std::set_difference(candidates.begin(), candidates.end(), touched.begin(), touched.end(),
                        std::inserter(result, result.end()));
    return result;
}

namespace {

struct FileEntry {
    Language language = Language::Other;  // bucket the file is counted under
    std::size_t sloc = 0;
};

class SlocCache {
public:
    FileEntry measure(const std::string& path, const ContentHandle& content) {
        const Language language = detect_language(path);
        const auto key = std::make_pair(content.blob_id(), language);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;

        const std::string bytes = content.load();
        FileEntry entry;
        if (looks_binary(bytes)) {
            entry = {Language::Other, 0};
        } else {
            entry = {language, count_sloc(bytes, language)};
        }
        cache_.emplace(key, entry);
        return entry;
    }

private:
    std::map<std::pair<std::string, Language>, FileEntry> cache_;
};

}  // namespace

std::vector<LanguageSnapshot> snapshot_series(const std::vector<CommitRecord>& history,
                                              const GeneratedTestPolicy& policy) {
    const auto excluded = excluded_paths(history, policy);
    std::unordered_map<std::string, FileEntry> tree;
    SlocCache cache;
    LanguageCounts sloc, files;

    auto remove = [&](const std::string& path) {
        auto it = tree.find(path);
        if (it == tree.end()) return;
        sloc[it->second.language] -= it->second.sloc;
        files[it->second.language] -= 1;
        tree.erase(it);
    };
    auto add = [&](const std::string& path, const ContentHandle& content) {
        if (excluded.contains(path)) return;
        remove(path);
        const auto entry = cache.measure(path, content);
        sloc[entry.language] += entry.sloc;
        files[entry.language] += 1;
        tree.emplace(path, entry);
    };

    std::vector<LanguageSnapshot> series;
    series.reserve(history.size());
    for (const auto& commit : history) {
        for (const auto& change : commit.changes) {
            switch (change.kind) {
                case ChangeKind::Added:
                    add(*change.new_path, *change.new_content);
                    break;
                case ChangeKind::Removed:
                    remove(*change.old_path);
                    break;
                case ChangeKind::Modified:
                    add(*change.new_path, *change.new_content);
                    break;
                case ChangeKind::Renamed:
                    remove(*change.old_path);
                    add(*change.new_path, *change.new_content);
                    break;
            }
        }
        LanguageSnapshot snap;
        snap.commit_id = commit.id;
        snap.order_index = commit.order_index;
        snap.sloc = sloc;
        snap.files = files;
        series.push_back(std::move(snap));
    }
    return series;
}

void write_snapshot_csv(std::ostream& out, const std::vector<LanguageSnapshot>& series) {
    out << "commit_index,commit_id,java_sloc,kotlin_sloc,java_files,kotlin_files,kotlin_proportion\n";
    for (const auto& s : series) {
        out << s.order_index << ',' << s.commit_id << ',' << s.sloc[Language::Java] << ','
            << s.sloc[Language::Kotlin] << ',' << s.files[Language::Java] << ','
            << s.files[Language::Kotlin] << ',';
        if (auto p = s.kotlin_proportion()) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6f", p->to_double());
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace j2k

#include "j2k/patterns.hpp"

#include "j2k/migration.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace j2k {

std::string_view action_code(EditOp op) {
    switch (op) {
        case EditOp::Insert: return "INS";
        case EditOp::Delete: return "DEL";
        case EditOp::Update: return "UPD";
        case EditOp::Move: return "MOV";
    }
    return "?";
}

std::string PatternItem::text() const {
    std::string out(action_code(action));
    out += '-';
    out += entity.label();
    out += " in ";
    out += parent.label();
    out += language == Language::Kotlin ? " (K)" : " (J)";
    return out;
}

std::optional<Transaction> build_transaction(const CommitRecord& commit, const CommitDiffs& diffs) {
    if (!modifies_both_languages(commit)) return std::nullopt;
    std::set<PatternItem> items;
    bool java = false;
    bool kotlin = false;
    for (const auto& f : diffs.files) {
        for (const auto& a : f.script) {
            items.insert(PatternItem{a.op, a.kind, a.parent_kind, f.language});
            (f.language == Language::Kotlin ? kotlin : java) = true;
        }
    }
    if (!java || !kotlin) return std::nullopt;
    return Transaction{commit.id, commit.order_index, {items.begin(), items.end()}};
}

std::vector<Transaction> build_transactions(const std::vector<CommitRecord>& commits, const DiffOptions& options,
                                            std::vector<SkippedFile>* skipped) {
    std::vector<Transaction> out;
    for (const auto& commit : commits) {
        if (!modifies_both_languages(commit)) continue;
        const CommitDiffs diffs = diff_modified_sources(commit, options);
        if (skipped) skipped->insert(skipped->end(), diffs.skipped.begin(), diffs.skipped.end());
        if (auto t = build_transaction(commit, diffs)) out.push_back(std::move(*t));
    }
    return out;
}

namespace {

// Transactions containing an item, as a bitset over transaction positions.
class Cover {
public:
    explicit Cover(std::size_t n) : words_((n + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    Cover operator&(const Cover& o) const {
        Cover out = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= o.words_[i];
        return out;
    }
    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

private:
    std::vector<std::uint64_t> words_;
};

struct Level {
    std::vector<int> items;  // ascending item indices
    Cover cover;
};

}  // namespace

std::vector<FrequentItemset> apriori(const std::vector<Transaction>& transactions, const Rational& min_support,
                                     std::size_t max_size) {
    if (min_support <= Rational(0) || min_support > Rational(1)) {
        throw std::invalid_argument("min_support must be in (0, 1]");
    }
    if (max_size < 1) throw std::invalid_argument("max_size must be at least 1");
    const std::size_t n = transactions.size();
    if (n == 0) return {};

    // Item index order equals canonical text order.
    std::map<std::string, PatternItem> by_text;
    for (const auto& t : transactions) {
        for (const auto& item : t.items) by_text.emplace(item.text(), item);
    }
    std::vector<PatternItem> items;
    std::map<std::string, int> index;
    for (const auto& [text, item] : by_text) {
        index.emplace(text, static_cast<int>(items.size()));
        items.push_back(item);
    }
    std::vector<Cover> covers(items.size(), Cover(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& item : transactions[i].items) covers[static_cast<std::size_t>(index.at(item.text()))].set(i);
    }

    const auto frequent = [&](std::size_t count) {
        // count / n >= num / den
        return static_cast<__int128>(count) * min_support.denominator() >=
               static_cast<__int128>(min_support.numerator()) * static_cast<__int128>(n);
    };

    std::vector<FrequentItemset> out;
    auto emit = [&](const Level& l, std::size_t count) {
        FrequentItemset f;
        for (int i : l.items) f.items.push_back(items[static_cast<std::size_t>(i)]);
        f.count = count;
        f.support = Rational(static_cast<std::int64_t>(count), static_cast<std::int64_t>(n));
        out.push_back(std::move(f));
    };

    std::vector<Level> level;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const std::size_t c = covers[i].count();
        if (!frequent(c)) continue;
        Level l{{static_cast<int>(i)}, covers[i]};
        emit(l, c);
        level.push_back(std::move(l));
    }

    for (std::size_t k = 2; k <= max_size && level.size() >= 2; ++k) {
        std::set<std::vector<int>> previous;
        for (const auto& l : level) previous.insert(l.items);
        std::vector<Level> next;
        // Join sets sharing their first k-2 items; `level` is sorted, so
        // joinable sets are contiguous.
        for (std::size_t a = 0; a < level.size(); ++a) {
            for (std::size_t b = a + 1; b < level.size(); ++b) {
                const auto& x = level[a].items;
                const auto& y = level[b].items;
                if (!std::equal(x.begin(), x.end() - 1, y.begin())) break;
                std::vector<int> candidate = x;
                candidate.push_back(y.back());
                bool closed = true;
                for (std::size_t drop = 0; drop + 2 < candidate.size() && closed; ++drop) {
                    std::vector<int> subset;
                    for (std::size_t i = 0; i < candidate.size(); ++i) {
                        if (i != drop) subset.push_back(candidate[i]);
                    }
                    closed = previous.count(subset) != 0;
                }
                if (!closed) continue;
                Cover cover = level[a].cover & covers[static_cast<std::size_t>(y.back())];
                const std::size_t c = cover.count();
                if (!frequent(c)) continue;
                Level l{std::move(candidate), std::move(cover)};
                emit(l, c);
                next.push_back(std::move(l));
            }
        }
        level = std::move(next);
    }

    std::stable_sort(out.begin(), out.end(), [](const FrequentItemset& a, const FrequentItemset& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        if (a.support != b.support) return a.support > b.support;
        return a.items < b.items;
    });
    return out;
}

void write_itemsets_csv(std::ostream& out, const std::vector<FrequentItemset>& itemsets) {
    out << "size,support,items\n";
    for (const auto& f : itemsets) {
        char support[32];
        std::snprintf(support, sizeof support, "%.6f", f.support.to_double());
        std::string joined;
        for (const auto& item : f.items) {
            if (!joined.empty()) joined += ';';
            joined += item.text();
        }
        out << f.size() << ',' << support << ",\"" << joined << "\"\n";
    }
}

}  // namespace j2k

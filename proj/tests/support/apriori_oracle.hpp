#pragma once

// Brute-force reference for apriori() on small item universes.

#include "j2k/patterns.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace j2k::testing {

using Tag = UnifiedKind::Tag;

inline std::vector<PatternItem> item_pool() {
    std::vector<PatternItem> pool;
    const EditOp ops[] = {EditOp::Update, EditOp::Insert, EditOp::Delete};
    const Tag entities[] = {Tag::Invocation, Tag::Method};
    for (auto op : ops) {
        for (auto entity : entities) {
            for (auto lang : {Language::Java, Language::Kotlin}) pool.push_back({op, entity, Tag::Method, lang});
        }
    }
    return pool;  // 12 distinct items
}

inline Transaction tx(std::vector<PatternItem> items, std::size_t index = 0) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return Transaction{"c" + std::to_string(index), index, std::move(items)};
}

struct Plain {
    std::vector<std::string> items;
    std::size_t count;
    friend bool operator==(const Plain&, const Plain&) = default;
};

inline std::vector<Plain> plain(const std::vector<FrequentItemset>& sets) {
    std::vector<Plain> out;
    for (const auto& s : sets) {
        Plain p{{}, s.count};
        for (const auto& i : s.items) p.items.push_back(i.text());
        out.push_back(p);
    }
    return out;
}

/// Every subset of the distinct items, counted directly.
inline std::vector<Plain> brute_force(const std::vector<Transaction>& txs, const Rational& min_support, std::size_t max_size) {
    std::set<std::string> all;
    std::vector<std::set<std::string>> sets;
    for (const auto& t : txs) {
        std::set<std::string> s;
        for (const auto& i : t.items) s.insert(i.text());
        all.insert(s.begin(), s.end());
        sets.push_back(s);
    }
    const std::vector<std::string> items(all.begin(), all.end());
    std::vector<Plain> out;
    for (std::uint32_t mask = 1; mask < (1u << items.size()); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) > max_size) continue;
        std::vector<std::string> chosen;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (mask & (1u << i)) chosen.push_back(items[i]);
        }
        std::size_t count = 0;
        for (const auto& s : sets) {
            count += std::all_of(chosen.begin(), chosen.end(), [&](const std::string& x) { return s.count(x); });
        }
        if (Rational(static_cast<std::int64_t>(count), static_cast<std::int64_t>(txs.size())) >= min_support) {
            out.push_back({chosen, count});
        }
    }
    std::sort(out.begin(), out.end(), [](const Plain& a, const Plain& b) {
        if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
        if (a.count != b.count) return a.count > b.count;
        return a.items < b.items;
    });
    return out;
}

inline std::vector<Transaction> random_instance(std::mt19937& rng) {
    const auto pool = item_pool();
    const std::size_t distinct = 1 + rng() % pool.size();
    const std::size_t n = 1 + rng() % 50;
    std::vector<Transaction> txs;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<PatternItem> items;
        for (std::size_t k = 0; k < distinct; ++k) {
            if (rng() % 3 == 0) items.push_back(pool[k]);
        }
        txs.push_back(tx(items, i));
    }
    return txs;
}

}  // namespace j2k::testing

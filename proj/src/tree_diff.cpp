#include "j2k/tree_diff.hpp"

#include "flat_tree.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace j2k {

namespace detail {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
    return h ^ (h >> 29);
}

std::uint64_t label_hash(const AstNode& n) {
    std::uint64_t h = std::hash<std::string>{}(n.kind.name());
    h = mix(h, n.value ? std::hash<std::string>{}(*n.value) : 0x5bd1e995ULL);
    return mix(h, n.value ? 1 : 2);
}

}  // namespace

FlatTree::FlatTree(const AstNode& root) {
    struct Frame {
        const AstNode* n;
        int parent;
        int depth;
    };
    std::vector<Frame> stack{{&root, -1, 0}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const int index = count();
        if (f.n->id != index) throw std::invalid_argument("tree ids are not in pre-order");
        node.push_back(f.n);
        parent.push_back(f.parent);
        depth.push_back(f.depth);
        children.emplace_back();
        if (f.parent >= 0) children[static_cast<std::size_t>(f.parent)].push_back(index);
        for (auto it = f.n->children.rbegin(); it != f.n->children.rend(); ++it) {
            stack.push_back({&*it, index, f.depth + 1});
        }
    }
    const auto n = node.size();
    size.assign(n, 1);
    height.assign(n, 1);
    hash.assign(n, 0);
    for (int i = count() - 1; i >= 0; --i) {
        const auto ui = static_cast<std::size_t>(i);
        std::uint64_t h = label_hash(*node[ui]);
        for (int c : children[ui]) {
            const auto uc = static_cast<std::size_t>(c);
            size[ui] += size[uc];
            height[ui] = std::max(height[ui], height[uc] + 1);
            h = mix(h, hash[uc]);
        }
        hash[ui] = mix(h, children[ui].size());
    }
    // post-order: children before parents, left to right
    std::vector<std::pair<int, std::size_t>> walk{{0, 0}};
    while (!walk.empty()) {
        auto& [id, next] = walk.back();
        const auto& kids = children[static_cast<std::size_t>(id)];
        if (next < kids.size()) {
            const int c = kids[next++];
            walk.push_back({c, 0});
        } else {
            post_order.push_back(id);
            walk.pop_back();
        }
    }
}

bool isomorphic(const FlatTree& a, int x, const FlatTree& b, int y) {
    const auto ux = static_cast<std::size_t>(x);
    const auto uy = static_cast<std::size_t>(y);
    if (a.hash[ux] != b.hash[uy] || a.size[ux] != b.size[uy]) return false;
    for (int i = 0; i < a.size[ux]; ++i) {
        const AstNode& p = *a.node[ux + static_cast<std::size_t>(i)];
        const AstNode& q = *b.node[uy + static_cast<std::size_t>(i)];
        if (p.kind != q.kind || p.value != q.value || p.children.size() != q.children.size()) return false;
    }
    return true;
}

}  // namespace detail

void MappingSet::add(int old_id, int new_id) {
    if (has_old(old_id) || has_new(new_id)) throw std::logic_error("node already mapped");
    old_to_new_.emplace(old_id, new_id);
    new_to_old_.emplace(new_id, old_id);
}

void MappingSet::remove(int old_id, int new_id) {
    if (!contains(old_id, new_id)) return;
    old_to_new_.erase(old_id);
    new_to_old_.erase(new_id);
}

std::optional<int> MappingSet::new_for(int old_id) const {
    auto it = old_to_new_.find(old_id);
    if (it == old_to_new_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> MappingSet::old_for(int new_id) const {
    auto it = new_to_old_.find(new_id);
    if (it == new_to_old_.end()) return std::nullopt;
    return it->second;
}

bool MappingSet::contains(int old_id, int new_id) const {
    auto it = old_to_new_.find(old_id);
    return it != old_to_new_.end() && it->second == new_id;
}

std::vector<std::pair<int, int>> MappingSet::pairs() const {
    return {old_to_new_.begin(), old_to_new_.end()};
}

namespace {

using detail::FlatTree;

class Matcher {
public:
    Matcher(const FlatTree& a, const FlatTree& b, const DiffParams& params)
        : a_(a), b_(b), params_(params),
          a_to_b_(static_cast<std::size_t>(a.count()), -1),
          b_to_a_(static_cast<std::size_t>(b.count()), -1) {}

    MappingSet run() {
        top_down();
        bottom_up();
        prune_ambiguous_moves();
        MappingSet out;
        for (int i = 0; i < a_.count(); ++i) {
            if (const int j = a_to_b_[static_cast<std::size_t>(i)]; j >= 0) out.add(i, j);
        }
        return out;
    }

private:
    const FlatTree& a_;
    const FlatTree& b_;
    const DiffParams& params_;
    std::vector<int> a_to_b_;
    std::vector<int> b_to_a_;

    int partner_a(int i) const { return a_to_b_[static_cast<std::size_t>(i)]; }
    int partner_b(int j) const { return b_to_a_[static_cast<std::size_t>(j)]; }

    void link(int i, int j) {
        a_to_b_[static_cast<std::size_t>(i)] = j;
        b_to_a_[static_cast<std::size_t>(j)] = i;
    }
    void unlink(int i) {
        const int j = partner_a(i);
        a_to_b_[static_cast<std::size_t>(i)] = -1;
        b_to_a_[static_cast<std::size_t>(j)] = -1;
    }

    void link_isomorphic(int i, int j) {
        const int n = a_.size[static_cast<std::size_t>(i)];
        for (int k = 0; k < n; ++k) {
            if (partner_a(i + k) < 0 && partner_b(j + k) < 0) link(i + k, j + k);
        }
    }

    double dice(int i, int j) const {
        const int si = a_.size[static_cast<std::size_t>(i)] - 1;
        const int sj = b_.size[static_cast<std::size_t>(j)] - 1;
        if (si + sj == 0) return 0.0;
        int common = 0;
        for (int d = i + 1; d <= i + si; ++d) {
            const int p = partner_a(d);
            if (p >= 0 && b_.is_descendant(p, j)) ++common;
        }
        return 2.0 * common / (si + sj);
    }

    // ---- top-down ------------------------------------------------------

    class HeightQueue {
    public:
        explicit HeightQueue(const FlatTree& t) : t_(t) { push(0); }
        int peek_max() const { return heap_.empty() ? 0 : heap_.top().first; }
        void push(int id) { heap_.push({t_.height[static_cast<std::size_t>(id)], -id}); }
        void open(int id) {
            for (int c : t_.children[static_cast<std::size_t>(id)]) push(c);
        }
        std::vector<int> pop() {
            std::vector<int> out;
            const int h = peek_max();
            while (!heap_.empty() && heap_.top().first == h) {
                out.push_back(-heap_.top().second);
                heap_.pop();
            }
            return out;
        }

    private:
        const FlatTree& t_;
        std::priority_queue<std::pair<int, int>> heap_;
    };

    void top_down() {
        HeightQueue qa(a_), qb(b_);
        std::vector<std::pair<int, int>> ambiguous;
        while (std::min(qa.peek_max(), qb.peek_max()) >= params_.min_height) {
            if (qa.peek_max() != qb.peek_max()) {
                if (qa.peek_max() > qb.peek_max()) {
                    for (int i : qa.pop()) qa.open(i);
                } else {
                    for (int j : qb.pop()) qb.open(j);
                }
                continue;
            }
            const auto ha = qa.pop();
            const auto hb = qb.pop();
            std::map<std::uint64_t, std::pair<std::vector<int>, std::vector<int>>> by_hash;
            for (int i : ha) by_hash[a_.hash[static_cast<std::size_t>(i)]].first.push_back(i);
            for (int j : hb) by_hash[b_.hash[static_cast<std::size_t>(j)]].second.push_back(j);
            std::vector<char> used_a(static_cast<std::size_t>(a_.count()), 0);
            std::vector<char> used_b(static_cast<std::size_t>(b_.count()), 0);
            for (const auto& [h, group] : by_hash) {
                const auto& [as, bs] = group;
                if (as.empty() || bs.empty()) continue;
                std::vector<std::pair<int, int>> iso;
                for (int i : as) {
                    for (int j : bs) {
                        if (detail::isomorphic(a_, i, b_, j)) iso.emplace_back(i, j);
                    }
                }
                for (auto [i, j] : iso) {
                    used_a[static_cast<std::size_t>(i)] = 1;
                    used_b[static_cast<std::size_t>(j)] = 1;
                }
                if (iso.size() == 1) {
                    link_isomorphic(iso[0].first, iso[0].second);
                } else {
                    ambiguous.insert(ambiguous.end(), iso.begin(), iso.end());
                }
            }
            for (int i : ha) {
                if (!used_a[static_cast<std::size_t>(i)]) qa.open(i);
            }
            for (int j : hb) {
                if (!used_b[static_cast<std::size_t>(j)]) qb.open(j);
            }
        }
        resolve_ambiguous(std::move(ambiguous));
    }

    void resolve_ambiguous(std::vector<std::pair<int, int>> candidates) {
        struct Scored {
            double score;
            int i;
            int j;
        };
        std::vector<Scored> scored;
        for (auto [i, j] : candidates) {
            const int pi = a_.parent[static_cast<std::size_t>(i)];
            const int pj = b_.parent[static_cast<std::size_t>(j)];
            const double s = (pi >= 0 && pj >= 0) ? dice(pi, pj) : 0.0;
            scored.push_back({s, i, j});
        }
        std::stable_sort(scored.begin(), scored.end(), [](const Scored& x, const Scored& y) {
            if (x.score != y.score) return x.score > y.score;
            if (x.i != y.i) return x.i < y.i;
            return x.j < y.j;
        });
        for (const auto& s : scored) {
            if (partner_a(s.i) < 0 && partner_b(s.j) < 0) link_isomorphic(s.i, s.j);
        }
    }

    // ---- bottom-up -----------------------------------------------------

    void bottom_up() {
        for (int i : a_.post_order) {
            const auto ui = static_cast<std::size_t>(i);
            if (i == 0) {
                if (partner_a(0) < 0 && partner_b(0) < 0 && a_.same_label(0, b_, 0)) {
                    link(0, 0);
                    recover(0, 0);
                } else if (partner_a(0) == 0) {
                    recover(0, 0);
                }
                continue;
            }
            if (partner_a(i) >= 0 || a_.children[ui].empty()) continue;
            int best = -1;
            double best_dice = -1.0;
            for (int j : candidates(i)) {
                const double d = dice(i, j);
                if (d > best_dice) {
                    best_dice = d;
                    best = j;
                }
            }
            if (best >= 0 && best_dice >= params_.dice_threshold) {
                link(i, best);
                recover(i, best);
            }
        }
    }

    // Unmatched same-kind ancestors of the partners of i's descendants, in id order.
    std::vector<int> candidates(int i) const {
        std::vector<int> out;
        std::vector<char> seen(static_cast<std::size_t>(b_.count()), 0);
        const int end = i + a_.size[static_cast<std::size_t>(i)];
        for (int d = i + 1; d < end; ++d) {
            int p = partner_a(d);
            if (p < 0) continue;
            for (p = b_.parent[static_cast<std::size_t>(p)]; p > 0; p = b_.parent[static_cast<std::size_t>(p)]) {
                if (seen[static_cast<std::size_t>(p)]) break;
                seen[static_cast<std::size_t>(p)] = 1;
                if (partner_b(p) < 0 && a_.same_label(i, b_, p)) out.push_back(p);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // ---- recovery: Zhang-Shasha optimal mapping inside small containers --

    void recover(int i, int j) {
        const auto si = static_cast<std::size_t>(a_.size[static_cast<std::size_t>(i)]);
        const auto sj = static_cast<std::size_t>(b_.size[static_cast<std::size_t>(j)]);
        if (std::max(si, sj) > params_.max_size) return;
        ZhangShasha zs(a_, i, b_, j);
        for (auto [x, y] : zs.mapping()) {
            if (partner_a(x) < 0 && partner_b(y) < 0 && a_.same_label(x, b_, y)) link(x, y);
        }
    }

    class ZhangShasha {
    public:
        ZhangShasha(const FlatTree& a, int ra, const FlatTree& b, int rb) : a_(a, ra), b_(b, rb) {
            const auto n = a_.nodes.size();
            const auto m = b_.nodes.size();
            td_.assign((n + 1) * (m + 1), 0);
            fd_.assign((n + 1) * (m + 1), 0);
            for (int x : a_.keyroots) {
                for (int y : b_.keyroots) forest(x, y);
            }
        }

        std::vector<std::pair<int, int>> mapping() {
            std::vector<std::pair<int, int>> out;
            std::vector<std::pair<int, int>> stack{{static_cast<int>(a_.nodes.size()), static_cast<int>(b_.nodes.size())}};
            while (!stack.empty()) {
                auto [ti, tj] = stack.back();
                stack.pop_back();
                forest(ti, tj);
                const int li = a_.lmd(ti);
                const int lj = b_.lmd(tj);
                int x = ti;
                int y = tj;
                while (x >= li || y >= lj) {
                    if (x >= li && fd(x - 1, y) + 1 == fd(x, y)) {
                        --x;
                    } else if (y >= lj && fd(x, y - 1) + 1 == fd(x, y)) {
                        --y;
                    } else if (a_.lmd(x) == li && b_.lmd(y) == lj) {
                        out.emplace_back(a_.nodes[static_cast<std::size_t>(x - 1)],
                                         b_.nodes[static_cast<std::size_t>(y - 1)]);
                        --x;
                        --y;
                    } else {
                        stack.emplace_back(x, y);
                        x = a_.lmd(x) - 1;
                        y = b_.lmd(y) - 1;
                    }
                }
            }
            std::sort(out.begin(), out.end());
            return out;
        }

    private:
        static constexpr int kInf = 1 << 20;

        // Post-order numbering 1..n of one subtree, with leftmost-leaf descendants.
        struct Side {
            std::vector<int> nodes;  // post-order position - 1 -> flat id
            std::vector<int> lmds;   // post-order position - 1 -> post-order position of leftmost leaf
            std::vector<int> keyroots;
            const FlatTree* tree;

            Side(const FlatTree& t, int root) : tree(&t) {
                build(root);
                std::vector<char> seen(nodes.size() + 2, 0);
                for (int k = static_cast<int>(nodes.size()); k >= 1; --k) {
                    const int l = lmd(k);
                    if (!seen[static_cast<std::size_t>(l)]) {
                        seen[static_cast<std::size_t>(l)] = 1;
                        keyroots.push_back(k);
                    }
                }
                std::sort(keyroots.begin(), keyroots.end());
            }

            int build(int id) {
                int leftmost = 0;
                for (int c : tree->children[static_cast<std::size_t>(id)]) {
                    const int l = build(c);
                    if (leftmost == 0) leftmost = l;
                }
                nodes.push_back(id);
                const int me = static_cast<int>(nodes.size());
                if (leftmost == 0) leftmost = me;
                lmds.push_back(leftmost);
                return leftmost;
            }

            int lmd(int k) const { return lmds[static_cast<std::size_t>(k - 1)]; }
            const AstNode& at(int k) const { return *tree->node[static_cast<std::size_t>(nodes[static_cast<std::size_t>(k - 1)])]; }
        };

        Side a_;
        Side b_;
        std::vector<int> td_;
        std::vector<int> fd_;

        std::size_t idx(int x, int y) const {
            return static_cast<std::size_t>(x) * (b_.nodes.size() + 1) + static_cast<std::size_t>(y);
        }
        int& td(int x, int y) { return td_[idx(x, y)]; }
        int& fd(int x, int y) { return fd_[idx(x, y)]; }

        int update_cost(int x, int y) const {
            const AstNode& p = a_.at(x);
            const AstNode& q = b_.at(y);
            if (p.kind != q.kind) return kInf;
            return p.value == q.value ? 0 : 1;
        }

        // Forest distances for subtrees rooted at post-order positions i and j.
        // fd(x, y) for x in [li-1, i], y in [lj-1, j]; position li-1 is the empty forest.
        void forest(int i, int j) {
            const int li = a_.lmd(i);
            const int lj = b_.lmd(j);
            fd(li - 1, lj - 1) = 0;
            for (int x = li; x <= i; ++x) fd(x, lj - 1) = fd(x - 1, lj - 1) + 1;
            for (int y = lj; y <= j; ++y) fd(li - 1, y) = fd(li - 1, y - 1) + 1;
            for (int x = li; x <= i; ++x) {
                for (int y = lj; y <= j; ++y) {
                    const int del = fd(x - 1, y) + 1;
                    const int ins = fd(x, y - 1) + 1;
                    if (a_.lmd(x) == li && b_.lmd(y) == lj) {
                        const int upd = fd(x - 1, y - 1) + update_cost(x, y);
                        fd(x, y) = std::min({del, ins, upd});
                        td(x, y) = fd(x, y);
                    } else {
                        const int sub = fd(a_.lmd(x) - 1, b_.lmd(y) - 1) + td(x, y);
                        fd(x, y) = std::min({del, ins, sub});
                    }
                }
            }
        }
    };

    // ---- conservative moves ----------------------------------------------

    void prune_ambiguous_moves() {
        for (int i = 1; i < a_.count(); ++i) {
            const int j = partner_a(i);
            if (j < 0) continue;
            const int pi = a_.parent[static_cast<std::size_t>(i)];
            const int pj = b_.parent[static_cast<std::size_t>(j)];
            if (partner_a(pi) == pj) continue;
            if (!detail::isomorphic(a_, i, b_, j)) unlink(i);
        }
    }
};

}  // namespace

MappingSet match_trees(const AstNode& old_tree, const AstNode& new_tree, const DiffParams& params) {
    const FlatTree a(old_tree);
    const FlatTree b(new_tree);
    return Matcher(a, b, params).run();
}

}  // namespace j2k

#include "j2k/tree_diff.hpp"

#include "flat_tree.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace j2k {

std::string_view to_string(EditOp op) {
    switch (op) {
        case EditOp::Insert: return "Insert";
        case EditOp::Delete: return "Delete";
        case EditOp::Update: return "Update";
        case EditOp::Move: return "Move";
    }
    return "?";
}

namespace {

constexpr int kVirtualRoot = -1;

// Mutable tree used both to derive a script and to replay one. Slot 0 is a
// virtual root above the real root, so the real root can be replaced too.
struct Workspace {
    struct Node {
        UnifiedKind kind;
        std::string grammar_type;
        std::optional<std::string> value;
        int parent = -1;
        std::vector<int> children;
        WorkRef ref;
        bool alive = true;
    };

    std::vector<Node> nodes;
    std::map<int, int> old_slot;       // old id -> slot
    std::map<int, int> inserted_slot;  // new id -> slot

    explicit Workspace(const AstNode& root) {
        nodes.push_back(Node{UnifiedKind::other("virtual-root"), "", std::nullopt, -1, {}, {false, kVirtualRoot}, true});
        add_copy(root, 0);
    }

    int add_copy(const AstNode& n, int parent) {
        const int slot = static_cast<int>(nodes.size());
        nodes.push_back(Node{n.kind, n.grammar_type, n.value, parent, {}, {false, n.id}, true});
        old_slot[n.id] = slot;
        at(parent).children.push_back(slot);
        for (const auto& c : n.children) add_copy(c, slot);
        return slot;
    }

    Node& at(int slot) { return nodes[static_cast<std::size_t>(slot)]; }

    int slot_of(const WorkRef& ref) const {
        if (!ref.inserted && ref.id == kVirtualRoot) return 0;
        const auto& index = ref.inserted ? inserted_slot : old_slot;
        auto it = index.find(ref.id);
        if (it == index.end()) throw std::logic_error("edit action refers to an unknown node");
        return it->second;
    }

    int insert(const EditAction& a, int parent, std::size_t position) {
        const int slot = static_cast<int>(nodes.size());
        nodes.push_back(Node{a.kind, a.grammar_type, a.value, parent, {}, {true, *a.new_id}, true});
        inserted_slot[*a.new_id] = slot;
        place(slot, parent, position);
        return slot;
    }

    void detach(int slot) {
        auto& siblings = at(at(slot).parent).children;
        siblings.erase(std::find(siblings.begin(), siblings.end(), slot));
    }

    void place(int slot, int parent, std::size_t position) {
        auto& kids = at(parent).children;
        if (position > kids.size()) throw std::logic_error("edit action position out of range");
        kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(position), slot);
        at(slot).parent = parent;
    }

    void move(int slot, int parent, std::size_t position) {
        detach(slot);
        place(slot, parent, position);
    }

    void remove(int slot) {
        if (!at(slot).children.empty()) throw std::logic_error("delete of a node that still has children");
        detach(slot);
        at(slot).alive = false;
    }

    std::size_t index_in_parent(int slot) {
        const auto& siblings = at(at(slot).parent).children;
        return static_cast<std::size_t>(std::find(siblings.begin(), siblings.end(), slot) - siblings.begin());
    }

    AstNode to_tree(int slot) {
        const Node& n = at(slot);
        AstNode out;
        out.kind = n.kind;
        out.grammar_type = n.grammar_type;
        out.value = n.value;
        for (int c : n.children) out.children.push_back(to_tree(c));
        return out;
    }

    void post_order(int slot, std::vector<int>& out) {
        for (int c : at(slot).children) post_order(c, out);
        out.push_back(slot);
    }
};

class ScriptBuilder {
public:
    ScriptBuilder(const AstNode& old_tree, const AstNode& new_tree, const MappingSet& mapping)
        : old_root_(old_tree), new_root_(new_tree), new_flat_(new_tree), work_(old_tree) {
        const auto n = static_cast<std::size_t>(new_flat_.count());
        new_partner_.assign(n, -1);
        new_in_order_.assign(n, false);
        work_partner_.assign(work_.nodes.size(), kUnmapped);
        for (auto [o, w] : mapping.pairs()) {
            const int slot = work_.old_slot.at(o);
            new_partner_[static_cast<std::size_t>(w)] = slot;
            work_partner_[static_cast<std::size_t>(slot)] = w;
        }
        work_partner_[0] = kVirtualRoot;
    }

    EditScript run() {
        std::deque<int> queue{0};
        while (!queue.empty()) {
            const int x = queue.front();
            queue.pop_front();
            for (int c : new_flat_.children[static_cast<std::size_t>(x)]) queue.push_back(c);
            visit(x);
        }
        std::vector<int> order;
        work_.post_order(0, order);
        for (int slot : order) {
            if (slot == 0 || work_partner_[static_cast<std::size_t>(slot)] != kUnmapped) continue;
            const auto& node = work_.at(slot);
            EditAction a = make(EditOp::Delete, node.kind, node.grammar_type, node.value);
            a.old_id = node.ref.id;
            a.parent_kind = enclosing_kind(old_root_, node.ref.id);
            script_.push_back(std::move(a));
            work_.remove(slot);
        }
        return std::move(script_);
    }

private:
    static constexpr int kUnmapped = -2;

    const AstNode& old_root_;
    const AstNode& new_root_;
    detail::FlatTree new_flat_;
    Workspace work_;
    std::vector<int> new_partner_;   // new id -> workspace slot
    std::vector<int> work_partner_;  // workspace slot -> new id (kVirtualRoot for slot 0)
    std::vector<bool> new_in_order_;
    EditScript script_;

    static EditAction make(EditOp op, const UnifiedKind& kind, const std::string& grammar,
                           const std::optional<std::string>& value) {
        EditAction a;
        a.op = op;
        a.kind = kind;
        a.grammar_type = grammar;
        a.value = value;
        return a;
    }

    int partner_of_new(int x) const { return x == kVirtualRoot ? 0 : new_partner_[static_cast<std::size_t>(x)]; }
    const std::vector<int>& new_children(int y) const {
        static const std::vector<int> root_children{0};
        return y == kVirtualRoot ? root_children : new_flat_.children[static_cast<std::size_t>(y)];
    }

    void visit(int x) {
        const AstNode& xn = *new_flat_.node[static_cast<std::size_t>(x)];
        const int y = new_flat_.parent[static_cast<std::size_t>(x)];
        const int z = partner_of_new(y);
        int w = new_partner_[static_cast<std::size_t>(x)];
        if (w < 0) {
            const std::size_t k = find_pos(x);
            EditAction a = make(EditOp::Insert, xn.kind, xn.grammar_type, xn.value);
            a.new_id = x;
            a.parent = work_.at(z).ref;
            a.position = k;
            a.parent_kind = enclosing_kind(new_root_, x);
            w = work_.insert(a, z, k);
            script_.push_back(std::move(a));
            work_partner_.resize(work_.nodes.size(), kUnmapped);
            work_partner_[static_cast<std::size_t>(w)] = x;
            new_partner_[static_cast<std::size_t>(x)] = w;
        } else {
            auto& wn = work_.at(w);
            if (wn.value != xn.value) {
                EditAction a = make(EditOp::Update, xn.kind, xn.grammar_type, xn.value);
                a.old_id = wn.ref.id;
                a.new_id = x;
                a.parent_kind = enclosing_kind(new_root_, x);
                script_.push_back(std::move(a));
                wn.value = xn.value;
            }
            if (wn.parent != z) {
                emit_move(w, x, z);
            }
        }
        new_in_order_[static_cast<std::size_t>(x)] = true;
        align_children(w, x);
    }

    // Positions count siblings after the moved node has been detached.
    void emit_move(int w, int x, int z) {
        work_.detach(w);
        const std::size_t k = find_pos(x);
        work_.place(w, z, k);
        const auto& wn = work_.at(w);
        EditAction a = make(EditOp::Move, wn.kind, wn.grammar_type, wn.value);
        if (!wn.ref.inserted) a.old_id = wn.ref.id;
        a.new_id = x;
        a.parent = work_.at(z).ref;
        a.position = k;
        a.parent_kind = enclosing_kind(new_root_, x);
        script_.push_back(std::move(a));
    }

    void align_children(int w, int x) {
        const std::vector<int> wkids = work_.at(w).children;
        const std::vector<int>& xkids = new_flat_.children[static_cast<std::size_t>(x)];
        for (int c : xkids) new_in_order_[static_cast<std::size_t>(c)] = false;

        std::vector<int> s1;  // children of w whose partner is a child of x
        for (int c : wkids) {
            const int p = work_partner_[static_cast<std::size_t>(c)];
            if (p >= 0 && new_flat_.parent[static_cast<std::size_t>(p)] == x) s1.push_back(c);
        }
        std::vector<int> s2;  // children of x whose partner is a child of w
        for (int c : xkids) {
            const int p = new_partner_[static_cast<std::size_t>(c)];
            if (p >= 0 && work_.at(p).parent == w) s2.push_back(c);
        }

        // Longest common subsequence under the mapping.
        const std::size_t n = s1.size();
        const std::size_t m = s2.size();
        std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = m; j-- > 0;) {
                lcs[i][j] = work_partner_[static_cast<std::size_t>(s1[i])] == s2[j]
                                ? lcs[i + 1][j + 1] + 1
                                : std::max(lcs[i + 1][j], lcs[i][j + 1]);
            }
        }
        for (std::size_t i = 0, j = 0; i < n && j < m;) {
            if (work_partner_[static_cast<std::size_t>(s1[i])] == s2[j]) {
                new_in_order_[static_cast<std::size_t>(s2[j])] = true;
                ++i;
                ++j;
            } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
                ++i;
            } else {
                ++j;
            }
        }

        for (int b : s2) {
            if (new_in_order_[static_cast<std::size_t>(b)]) continue;
            const int a = new_partner_[static_cast<std::size_t>(b)];
            emit_move(a, b, w);
            new_in_order_[static_cast<std::size_t>(b)] = true;
        }
    }

    // Position in the partner of x's parent just right of the partner of
    // x's nearest in-order left sibling.
    std::size_t find_pos(int x) {
        const int y = new_flat_.parent[static_cast<std::size_t>(x)];
        const auto& siblings = new_children(y);
        int v = -1;
        for (int s : siblings) {
            if (s == x) break;
            if (new_in_order_[static_cast<std::size_t>(s)]) v = s;
        }
        if (v < 0) return 0;
        return work_.index_in_parent(new_partner_[static_cast<std::size_t>(v)]) + 1;
    }
};

}  // namespace

EditScript edit_script(const AstNode& old_tree, const AstNode& new_tree, const MappingSet& mapping) {
    return ScriptBuilder(old_tree, new_tree, mapping).run();
}

EditScript diff_trees(const AstNode& old_tree, const AstNode& new_tree, const DiffParams& params) {
    return edit_script(old_tree, new_tree, match_trees(old_tree, new_tree, params));
}

AstNode apply(const AstNode& old_tree, const EditScript& script) {
    Workspace work(old_tree);
    for (const auto& a : script) {
        switch (a.op) {
            case EditOp::Insert:
                if (!a.new_id) throw std::logic_error("insert without a new-tree id");
                work.insert(a, work.slot_of(a.parent), a.position);
                break;
            case EditOp::Delete:
                if (!a.old_id) throw std::logic_error("delete without an old-tree id");
                work.remove(work.slot_of({false, *a.old_id}));
                break;
            case EditOp::Update:
                if (!a.old_id) throw std::logic_error("update without an old-tree id");
                work.at(work.slot_of({false, *a.old_id})).value = a.value;
                break;
            case EditOp::Move: {
                const int slot = a.old_id ? work.slot_of({false, *a.old_id}) : work.slot_of({true, *a.new_id});
                work.move(slot, work.slot_of(a.parent), a.position);
                break;
            }
        }
    }
    const auto& top = work.at(0).children;
    if (top.size() != 1) throw std::logic_error("edit script does not leave a single root");
    AstNode out = work.to_tree(top.front());
    assign_preorder_ids(out);
    return out;
}

bool isomorphic(const AstNode& a, const AstNode& b) {
    if (a.kind != b.kind || a.value != b.value || a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!isomorphic(a.children[i], b.children[i])) return false;
    }
    return true;
}

void write_jsonl(std::ostream& out, const EditScript& script) {
    for (const auto& a : script) {
        nlohmann::ordered_json j;
        j["op"] = to_string(a.op);
        j["kind"] = a.kind.name();
        j["value"] = a.value ? nlohmann::ordered_json(*a.value) : nlohmann::ordered_json(nullptr);
        j["parent_kind"] = a.parent_kind.name();
        out << j.dump() << '\n';
    }
}

}  // namespace j2k

#include "treedec.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pmx {

int TreeDecomposition::width() const {
    std::size_t w = 0;
    for (const auto& b : bags) w = std::max(w, b.size());
    return static_cast<int>(w) - 1;
}

namespace {

std::vector<std::vector<int>> adjacency(int nodes, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

bool bag_contains(const std::vector<int>& bag, int v) {
    return std::binary_search(bag.begin(), bag.end(), v);
}

}  // namespace

std::vector<Violation> validate(const TreeDecomposition& dec, int n_vertices,
                                const std::vector<std::pair<int, int>>& graph_edges) {
    std::vector<Violation> out;
    const int t = dec.nodes();
    if (t == 0) {
        if (n_vertices > 0) out.push_back({"decomposition has no bags but the graph has vertices"});
        return out;
    }
    for (const auto& bag : dec.bags) {
        for (std::size_t i = 0; i < bag.size(); ++i) {
            if (bag[i] < 0 || bag[i] >= n_vertices) {
                out.push_back({"bag contains vertex " + std::to_string(bag[i]) + " out of range"});
            }
            if (i > 0 && bag[i] <= bag[i - 1]) {
                out.push_back({"bag not sorted/unique"});
            }
        }
    }
    // Tree shape: t-1 edges, connected, valid endpoints.
    if (static_cast<int>(dec.tree_edges.size()) != t - 1) {
        out.push_back({"tree has " + std::to_string(dec.tree_edges.size()) + " edges, expected " +
                       std::to_string(t - 1)});
    }
    for (auto [a, b] : dec.tree_edges) {
        if (a < 0 || a >= t || b < 0 || b >= t || a == b) {
            out.push_back({"invalid tree edge (" + std::to_string(a) + "," + std::to_string(b) + ")"});
            return out;
        }
    }
    auto tree_adj = adjacency(t, dec.tree_edges);
    {
        std::vector<char> seen(static_cast<std::size_t>(t), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int cnt = 0;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            ++cnt;
            for (int y : tree_adj[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    stack.push_back(y);
                }
        }
        if (cnt != t) out.push_back({"decomposition tree is disconnected"});
    }
    // Coverage.
    std::vector<char> covered(static_cast<std::size_t>(n_vertices), 0);
    for (const auto& bag : dec.bags)
        for (int v : bag)
            if (v >= 0 && v < n_vertices) covered[v] = 1;
    for (int v = 0; v < n_vertices; ++v)
        if (!covered[v]) out.push_back({"vertex " + std::to_string(v) + " appears in no bag"});
    // Edge coverage.
    for (auto [a, b] : graph_edges) {
        bool ok = false;
        for (const auto& bag : dec.bags)
            if (bag_contains(bag, a) && bag_contains(bag, b)) {
                ok = true;
                break;
            }
        if (!ok)
            out.push_back({"edge (" + std::to_string(a) + "," + std::to_string(b) + ") uncovered"});
    }
    // Connectivity: nodes containing each vertex induce a subtree.
    for (int v = 0; v < n_vertices; ++v) {
        std::vector<int> holders;
        for (int i = 0; i < t; ++i)
            if (bag_contains(dec.bags[i], v)) holders.push_back(i);
        if (holders.size() <= 1) continue;
        std::set<int> holder_set(holders.begin(), holders.end());
        std::vector<char> seen(static_cast<std::size_t>(t), 0);
        std::vector<int> stack{holders[0]};
        seen[holders[0]] = 1;
        int cnt = 0;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            ++cnt;
            for (int y : tree_adj[x])
                if (!seen[y] && holder_set.count(y)) {
                    seen[y] = 1;
                    stack.push_back(y);
                }
        }
        if (cnt != static_cast<int>(holders.size()))
            out.push_back({"bags containing vertex " + std::to_string(v) + " are not connected"});
    }
    return out;
}

int NiceTreeDecomposition::width() const {
    std::size_t w = 0;
    for (const auto& nd : nodes) w = std::max(w, nd.bag.size());
    return static_cast<int>(w) - 1;
}

int NiceTreeDecomposition::count(NodeType t) const {
    int c = 0;
    for (const auto& nd : nodes)
        if (nd.type == t) ++c;
    return c;
}

const char* node_type_name(NodeType t) {
    switch (t) {
        case NodeType::Start: return "start";
        case NodeType::Introduce: return "introduce";
        case NodeType::Forget: return "forget";
        case NodeType::Join: return "join";
    }
    return "?";
}

std::vector<Violation> validate_nice(const NiceTreeDecomposition& nice, int n_vertices,
                                     const std::vector<std::pair<int, int>>& graph_edges) {
    std::vector<Violation> out;
    const int t = static_cast<int>(nice.nodes.size());
    if (t == 0) {
        out.push_back({"empty nice decomposition"});
        return out;
    }
    if (nice.root != t - 1) out.push_back({"root must be the last node"});
    if (!nice.nodes[nice.root].bag.empty()) out.push_back({"root bag not empty"});
    std::vector<int> forgotten_count(static_cast<std::size_t>(n_vertices), 0);
    for (int i = 0; i < t; ++i) {
        const NiceNode& nd = nice.nodes[i];
        if (!std::is_sorted(nd.bag.begin(), nd.bag.end())) out.push_back({"bag not sorted at node " + std::to_string(i)});
        auto child_ok = [&](int c) { return c >= 0 && c < i; };
        switch (nd.type) {
            case NodeType::Start:
                if (nd.child1 != -1 || nd.child2 != -1) out.push_back({"start node with children"});
                if (nd.bag.empty()) out.push_back({"start node with empty bag"});
                break;
            case NodeType::Introduce: {
                if (!child_ok(nd.child1) || nd.child2 != -1) out.push_back({"introduce child malformed"});
                else {
                    const auto& cb = nice.nodes[nd.child1].bag;
                    if (nd.bag.size() != cb.size() + 1 || !std::includes(nd.bag.begin(), nd.bag.end(), cb.begin(), cb.end()))
                        out.push_back({"introduce bag is not child bag plus one at node " + std::to_string(i)});
                    if (!bag_contains(nd.bag, nd.player) || bag_contains(cb, nd.player))
                        out.push_back({"introduce player mismatch at node " + std::to_string(i)});
                }
                break;
            }
            case NodeType::Forget: {
                if (!child_ok(nd.child1) || nd.child2 != -1) out.push_back({"forget child malformed"});
                else {
                    const auto& cb = nice.nodes[nd.child1].bag;
                    if (nd.bag.size() + 1 != cb.size() || !std::includes(cb.begin(), cb.end(), nd.bag.begin(), nd.bag.end()))
                        out.push_back({"forget bag is not child bag minus one at node " + std::to_string(i)});
                    if (bag_contains(nd.bag, nd.player) || !bag_contains(cb, nd.player))
                        out.push_back({"forget player mismatch at node " + std::to_string(i)});
                    else if (nd.player >= 0 && nd.player < n_vertices)
                        ++forgotten_count[nd.player];
                }
                break;
            }
            case NodeType::Join: {
                if (!child_ok(nd.child1) || !child_ok(nd.child2)) out.push_back({"join children malformed"});
                else if (nice.nodes[nd.child1].bag != nd.bag || nice.nodes[nd.child2].bag != nd.bag)
                    out.push_back({"join bags differ at node " + std::to_string(i)});
                break;
            }
        }
    }
    for (int v = 0; v < n_vertices; ++v)
        if (forgotten_count[v] != 1)
            out.push_back({"player " + std::to_string(v) + " forgotten " + std::to_string(forgotten_count[v]) +
                           " times"});
    // The underlying bags must still be a valid decomposition of the graph.
    TreeDecomposition flat;
    for (const auto& nd : nice.nodes) flat.bags.push_back(nd.bag);
    for (int i = 0; i < t; ++i) {
        if (nice.nodes[i].child1 >= 0) flat.tree_edges.push_back({nice.nodes[i].child1, i});
        if (nice.nodes[i].child2 >= 0) flat.tree_edges.push_back({nice.nodes[i].child2, i});
    }
    // Root bag is empty, so plain coverage fails only if some vertex is nowhere.
    for (const auto& viol : validate(flat, n_vertices, graph_edges)) out.push_back(viol);
    return out;
}

namespace {

struct Builder {
    std::vector<NiceNode> nodes;

    int add(NiceNode nd) {
        nodes.push_back(std::move(nd));
        return static_cast<int>(nodes.size()) - 1;
    }

    /// Emits the chain that transforms an existing subtree whose top bag is
    /// `from` into a node with bag `to`: forget extras, then introduce misses.
    int morph(int top, std::vector<int> from, const std::vector<int>& to) {
        std::vector<int> extra, missing;
        std::set_difference(from.begin(), from.end(), to.begin(), to.end(), std::back_inserter(extra));
        std::set_difference(to.begin(), to.end(), from.begin(), from.end(), std::back_inserter(missing));
        for (int v : extra) {
            std::vector<int> nb = from;
            nb.erase(std::lower_bound(nb.begin(), nb.end(), v));
            top = add({NodeType::Forget, nb, top, -1, v});
            from = std::move(nb);
        }
        for (int v : missing) {
            std::vector<int> nb = from;
            nb.insert(std::lower_bound(nb.begin(), nb.end(), v), v);
            top = add({NodeType::Introduce, nb, top, -1, v});
            from = std::move(nb);
        }
        return top;
    }
};

}  // namespace

NiceTreeDecomposition to_nice(const TreeDecomposition& dec, int n_vertices,
                              const std::vector<std::pair<int, int>>& graph_edges) {
    auto violations = validate(dec, n_vertices, graph_edges);
    if (!violations.empty())
        throw std::invalid_argument("invalid tree decomposition: " + violations.front().what);
    if (dec.nodes() == 0 || n_vertices == 0) {
        NiceTreeDecomposition nice;
        nice.nodes.push_back({NodeType::Start, {}, -1, -1, -1});
        nice.root = 0;
        return nice;
    }

    // Contract tree edges whose one bag is contained in the other; this never
    // changes the width and keeps the nice tree small.
    int t = dec.nodes();
    std::vector<std::vector<int>> bags = dec.bags;
    std::vector<int> repr(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i) repr[i] = i;
    auto find = [&](int x) {
        while (repr[x] != x) x = repr[x] = repr[repr[x]];
        return x;
    };
    std::vector<std::pair<int, int>> work_edges = dec.tree_edges;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [a, b] : work_edges) {
            int ra = find(a), rb = find(b);
            if (ra == rb) continue;
            const auto& ba = bags[ra];
            const auto& bb = bags[rb];
            if (std::includes(bb.begin(), bb.end(), ba.begin(), ba.end())) {
                repr[ra] = rb;
                changed = true;
            } else if (std::includes(ba.begin(), ba.end(), bb.begin(), bb.end())) {
                repr[rb] = ra;
                changed = true;
            }
        }
    }
    std::vector<int> keep;
    std::vector<int> newid(static_cast<std::size_t>(t), -1);
    for (int i = 0; i < t; ++i)
        if (find(i) == i) {
            newid[i] = static_cast<int>(keep.size());
            keep.push_back(i);
        }
    std::vector<std::vector<int>> cbags;
    for (int i : keep) cbags.push_back(bags[i]);
    std::set<std::pair<int, int>> cedges_set;
    for (auto [a, b] : work_edges) {
        int ra = newid[find(a)], rb = newid[find(b)];
        if (ra != rb) cedges_set.insert({std::min(ra, rb), std::max(ra, rb)});
    }
    const int ct = static_cast<int>(cbags.size());

    // Root: the node with the lexicographically smallest bag contents.
    int root = 0;
    for (int i = 1; i < ct; ++i)
        if (cbags[i] < cbags[root]) root = i;

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(ct));
    for (auto [a, b] : cedges_set) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& l : adj) std::sort(l.begin(), l.end());

    Builder bld;
    // Iterative post-order over the rooted tree.
    struct Frame {
        int node;
        int parent;
        std::size_t next_child = 0;
        std::vector<int> child_tops;
    };
    std::vector<Frame> stack;
    stack.push_back({root, -1});
    int final_top = -1;
    while (!stack.empty()) {
        Frame& f = stack.back();
        // Children in ascending node order for determinism.
        bool descended = false;
        while (f.next_child < adj[f.node].size()) {
            int c = adj[f.node][f.next_child];
            ++f.next_child;
            if (c == f.parent) continue;
            stack.push_back({c, f.node});
            descended = true;
            break;
        }
        if (descended) continue;
        // All children done: build this node.
        const std::vector<int>& bag = cbags[f.node];
        int top;
        if (f.child_tops.empty()) {
            top = bld.add({NodeType::Start, bag, -1, -1, -1});
        } else {
            // Morph each child subtree top to this bag, then join pairwise.
            std::vector<int> tops;
            for (int ct_ : f.child_tops) tops.push_back(bld.morph(ct_, bld.nodes[ct_].bag, bag));
            int acc = tops[0];
            for (std::size_t i = 1; i < tops.size(); ++i)
                acc = bld.add({NodeType::Join, bag, acc, tops[i], -1});
            top = acc;
        }
        int done_node = f.node;
        stack.pop_back();
        if (!stack.empty()) {
            stack.back().child_tops.push_back(top);
        } else {
            (void)done_node;
            final_top = top;
        }
    }
    // Empty the root bag with a forget chain.
    final_top = bld.morph(final_top, bld.nodes[final_top].bag, {});

    NiceTreeDecomposition nice;
    nice.nodes = std::move(bld.nodes);
    nice.root = final_top;
    return nice;
}

std::vector<int> forget_counts(const NiceTreeDecomposition& nice) {
    std::vector<int> f(nice.nodes.size(), 0);
    for (std::size_t i = 0; i < nice.nodes.size(); ++i) {
        const NiceNode& nd = nice.nodes[i];
        int c = nd.type == NodeType::Forget ? 1 : 0;
        if (nd.child1 >= 0) c += f[nd.child1];
        if (nd.child2 >= 0) c += f[nd.child2];
        f[i] = c;
    }
    return f;
}

namespace {

/// q(S, v): vertices outside S u {v} reachable from v through S.
int eliminated_degree(int n, const std::vector<std::vector<char>>& adj, unsigned S, int v) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{v};
    seen[v] = 1;
    int count = 0;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y = 0; y < n; ++y) {
            if (!adj[x][y] || seen[y]) continue;
            seen[y] = 1;
            if (S & (1u << y)) {
                stack.push_back(y);
            } else if (y != v) {
                ++count;
            }
        }
    }
    return count;
}

}  // namespace

ExactTreewidth small_exact_treewidth(int n_vertices, const std::vector<std::pair<int, int>>& graph_edges,
                                     int limit) {
    if (n_vertices > limit)
        throw std::invalid_argument("exact treewidth limited to " + std::to_string(limit) + " vertices");
    if (n_vertices == 0) return {-1, {}, {}};
    const int n = n_vertices;
    std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (auto [a, b] : graph_edges) {
        if (a < 0 || a >= n || b < 0 || b >= n || a == b) throw std::invalid_argument("bad graph edge");
        adj[a][b] = adj[b][a] = 1;
    }
    const unsigned full = (n == 32) ? ~0u : ((1u << n) - 1);
    // f[S] = width of the best elimination prefix that eliminates exactly S.
    std::vector<int> f(static_cast<std::size_t>(full) + 1, n);
    f[0] = -1;
    for (unsigned S = 1; S <= full; ++S) {
        int best = n;
        for (int v = 0; v < n; ++v) {
            if (!(S & (1u << v))) continue;
            unsigned Sp = S & ~(1u << v);
            int cand = std::max(f[Sp], eliminated_degree(n, adj, Sp, v));
            best = std::min(best, cand);
        }
        f[S] = best;
    }
    const int width = f[full];
    // g[X] = the eliminated set X can be completed with all remaining
    // elimination degrees <= width. Computed backward once, then used to
    // reconstruct the lexicographically smallest optimal elimination order.
    std::vector<char> g(static_cast<std::size_t>(full) + 1, 0);
    g[full] = 1;
    for (unsigned X = full; X-- > 0;) {
        for (int v = 0; v < n; ++v) {
            if (X & (1u << v)) continue;
            if (eliminated_degree(n, adj, X, v) <= width && g[X | (1u << v)]) {
                g[X] = 1;
                break;
            }
        }
    }
    std::vector<int> order;
    unsigned S = 0;
    for (int step = 0; step < n; ++step) {
        for (int v = 0; v < n; ++v) {
            if (S & (1u << v)) continue;
            if (eliminated_degree(n, adj, S, v) <= width && g[S | (1u << v)]) {
                order.push_back(v);
                S |= 1u << v;
                break;
            }
        }
    }
    TreeDecomposition dec = decomposition_from_elimination(n, graph_edges, order);
    return {width, std::move(dec), std::move(order)};
}

TreeDecomposition decomposition_from_elimination(int n_vertices,
                                                 const std::vector<std::pair<int, int>>& graph_edges,
                                                 const std::vector<int>& order) {
    const int n = n_vertices;
    if (static_cast<int>(order.size()) != n) throw std::invalid_argument("elimination order length mismatch");
    std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
    for (auto [a, b] : graph_edges) {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    std::vector<int> pos(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pos[order[i]] = i;

    TreeDecomposition dec;
    dec.bags.resize(static_cast<std::size_t>(n));
    std::vector<std::set<int>> fill = adj;
    for (int step = 0; step < n; ++step) {
        int v = order[step];
        std::vector<int> later;
        for (int w : fill[v])
            if (pos[w] > step) later.push_back(w);
        std::vector<int> bag = later;
        bag.push_back(v);
        std::sort(bag.begin(), bag.end());
        dec.bags[step] = std::move(bag);
        // Fill-in: later neighbors become a clique.
        for (std::size_t i = 0; i < later.size(); ++i)
            for (std::size_t j = i + 1; j < later.size(); ++j) {
                fill[later[i]].insert(later[j]);
                fill[later[j]].insert(later[i]);
            }
        for (int w : later) fill[w].erase(v);
    }
    for (int step = 0; step < n; ++step) {
        int v = order[step];
        // Parent: the bag of the earliest-eliminated later fill-neighbor.
        int parent = -1;
        for (int w : dec.bags[step]) {
            if (w == v) continue;
            if (parent == -1 || pos[w] < parent) parent = pos[w];
        }
        if (parent == -1 && step + 1 < n) parent = step + 1;  // end of a component: chain on
        if (parent != -1) dec.tree_edges.push_back({step, parent});
    }
    return dec;
}

}  // namespace pmx

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pmx {

/// A tree decomposition: one bag of players per node plus a tree over nodes.
/// Bags are kept sorted ascending.
struct TreeDecomposition {
    std::vector<std::vector<int>> bags;
    std::vector<std::pair<int, int>> tree_edges;
    std::optional<int> root;

    int nodes() const { return static_cast<int>(bags.size()); }
    int width() const;
};

/// First-class description of a decomposition defect.
struct Violation {
    std::string what;
};

/// Checks coverage, edge coverage, connectedness-per-player, and tree shape.
/// An empty result means the decomposition is valid for the graph.
std::vector<Violation> validate(const TreeDecomposition& dec, int n_vertices,
                                const std::vector<std::pair<int, int>>& graph_edges);

enum class NodeType { Start, Introduce, Forget, Join };

const char* node_type_name(NodeType t);

struct NiceNode {
    NodeType type = NodeType::Start;
    std::vector<int> bag;           // sorted ascending
    int child1 = -1;
    int child2 = -1;                // Join only
    int player = -1;                // Introduce/Forget: the added/removed player
};

/// Rooted binary decomposition with Start/Introduce/Forget/Join nodes and an
/// empty root bag. Node order is a valid bottom-up processing order
/// (children precede parents); the root is the last node.
struct NiceTreeDecomposition {
    std::vector<NiceNode> nodes;
    int root = -1;

    int width() const;
    int count(NodeType t) const;
};

/// Structural check of the nice-form invariants (types vs bags, empty root,
/// child ordering). Returns violations; empty means well-formed.
std::vector<Violation> validate_nice(const NiceTreeDecomposition& nice, int n_vertices,
                                     const std::vector<std::pair<int, int>>& graph_edges);

/// Converts a valid decomposition to nice form. Width is preserved exactly;
/// the root is the node with the lexicographically smallest bag contents, and
/// the output is deterministic for a fixed input.
NiceTreeDecomposition to_nice(const TreeDecomposition& dec, int n_vertices,
                              const std::vector<std::pair<int, int>>& graph_edges);

/// f(v) = number of Forget nodes in the subtree rooted at v (including v).
std::vector<int> forget_counts(const NiceTreeDecomposition& nice);

struct ExactTreewidth {
    int width = 0;
    TreeDecomposition decomposition;
    std::vector<int> elimination_order;
};

/// Minimum-width decomposition by dynamic programming over all elimination
/// orders. Intended for small instances; throws if n_vertices > limit.
/// Ties are broken toward the lexicographically smallest elimination order.
ExactTreewidth small_exact_treewidth(int n_vertices, const std::vector<std::pair<int, int>>& graph_edges,
                                     int limit = 12);

/// Builds a valid tree decomposition from an elimination order via the
/// fill-in construction.
TreeDecomposition decomposition_from_elimination(int n_vertices,
                                                 const std::vector<std::pair<int, int>>& graph_edges,
                                                 const std::vector<int>& order);

}  // namespace pmx

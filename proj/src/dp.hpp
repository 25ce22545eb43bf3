#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "constraints.hpp"
#include "game.hpp"
#include "treedec.hpp"

namespace pmx {

/// The rounded payoff set P: multiples of eps/(2n). unit_interval_size()
/// counts the values inside [0,1]; round() accepts any real so that partial
/// payoff sums (which can leave [0,1] after per-edge shift distribution)
/// still round with error at most spacing/2. Ties round downward.
struct RoundedPayoffGrid {
    double eps = 0.0;
    int n = 0;
    double spacing = 0.0;

    RoundedPayoffGrid() = default;
    RoundedPayoffGrid(double eps_, int n_) : eps(eps_), n(n_), spacing(eps_ / (2.0 * n_)) {}

    long round_index(double x) const { return static_cast<long>(std::ceil(x / spacing - 0.5)); }
    double value(long idx) const { return static_cast<double>(idx) * spacing; }
    /// |P cap [0,1]| = floor(2n/eps) + 1.
    long unit_interval_size() const { return static_cast<long>(std::floor(2.0 * n / eps)) + 1; }
};

/// DP table entry at a decomposition node: one k-uniform strategy per bag
/// player plus a rounded payoff vector per bag player summarizing what the
/// already-forgotten subtree pays them. Identity key: (strats, pays, accum).
struct Witness {
    std::vector<KUniformStrategy> strats;     // aligned with the sorted bag
    std::vector<std::vector<long>> pays;      // grid indices per bag player per action
    std::vector<Rational> accum;              // exact expected payoff collected so far (constrained min-type)
    OvdValue x;                               // constrained mode value
    std::vector<std::vector<double>> shadow;  // instrumentation: exact unrounded payoffs
    int child1 = -1;                          // provenance into child table(s)
    int child2 = -1;
};

struct NodeDiagnostics {
    int node = -1;
    NodeType type = NodeType::Start;
    std::vector<int> bag;
    std::size_t witnesses = 0;
    int forget_count = 0;          // f(v)
    double ledger_bound = 0.0;     // f(v) * eps / (4n)
    double ledger_max_error = 0.0; // instrumented max |rounded - exact|
};

struct SolveDiagnostics {
    std::vector<NodeDiagnostics> nodes;
    double candidate_bound = 0.0;  // m^{kw} (2n/eps)^{mw} capacity, for context
    std::size_t total_witnesses = 0;
    bool instrumented = false;
    double max_ledger_excess = 0.0;  // max over nodes of (error - bound), <= 0 when the ledger holds
};

struct SolverConfig {
    double eps = 0.5;
    std::optional<int> k;  // defaults to k_bound(n, max m, eps)
    double tol = 1e-9;
    const OvdConstraint* constraint = nullptr;
    /// Problem 4: restrict this player's generated strategies to supports
    /// inside the given action set.
    std::optional<std::pair<int, std::vector<int>>> support_restriction;
    bool instrument = false;
    std::size_t witness_budget = 50000000;
};

enum class SolveStatus {
    Solved,
    /// Empty root table: no k-uniform eps/4-NE exists (not a failure).
    NoCertifiedNe,
};

struct SolveResult {
    SolveStatus status = SolveStatus::NoCertifiedNe;
    std::vector<KUniformStrategy> k_profile;  // per player, when solved
    StrategyProfile profile;                  // induced mixed profile
    RegretReport report;                      // regrets in the normalized game
    OvdValue achieved;                        // constrained mode: g of the returned profile
    SolveDiagnostics diagnostics;
    PolymatrixGame normalized;                // the game the guarantee refers to
    std::vector<AffineRecord> affine;         // per-player map from the input game
    NiceTreeDecomposition nice;               // decomposition actually used
    int k = 0;

    SolveResult() : normalized({1}, {}) {}
};

/// Phase 1: bottom-up witness tables, one per nice-decomposition node (node
/// order is the NiceTreeDecomposition's). The game must be normalized.
std::vector<std::vector<Witness>> phase1(const PolymatrixGame& game, const NiceTreeDecomposition& nice,
                                         const SolverConfig& cfg, SolveDiagnostics* diag = nullptr);

/// Inequality (1): is the forgotten player eps-happy given its rounded payoff
/// vector and the bag neighbors' witness strategies?
bool happiness_test(const PolymatrixGame& game, const std::vector<int>& child_bag, const Witness& witness,
                    int forgotten, const RoundedPayoffGrid& grid, double eps, double tol = 1e-9);

/// Phase 2: unrolls a root witness into a full profile by walking provenance
/// pointers; each player takes the strategy recorded at its unique Forget node.
/// Constrained mode starts from the best-x root witness.
std::vector<KUniformStrategy> phase2(const std::vector<std::vector<Witness>>& tables,
                                     const NiceTreeDecomposition& nice, const SolverConfig& cfg);

/// Full pipeline: normalize, convert/compute the decomposition, phase 1,
/// phase 2, verification report. Pass cfg.constraint for the constrained
/// variant (the returned profile then maximizes/minimizes g over the
/// certified witness set).
SolveResult solve(const PolymatrixGame& game, const std::optional<TreeDecomposition>& dec,
                  const SolverConfig& cfg);

/// Interaction edges of a game as a plain list (for decomposition machinery).
std::vector<std::pair<int, int>> interaction_edges(const PolymatrixGame& game);

}  // namespace pmx

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "game.hpp"

namespace pmx {

/// Thrown when an enumeration would exceed its hard cap. Budgets are hard
/// errors, never silent truncation.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PureProfileResult {
    std::vector<int> actions;  // one pure strategy per player
    double max_regret = 0.0;

    StrategyProfile to_profile(const PolymatrixGame& game) const;
};

/// Exhaustive enumeration of pure profiles that are eps-WSNE (equivalently
/// eps-NE; supports are singletons). Lexicographic order over action tuples.
std::vector<PureProfileResult> enumerate_pure_ne(const PolymatrixGame& game, double eps,
                                                 std::uint64_t budget = 10000000, int threads = 1);

struct KUniformProfileResult {
    std::vector<KUniformStrategy> strategies;
    double max_regret = 0.0;

    StrategyProfile to_profile(const PolymatrixGame& game) const;
};

/// Exhaustive enumeration of k-uniform profiles that are eps-NE, in
/// lexicographic order over per-player multiset indices. The completeness
/// and constrained-dominance baselines are computed from this list.
std::vector<KUniformProfileResult> enumerate_k_uniform_ne(const PolymatrixGame& game, int k, double eps,
                                                          std::uint64_t budget = 1000000, int threads = 1);

/// Exhaustive search over the probability grid (per-player strategies with
/// probabilities that are multiples of grid_step) for eps-WSNE profiles.
/// Complete backtracking: a player's WSNE status is checked as soon as its
/// closed neighborhood is assigned, which prunes soundly; the budget caps
/// visited search nodes. Output sorted by per-player probability vectors.
std::vector<StrategyProfile> grid_search_wsne(const PolymatrixGame& game, double eps, double grid_step,
                                              std::uint64_t budget = 10000000);

struct SamplingCheckResult {
    double max_deviation = 0.0;             // over trials, players and pure strategies
    std::vector<double> trial_deviations;   // one entry per trial
    double threshold = 0.0;                 // eps/16 for the caller-supplied eps
    double fraction_within = 0.0;           // trials with deviation <= threshold
};

/// Draws k pure strategies per player from `profile` (with replacement),
/// plays the sampled multiset uniformly, and reports how far pure-strategy
/// payoffs move. Empirical support for the sampling bound; non-certifying.
SamplingCheckResult sampling_check(const PolymatrixGame& game, const StrategyProfile& profile, int k,
                                   int trials, std::uint64_t seed, double eps_for_fraction);

/// All per-player grid strategies for a given step (1/grid_step must be an
/// integer); deterministic order.
std::vector<MixedStrategy> grid_strategies(int m, double grid_step);

}  // namespace pmx

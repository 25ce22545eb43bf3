#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pmx {

/// Dense row-major matrix, sized for the tiny per-edge payoff blocks.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {}

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

/// One undirected interaction edge. payoff_u has shape m(u) x m(v) and pays
/// player u; payoff_v has shape m(v) x m(u) and pays player v.
struct GameEdge {
    int u = -1;
    int v = -1;
    Matrix payoff_u;
    Matrix payoff_v;
};

/// An n-player polymatrix game: an interaction graph whose edges carry one
/// bimatrix game each. A player's payoff is the sum over incident edges.
/// Immutable after construction; all operations on it are pure.
class PolymatrixGame {
public:
    PolymatrixGame(std::vector<int> actions, std::vector<GameEdge> edges);

    int players() const { return static_cast<int>(actions_.size()); }
    int actions(int player) const { return actions_.at(static_cast<std::size_t>(player)); }
    const std::vector<int>& action_counts() const { return actions_; }
    const std::vector<GameEdge>& edges() const { return edges_; }

    /// Neighbors of `player`, ascending.
    const std::vector<int>& neighbors(int player) const { return neighbors_[static_cast<std::size_t>(player)]; }
    int degree(int player) const { return static_cast<int>(neighbors(player).size()); }

    /// Payoff matrix of player i on edge (i, j); nullptr if (i, j) is not an edge.
    const Matrix* matrix(int i, int j) const;

    bool has_edge(int i, int j) const { return matrix(i, j) != nullptr; }

private:
    std::vector<int> actions_;
    std::vector<GameEdge> edges_;
    std::vector<std::vector<int>> neighbors_;
    // (i, j) -> index into edges_, with i < j.
    std::vector<std::vector<std::pair<int, int>>> edge_of_;  // per player: sorted (neighbor, edge idx)
};

struct MixedStrategy {
    std::vector<double> probs;

    int actions() const { return static_cast<int>(probs.size()); }
    /// Indices played with probability above the support threshold.
    std::vector<int> support(double threshold = 1e-12) const;
    bool valid(double tol = 1e-12) const;

    static MixedStrategy pure(int action, int m);
    static MixedStrategy uniform(int m);
};

/// Uniform distribution over a multiset of k pure strategies. Canonical form:
/// the multiset is stored sorted ascending.
struct KUniformStrategy {
    int k = 0;
    std::vector<int> multiset;

    MixedStrategy to_mixed(int m) const;

    bool operator==(const KUniformStrategy& o) const = default;
    auto operator<=>(const KUniformStrategy& o) const = default;
};

struct StrategyProfile {
    std::vector<MixedStrategy> strategies;

    int players() const { return static_cast<int>(strategies.size()); }
    bool shape_matches(const PolymatrixGame& g) const;
};

struct PlayerRegret {
    std::vector<double> payoff_vector;  // p_i(s), one entry per pure strategy
    double expected = 0.0;              // s_i . p_i(s)
    double best_response = 0.0;         // max p_i(s)
    double regret = 0.0;                // best_response - expected
    std::vector<double> pure_regrets;   // best_response - (p_i(s))_l
};

struct RegretReport {
    std::vector<PlayerRegret> players;
    double max_regret = 0.0;
    /// Largest regret over supported pure strategies (the WSNE quantity).
    double max_support_regret = 0.0;
};

/// Additive tolerance used by the equilibrium verifiers.
inline constexpr double kVerifyTol = 1e-9;
/// Probabilities above this count as played (support membership).
inline constexpr double kSupportThreshold = 1e-12;

/// p_i(s) = sum over neighbors j of A_ij s_j. Depends only on s_{-i}.
std::vector<double> payoff_vector(const PolymatrixGame& game, const StrategyProfile& profile, int player);

RegretReport regret_report(const PolymatrixGame& game, const StrategyProfile& profile);

/// eps-NE test: every player's regret <= eps + tol.
std::pair<bool, RegretReport> is_eps_ne(const PolymatrixGame& game, const StrategyProfile& profile, double eps);

/// eps-WSNE test: every supported pure strategy's regret <= eps + tol.
std::pair<bool, RegretReport> is_eps_wsne(const PolymatrixGame& game, const StrategyProfile& profile, double eps);

/// Per-player affine map applied by normalize: new_total = old_total * scale + shift.
struct AffineRecord {
    double scale = 1.0;
    double shift = 0.0;
};

struct NormalizedGame {
    PolymatrixGame game;
    std::vector<AffineRecord> records;
};

/// Exact pure-strategy payoff extremes of one player:
/// max_a sum_j max_b A_ij(a,b) and min_a sum_j min_b A_ij(a,b).
std::pair<double, double> pure_payoff_range(const PolymatrixGame& game, int player);

/// Rescales every player's payoffs so the pure maximum maps to 1 and the pure
/// minimum to 0 (constant players map to all-zero). The per-player shift is
/// split equally across the player's incident matrices. Argmax structure of
/// p_i(s) is unchanged for every profile.
NormalizedGame normalize(const PolymatrixGame& game);

/// True when every player's pure payoffs already lie in [-tol, 1+tol].
bool is_normalized(const PolymatrixGame& game, double tol = kVerifyTol);

/// All multisets of size k over {0..m-1}, lexicographically sorted; the count
/// is C(m+k-1, k).
std::vector<KUniformStrategy> enumerate_k_uniform(int m, int k);

/// Number of k-multisets over m elements, C(m+k-1, k), as a double (may be large).
double k_uniform_count(int m, int k);

/// k = ceil(128 (ln m + ln n - ln eps + ln 8) / eps^2): sample size that makes
/// the witness DP's guarantee hold.
long k_bound(long n, long m, double eps);
/// The existence variant, k = ceil(8 (ln m + ln n - ln eps + ln 8) / eps^2).
long k_bound_existence(long n, long m, double eps);

/// max over players of max over actions of |s_i(j) - s'_i(j)|.
double tv_distance(const StrategyProfile& a, const StrategyProfile& b);

struct Subgame {
    PolymatrixGame game;
    std::vector<int> to_sub;    // original player -> sub index, -1 if absent
    std::vector<int> to_orig;   // sub index -> original player
};

/// Restriction to a player subset: keeps only edges with both endpoints inside.
Subgame subgame(const PolymatrixGame& game, const std::vector<int>& players);

}  // namespace pmx

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "game.hpp"
#include "rational.hpp"

namespace pmx {

/// Strategy with exact rational probabilities (k-uniform strategies convert
/// losslessly). Used wherever constraint values must be exact.
using RationalStrategy = std::vector<Rational>;

struct RationalProfile {
    std::vector<RationalStrategy> strategies;

    static RationalProfile from_k_uniform(const std::vector<KUniformStrategy>& strats,
                                          const std::vector<int>& action_counts);
    StrategyProfile to_profile() const;
};

/// s_u . A . s_v computed exactly (matrix entries are dyadic rationals).
Rational rational_bilinear(const Matrix& A, const RationalStrategy& su, const RationalStrategy& sv);

/// Exact expected payoff of `player` against the profile entries of its
/// neighbors inside `members` (host-game edges).
Rational rational_member_payoff(const PolymatrixGame& host, const std::vector<char>& members,
                                const RationalProfile& profile, int player);

/// Value folded through the constrained DP. An empty optional is the fold
/// identity (no contributing player seen yet).
struct OvdValue {
    std::optional<Rational> v;

    bool defined() const { return v.has_value(); }
};

/// DP-side context handed to an OVD constraint when a player is forgotten.
/// All of the forgotten player's neighbors are settled at this point: bag
/// neighbors carry their witness strategies, and the payoff already collected
/// from previously forgotten neighbors arrives in `accum`.
struct DpForgetContext {
    const PolymatrixGame& game;
    int player;
    const KUniformStrategy& strategy;
    std::vector<std::pair<int, const KUniformStrategy*>> bag_neighbors;
    const Rational* accum = nullptr;  // exact payoff from already-forgotten neighbors
};

/// One-variable-decomposable constraint: an evaluation function g plus the
/// vertex-addition and disconnected-merge composition laws. `g`/`add`/`merge`
/// form the law face validated by ovd_validate; `dp_start`/`dp_forget`/`merge`
/// are the hooks the solver folds through the decomposition.
class OvdConstraint {
public:
    enum class Sense { Maximize, Minimize };

    virtual ~OvdConstraint() = default;

    virtual std::string name() const = 0;
    virtual Sense sense() const = 0;
    /// Whether witnesses must carry exact per-player payoff accumulators.
    virtual bool needs_accum() const { return false; }

    /// g evaluated on the subgame induced by `members` of `host`.
    virtual OvdValue g(const PolymatrixGame& host, const std::vector<char>& members,
                       const RationalProfile& profile) const = 0;

    /// Law: g(members + v) == add(host, members, profile, v, t, g(members)).
    virtual OvdValue add(const PolymatrixGame& host, const std::vector<char>& members,
                         const RationalProfile& profile, int v, const RationalStrategy& t,
                         const OvdValue& x) const = 0;

    /// Law: for disjoint member sets with no edges between them,
    /// g(union) == merge(g(left), g(right)).
    virtual OvdValue merge(const OvdValue& a, const OvdValue& b) const = 0;

    virtual OvdValue dp_start() const = 0;
    virtual OvdValue dp_forget(const DpForgetContext& ctx, const OvdValue& x) const = 0;

    /// True when `a` is strictly preferable to `b` under this constraint's
    /// sense (used for witness collisions and the root pick).
    bool better(const OvdValue& a, const OvdValue& b) const;
};

std::unique_ptr<OvdConstraint> ovd_welfare(OvdConstraint::Sense sense = OvdConstraint::Sense::Maximize);
std::unique_ptr<OvdConstraint> ovd_min_payoff();
std::unique_ptr<OvdConstraint> ovd_max_prob(int target = 0);
std::unique_ptr<OvdConstraint> ovd_total_support();
std::unique_ptr<OvdConstraint> ovd_min_support();
std::unique_ptr<OvdConstraint> ovd_player_support(int target);

struct OvdValidationReport {
    bool passed = true;
    long add_samples = 0;
    long merge_samples = 0;
    std::string first_failure;
};

/// Property-tests the two OVD consistency laws on random (subgame, vertex,
/// strategy) triples and random disjoint merges, with exact equality.
OvdValidationReport ovd_validate(const OvdConstraint& constraint, long add_samples, long merge_samples,
                                 std::uint64_t seed);

/// One of the nine decision-problem checkers. `problem` selects the row;
/// exactly one parameter field is meaningful per row.
struct ConstraintCheck {
    int problem = 1;                 // 1..9
    double u = 0.0;                  // P1, P2, P3
    std::vector<int> support_set;    // P4: allowed actions of player 0
    double d = 0.0;                  // P5
    double p = 0.0;                  // P6
    int k = 0;                       // P7, P8, P9
};

struct CheckOutcome {
    bool pass = false;
    bool equilibrium_ok = false;
    bool predicate_ok = false;
    double value = 0.0;  // the row quantity (welfare, min payoff, tv distance, ...)
    std::string explanation;
    RegretReport report;
    std::optional<RegretReport> second_report;
};

/// Verifies the equilibrium kind of the row (eps-NE for Problem 1, eps-WSNE
/// otherwise) and the row predicate. Problem 5 takes two profiles.
CheckOutcome check(const PolymatrixGame& game, const StrategyProfile& profile,
                   const StrategyProfile* second_profile, const ConstraintCheck& constraint, double eps);

/// Validates a constraint's parameter against its Table-1 domain; throws
/// std::invalid_argument on violation.
void validate_parameter(const ConstraintCheck& constraint, const PolymatrixGame& game);

}  // namespace pmx

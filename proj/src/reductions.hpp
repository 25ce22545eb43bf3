#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "constraints.hpp"
#include "game.hpp"
#include "rational.hpp"

namespace pmx {

/// Monotone CNF with exactly 3 distinct variables per clause (no negations by
/// construction). Variables are 0-based; clause triples are sorted ascending.
struct Formula {
    int n_vars = 0;
    std::vector<std::array<int, 3>> clauses;

    int n_clauses() const { return static_cast<int>(clauses.size()); }
    /// Every variable occurs in exactly 3 clauses.
    bool is_cubic() const;
    /// The variable-clause incidence graph is connected.
    bool is_connected() const;
    /// Throws on malformed clauses (out-of-range or repeated variables).
    void validate() const;
};

/// Exhaustive 1-in-3 search: the lexicographically first assignment with
/// exactly one true variable per clause, or nullopt. Throws above max_vars.
std::optional<std::vector<bool>> check_1in3(const Formula& formula, int max_vars = 26);

/// Whether `assignment` sets exactly one variable true in every clause.
bool is_1in3_assignment(const Formula& formula, const std::vector<bool>& assignment);

enum class GadgetKind { G, Gprime, Gtilde };
enum class Label { YES, NO, UNKNOWN };

const char* gadget_kind_name(GadgetKind kind);
const char* label_name(Label label);

/// eps in (0,1); c in (max(1 - 3 eps/2, 0), 1); kappa = (1-eps)/(1+2c), so
/// kappa + 2 c kappa = 1 - eps exactly and 0 < kappa < 1/3.
struct GadgetConstants {
    Rational eps;
    Rational c;
    Rational kappa;
};

/// c is the midpoint of its admissible interval, kept exact.
GadgetConstants pick_constants(const Rational& eps);

struct RationalMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Rational> a;

    RationalMatrix() = default;
    RationalMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, Rational(0)) {}
    Rational& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const Rational& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    Matrix to_double() const;
};

struct RationalEdge {
    int u = -1;
    int v = -1;
    RationalMatrix payoff_u;
    RationalMatrix payoff_v;
};

/// Exact-payoff twin of PolymatrixGame, used for the gadget self-checks.
struct RationalGame {
    std::vector<int> actions;
    std::vector<RationalEdge> edges;

    const RationalMatrix* matrix(int i, int j) const;
    std::vector<int> neighbors(int i) const;
    PolymatrixGame to_double() const;
};

/// A gadget game with its ground truth: player roles, strategy names, the
/// exact payoffs it was built from, and the 1-in-3 label when decidable.
struct LabeledGame {
    GadgetKind kind = GadgetKind::G;
    PolymatrixGame game;
    RationalGame exact;
    Formula formula;
    int n_vars = 0;
    int n_clauses = 0;
    std::vector<std::vector<std::string>> strategy_names;  // per player
    Label label = Label::UNKNOWN;
    std::optional<std::vector<bool>> witness_assignment;
    std::optional<GadgetConstants> constants;

    LabeledGame() : game({1}, {}) {}

    int variable_player(int var) const { return var; }
    int clause_player(int clause) const { return n_vars + clause; }
    bool is_variable(int player) const { return player < n_vars; }
};

/// Problem-1 gadget: variable players (True, False), clause players named by
/// their variables. Not normalized.
LabeledGame build_G(const Formula& formula, int label_budget_vars = 26);

/// Problems 2-9 gadget with the Out strategy and constants (c, kappa).
LabeledGame build_Gprime(const Formula& formula, const GadgetConstants& constants, int label_budget_vars = 26);

/// G' with every non-Out strategy duplicated (duplicates adjacent: s, s').
LabeledGame build_Gtilde(const Formula& formula, const GadgetConstants& constants, int label_budget_vars = 26);

/// The profile induced by a 1-in-3 satisfying assignment: variables play
/// their truth value, clauses play their unique true variable. For Gtilde,
/// split_duplicates spreads each choice half/half over the duplicate pair.
RationalProfile assignment_profile(const LabeledGame& labeled, const std::vector<bool>& assignment,
                                   bool split_duplicates = true);

/// The everyone-plays-Out profile (Gprime/Gtilde only).
RationalProfile all_out_profile(const LabeledGame& labeled);

// Exact evaluation on the rational twin.
std::vector<Rational> rational_payoff_vector(const RationalGame& game, const RationalProfile& profile, int player);

struct RationalRegretEntry {
    std::vector<Rational> payoff_vector;
    Rational expected;
    Rational best_response;
    Rational regret;
};

std::vector<RationalRegretEntry> rational_regret_report(const RationalGame& game, const RationalProfile& profile);

/// Largest regret of any supported pure strategy (exact WSNE quantity).
Rational rational_max_support_regret(const RationalGame& game, const RationalProfile& profile);

Rational rational_welfare(const RationalGame& game, const RationalProfile& profile);

/// A small hand-built cubic YES instance (6 variables, 6 clauses).
Formula cubic_yes_instance();

/// Random search over cubic incidence structures labeled by check_1in3;
/// returns the first NO instance found (the 4-variable complete structure
/// exists, so the search terminates quickly). Deterministic for a seed.
Formula find_cubic_no_instance(std::uint64_t seed, int max_vars = 8);

}  // namespace pmx

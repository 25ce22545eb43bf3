#include "reductions.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "rng.hpp"

namespace pmx {

bool Formula::is_cubic() const {
    std::vector<int> deg(static_cast<std::size_t>(n_vars), 0);
    for (const auto& cl : clauses)
        for (int v : cl) ++deg[static_cast<std::size_t>(v)];
    for (int d : deg)
        if (d != 3) return false;
    return true;
}

bool Formula::is_connected() const {
    const int total = n_vars + n_clauses();
    if (total == 0) return true;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(total));
    for (int c = 0; c < n_clauses(); ++c)
        for (int v : clauses[static_cast<std::size_t>(c)]) {
            adj[static_cast<std::size_t>(v)].push_back(n_vars + c);
            adj[static_cast<std::size_t>(n_vars + c)].push_back(v);
        }
    std::vector<char> seen(static_cast<std::size_t>(total), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int cnt = 0;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        ++cnt;
        for (int y : adj[static_cast<std::size_t>(x)])
            if (!seen[static_cast<std::size_t>(y)]) {
                seen[static_cast<std::size_t>(y)] = 1;
                stack.push_back(y);
            }
    }
    return cnt == total;
}

void Formula::validate() const {
    for (const auto& cl : clauses) {
        for (int v : cl)
            if (v < 0 || v >= n_vars)
                throw std::invalid_argument("clause variable " + std::to_string(v) + " out of range");
        if (cl[0] == cl[1] || cl[1] == cl[2] || cl[0] == cl[2])
            throw std::invalid_argument("clause variables must be distinct");
    }
}

bool is_1in3_assignment(const Formula& formula, const std::vector<bool>& assignment) {
    if (static_cast<int>(assignment.size()) != formula.n_vars) return false;
    for (const auto& cl : formula.clauses) {
        int trues = 0;
        for (int v : cl) trues += assignment[static_cast<std::size_t>(v)] ? 1 : 0;
        if (trues != 1) return false;
    }
    return true;
}

std::optional<std::vector<bool>> check_1in3(const Formula& formula, int max_vars) {
    formula.validate();
    if (formula.n_vars > max_vars)
        throw std::invalid_argument("exhaustive 1-in-3 search limited to " + std::to_string(max_vars) +
                                    " variables");
    const int n = formula.n_vars;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        std::vector<bool> assignment(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) assignment[static_cast<std::size_t>(i)] = (mask >> i) & 1;
        if (is_1in3_assignment(formula, assignment)) return assignment;
    }
    return std::nullopt;
}

const char* gadget_kind_name(GadgetKind kind) {
    switch (kind) {
        case GadgetKind::G: return "G";
        case GadgetKind::Gprime: return "Gprime";
        case GadgetKind::Gtilde: return "Gtilde";
    }
    return "?";
}

const char* label_name(Label label) {
    switch (label) {
        case Label::YES: return "YES";
        case Label::NO: return "NO";
        case Label::UNKNOWN: return "UNKNOWN";
    }
    return "?";
}

GadgetConstants pick_constants(const Rational& eps) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("gadget eps must be in (0, 1)");
    Rational lower = Rational(1) - Rational(3) * eps / 2;
    if (lower < 0) lower = 0;
    GadgetConstants gc;
    gc.eps = eps;
    gc.c = (lower + 1) / 2;
    gc.kappa = (Rational(1) - eps) / (Rational(1) + 2 * gc.c);
    if (!(gc.kappa > 0 && gc.kappa < make_rational(1, 3)))
        throw std::logic_error("kappa outside (0, 1/3)");
    return gc;
}

Matrix RationalMatrix::to_double() const {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) m.a[i] = a[i].get_d();
    return m;
}

const RationalMatrix* RationalGame::matrix(int i, int j) const {
    for (const RationalEdge& e : edges) {
        if (e.u == i && e.v == j) return &e.payoff_u;
        if (e.v == i && e.u == j) return &e.payoff_v;
    }
    return nullptr;
}

std::vector<int> RationalGame::neighbors(int i) const {
    std::vector<int> out;
    for (const RationalEdge& e : edges) {
        if (e.u == i) out.push_back(e.v);
        if (e.v == i) out.push_back(e.u);
    }
    std::sort(out.begin(), out.end());
    return out;
}

PolymatrixGame RationalGame::to_double() const {
    std::vector<GameEdge> dedges;
    for (const RationalEdge& e : edges)
        dedges.push_back({e.u, e.v, e.payoff_u.to_double(), e.payoff_v.to_double()});
    return PolymatrixGame(actions, std::move(dedges));
}

namespace {

Label label_formula(const Formula& formula, int budget_vars, std::optional<std::vector<bool>>& witness) {
    if (formula.n_vars > budget_vars) return Label::UNKNOWN;
    witness = check_1in3(formula, budget_vars);
    return witness ? Label::YES : Label::NO;
}

LabeledGame assemble(GadgetKind kind, const Formula& formula, std::optional<GadgetConstants> constants,
                     RationalGame exact, std::vector<std::vector<std::string>> names, int budget_vars) {
    LabeledGame out;
    out.kind = kind;
    out.formula = formula;
    out.n_vars = formula.n_vars;
    out.n_clauses = formula.n_clauses();
    out.exact = std::move(exact);
    out.game = out.exact.to_double();
    out.strategy_names = std::move(names);
    out.constants = std::move(constants);
    out.label = label_formula(formula, budget_vars, out.witness_assignment);
    return out;
}

}  // namespace

LabeledGame build_G(const Formula& formula, int label_budget_vars) {
    formula.validate();
    const int n = formula.n_vars, m = formula.n_clauses();
    RationalGame exact;
    exact.actions.assign(static_cast<std::size_t>(n), 2);
    for (int c = 0; c < m; ++c) exact.actions.push_back(3);
    std::vector<std::vector<std::string>> names(static_cast<std::size_t>(n + m));
    for (int v = 0; v < n; ++v) names[static_cast<std::size_t>(v)] = {"True", "False"};
    for (int c = 0; c < m; ++c) {
        const auto& cl = formula.clauses[static_cast<std::size_t>(c)];
        std::vector<std::string>& cn = names[static_cast<std::size_t>(n + c)];
        for (int s = 0; s < 3; ++s) cn.push_back(std::to_string(cl[static_cast<std::size_t>(s)] + 1));
        for (int s = 0; s < 3; ++s) {
            const int var = cl[static_cast<std::size_t>(s)];
            RationalEdge e;
            e.u = var;
            e.v = n + c;
            // Variable side, rows (True, False) x clause slots.
            e.payoff_u = RationalMatrix(2, 3);
            e.payoff_u.at(1, s) = Rational(-1);  // False while the clause names this variable
            // Clause side, rows = clause slots, cols (True, False).
            e.payoff_v = RationalMatrix(3, 2);
            for (int r = 0; r < 3; ++r) e.payoff_v.at(r, 0) = Rational(r == s ? 1 : -1);
            exact.edges.push_back(std::move(e));
        }
    }
    return assemble(GadgetKind::G, formula, std::nullopt, std::move(exact), std::move(names), label_budget_vars);
}

namespace {

/// Clause-side G' block for one edge: rows (slot0, slot1, slot2, Out), cols
/// (True, False, Out); `s` is the slot owned by the variable on this edge.
RationalMatrix gprime_clause_block(int s, const GadgetConstants& gc) {
    const Rational third = make_rational(1, 3);
    RationalMatrix A(4, 3);
    for (int r = 0; r < 3; ++r) {
        A.at(r, 0) = (r == s) ? gc.kappa : Rational(0);
        A.at(r, 1) = gc.c * gc.kappa;
        A.at(r, 2) = Rational(0);
    }
    A.at(3, 0) = A.at(3, 1) = A.at(3, 2) = third;
    return A;
}

/// Variable-side G' block: rows (True, False, Out), cols (slot0..2, Out).
RationalMatrix gprime_variable_block(int s, const GadgetConstants& gc) {
    const Rational third = make_rational(1, 3);
    const Rational reward = third - gc.eps / 3;
    RationalMatrix A(3, 4);
    for (int c = 0; c < 3; ++c) {
        A.at(0, c) = (c == s) ? reward : Rational(0);
        A.at(1, c) = (c == s) ? Rational(0) : reward;
        A.at(2, c) = third;
    }
    A.at(0, 3) = Rational(0);
    A.at(1, 3) = Rational(0);
    A.at(2, 3) = third;
    return A;
}

RationalGame gprime_exact(const Formula& formula, const GadgetConstants& gc) {
    const int n = formula.n_vars, m = formula.n_clauses();
    RationalGame exact;
    exact.actions.assign(static_cast<std::size_t>(n), 3);
    for (int c = 0; c < m; ++c) exact.actions.push_back(4);
    for (int c = 0; c < m; ++c) {
        const auto& cl = formula.clauses[static_cast<std::size_t>(c)];
        for (int s = 0; s < 3; ++s) {
            RationalEdge e;
            e.u = cl[static_cast<std::size_t>(s)];
            e.v = n + c;
            e.payoff_u = gprime_variable_block(s, gc);
            e.payoff_v = gprime_clause_block(s, gc);
            exact.edges.push_back(std::move(e));
        }
    }
    return exact;
}

std::vector<std::vector<std::string>> gprime_names(const Formula& formula) {
    const int n = formula.n_vars, m = formula.n_clauses();
    std::vector<std::vector<std::string>> names(static_cast<std::size_t>(n + m));
    for (int v = 0; v < n; ++v) names[static_cast<std::size_t>(v)] = {"True", "False", "Out"};
    for (int c = 0; c < m; ++c) {
        const auto& cl = formula.clauses[static_cast<std::size_t>(c)];
        std::vector<std::string>& cn = names[static_cast<std::size_t>(n + c)];
        for (int s = 0; s < 3; ++s) cn.push_back(std::to_string(cl[static_cast<std::size_t>(s)] + 1));
        cn.push_back("Out");
    }
    return names;
}

/// Index map for strategy duplication: original o (of m_orig, Out last) maps
/// to 2o and 2o+1; Out maps to the single last index.
int dup_index(int orig, int copy, int m_orig) {
    if (orig == m_orig - 1) return 2 * (m_orig - 1);  // Out
    return 2 * orig + copy;
}

RationalMatrix duplicate_block(const RationalMatrix& A) {
    const int mr = A.rows, mc = A.cols;
    RationalMatrix D(2 * mr - 1, 2 * mc - 1);
    for (int r = 0; r < mr; ++r)
        for (int rc = 0; rc < (r == mr - 1 ? 1 : 2); ++rc)
            for (int c = 0; c < mc; ++c)
                for (int cc = 0; cc < (c == mc - 1 ? 1 : 2); ++cc)
                    D.at(dup_index(r, rc, mr), dup_index(c, cc, mc)) = A.at(r, c);
    return D;
}

}  // namespace

LabeledGame build_Gprime(const Formula& formula, const GadgetConstants& gc, int label_budget_vars) {
    formula.validate();
    return assemble(GadgetKind::Gprime, formula, gc, gprime_exact(formula, gc), gprime_names(formula),
                    label_budget_vars);
}

LabeledGame build_Gtilde(const Formula& formula, const GadgetConstants& gc, int label_budget_vars) {
    formula.validate();
    RationalGame base = gprime_exact(formula, gc);
    RationalGame exact;
    for (int sz : base.actions) exact.actions.push_back(2 * sz - 1);
    for (const RationalEdge& e : base.edges) {
        RationalEdge d;
        d.u = e.u;
        d.v = e.v;
        d.payoff_u = duplicate_block(e.payoff_u);
        d.payoff_v = duplicate_block(e.payoff_v);
        exact.edges.push_back(std::move(d));
    }
    std::vector<std::vector<std::string>> names;
    for (const auto& pn : gprime_names(formula)) {
        std::vector<std::string> dn(2 * pn.size() - 1);
        for (std::size_t o = 0; o < pn.size(); ++o) {
            if (o + 1 == pn.size()) {
                dn[2 * o] = pn[o];  // Out
            } else {
                dn[2 * o] = pn[o];
                dn[2 * o + 1] = pn[o] + "'";
            }
        }
        names.push_back(std::move(dn));
    }
    return assemble(GadgetKind::Gtilde, formula, gc, std::move(exact), std::move(names), label_budget_vars);
}

RationalProfile assignment_profile(const LabeledGame& labeled, const std::vector<bool>& assignment,
                                   bool split_duplicates) {
    if (!is_1in3_assignment(labeled.formula, assignment))
        throw std::invalid_argument("assignment is not 1-in-3 satisfying");
    const int n = labeled.n_vars, m = labeled.n_clauses;
    RationalProfile profile;
    profile.strategies.resize(static_cast<std::size_t>(n + m));
    const bool dup = labeled.kind == GadgetKind::Gtilde && split_duplicates;
    auto assign = [&](int player, int orig_index, int m_orig) {
        RationalStrategy s(static_cast<std::size_t>(labeled.game.actions(player)), Rational(0));
        if (labeled.kind == GadgetKind::Gtilde) {
            if (dup) {
                s[static_cast<std::size_t>(dup_index(orig_index, 0, m_orig))] = make_rational(1, 2);
                s[static_cast<std::size_t>(dup_index(orig_index, 1, m_orig))] = make_rational(1, 2);
            } else {
                s[static_cast<std::size_t>(dup_index(orig_index, 0, m_orig))] = Rational(1);
            }
        } else {
            s[static_cast<std::size_t>(orig_index)] = Rational(1);
        }
        profile.strategies[static_cast<std::size_t>(player)] = std::move(s);
    };
    const int var_m_orig = labeled.kind == GadgetKind::G ? 2 : 3;
    for (int v = 0; v < n; ++v) assign(v, assignment[static_cast<std::size_t>(v)] ? 0 : 1, var_m_orig);
    for (int c = 0; c < m; ++c) {
        const auto& cl = labeled.formula.clauses[static_cast<std::size_t>(c)];
        int true_slot = -1;
        for (int s = 0; s < 3; ++s)
            if (assignment[static_cast<std::size_t>(cl[static_cast<std::size_t>(s)])]) true_slot = s;
        const int clause_m_orig = labeled.kind == GadgetKind::G ? 3 : 4;
        assign(labeled.clause_player(c), true_slot, clause_m_orig);
    }
    return profile;
}

RationalProfile all_out_profile(const LabeledGame& labeled) {
    if (labeled.kind == GadgetKind::G) throw std::invalid_argument("G has no Out strategy");
    RationalProfile profile;
    for (int p = 0; p < labeled.game.players(); ++p) {
        RationalStrategy s(static_cast<std::size_t>(labeled.game.actions(p)), Rational(0));
        s.back() = Rational(1);  // Out is always the last strategy
        profile.strategies.push_back(std::move(s));
    }
    return profile;
}

std::vector<Rational> rational_payoff_vector(const RationalGame& game, const RationalProfile& profile,
                                             int player) {
    const int m = game.actions.at(static_cast<std::size_t>(player));
    std::vector<Rational> out(static_cast<std::size_t>(m), Rational(0));
    for (const RationalEdge& e : game.edges) {
        int other = -1;
        const RationalMatrix* A = nullptr;
        if (e.u == player) {
            other = e.v;
            A = &e.payoff_u;
        } else if (e.v == player) {
            other = e.u;
            A = &e.payoff_v;
        } else {
            continue;
        }
        const RationalStrategy& sj = profile.strategies.at(static_cast<std::size_t>(other));
        for (int a = 0; a < A->rows; ++a)
            for (int b = 0; b < A->cols; ++b)
                if (sj[static_cast<std::size_t>(b)] != 0) out[static_cast<std::size_t>(a)] += A->at(a, b) * sj[static_cast<std::size_t>(b)];
    }
    return out;
}

std::vector<RationalRegretEntry> rational_regret_report(const RationalGame& game, const RationalProfile& profile) {
    std::vector<RationalRegretEntry> out;
    for (int i = 0; i < static_cast<int>(game.actions.size()); ++i) {
        RationalRegretEntry e;
        e.payoff_vector = rational_payoff_vector(game, profile, i);
        e.best_response = e.payoff_vector.front();
        for (const Rational& q : e.payoff_vector) e.best_response = std::max(e.best_response, q);
        e.expected = Rational(0);
        const RationalStrategy& si = profile.strategies.at(static_cast<std::size_t>(i));
        for (std::size_t a = 0; a < e.payoff_vector.size(); ++a) e.expected += si[a] * e.payoff_vector[a];
        e.regret = e.best_response - e.expected;
        out.push_back(std::move(e));
    }
    return out;
}

Rational rational_max_support_regret(const RationalGame& game, const RationalProfile& profile) {
    Rational worst(0);
    auto report = rational_regret_report(game, profile);
    for (std::size_t i = 0; i < report.size(); ++i) {
        const RationalStrategy& si = profile.strategies[i];
        for (std::size_t a = 0; a < report[i].payoff_vector.size(); ++a) {
            if (si[a] > 0) {
                Rational r = report[i].best_response - report[i].payoff_vector[a];
                if (r > worst) worst = r;
            }
        }
    }
    return worst;
}

Rational rational_welfare(const RationalGame& game, const RationalProfile& profile) {
    Rational total(0);
    auto report = rational_regret_report(game, profile);
    for (const auto& e : report) total += e.expected;
    return total;
}

Formula cubic_yes_instance() {
    Formula f;
    f.n_vars = 6;
    f.clauses = {{0, 2, 3}, {0, 4, 5}, {0, 2, 4}, {1, 3, 5}, {1, 3, 4}, {1, 2, 5}};
    return f;
}

Formula find_cubic_no_instance(std::uint64_t seed, int max_vars) {
    for (int n = 4; n <= max_vars; ++n) {
        for (int attempt = 0; attempt < 20000; ++attempt) {
            SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(attempt));
            // Shuffle three copies of each variable and cut into triples.
            std::vector<int> pool;
            for (int v = 0; v < n; ++v)
                for (int r = 0; r < 3; ++r) pool.push_back(v);
            for (std::size_t i = pool.size(); i > 1; --i)
                std::swap(pool[i - 1], pool[rng.next_below(i)]);
            Formula f;
            f.n_vars = n;
            bool ok = true;
            std::set<std::array<int, 3>> used;
            for (std::size_t c = 0; c + 2 < pool.size(); c += 3) {
                std::array<int, 3> cl{pool[c], pool[c + 1], pool[c + 2]};
                std::sort(cl.begin(), cl.end());
                if (cl[0] == cl[1] || cl[1] == cl[2] || !used.insert(cl).second) {
                    ok = false;
                    break;
                }
                f.clauses.push_back(cl);
            }
            if (!ok || !f.is_cubic() || !f.is_connected()) continue;
            if (!check_1in3(f)) return f;
        }
    }
    throw std::runtime_error("no cubic NO instance found within the search budget");
}

}  // namespace pmx

// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances and runtime caps are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "constraints.hpp"
#include "dp.hpp"
#include "helpers.hpp"
#include "oracle.hpp"
#include "rational.hpp"
#include "reductions.hpp"
#include "treedec.hpp"

using namespace pmx;
using namespace pmx::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Checker {
    bool ok = true;
    long checks = 0;
    std::ostringstream why;

    void expect(bool cond, const std::string& what) {
        ++checks;
        if (!cond && ok) {
            ok = false;
            why << what;
        } else if (!cond) {
            why << "; " << what;
        }
    }
};

int g_failures = 0;

void run_criterion(int id, const std::string& name, double time_cap_seconds,
                   const std::function<Outcome(Checker&)>& body) {
    Checker chk;
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body(chk);
    } catch (const std::exception& e) {
        chk.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    chk.expect(secs < time_cap_seconds,
               "runtime " + std::to_string(secs) + "s exceeds cap " + std::to_string(time_cap_seconds) + "s");
    bool pass = chk.ok && out.pass;
    if (!pass) ++g_failures;
    std::printf("[%s] criterion %2d: %s (%ld checks, %.2fs)%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                chk.checks, secs, out.detail.empty() ? "" : (" -- " + out.detail).c_str(),
                chk.ok ? "" : (" -- " + chk.why.str()).c_str());
    std::fflush(stdout);
}

std::vector<Formula> small_yes_formulas() {
    std::vector<Formula> out;
    Formula f1;
    f1.n_vars = 3;
    f1.clauses = {{0, 1, 2}};
    out.push_back(f1);
    Formula f2;
    f2.n_vars = 5;
    f2.clauses = {{0, 1, 2}, {0, 3, 4}};
    out.push_back(f2);
    Formula f3;
    f3.n_vars = 4;
    f3.clauses = {{0, 1, 2}, {1, 2, 3}};
    out.push_back(f3);
    out.push_back(cubic_yes_instance());
    Formula f5;
    f5.n_vars = 7;
    f5.clauses = {{0, 1, 2}, {2, 3, 4}, {4, 5, 6}};
    out.push_back(f5);
    return out;
}

void criterion1() {
    run_criterion(1, "gadget exactness (assignment NE of G, welfare m)", 1.0, [](Checker& chk) {
        for (const Formula& f : small_yes_formulas()) {
            auto assignment = check_1in3(f);
            chk.expect(assignment.has_value(), "formula unexpectedly unsatisfiable");
            LabeledGame lg = build_G(f);
            RationalProfile p = assignment_profile(lg, *assignment);
            auto rep = rational_regret_report(lg.exact, p);
            Rational welfare(0);
            for (const auto& e : rep) {
                chk.expect(e.regret == 0, "nonzero exact regret");
                welfare += e.expected;
            }
            chk.expect(welfare == f.n_clauses(), "welfare != m");
            chk.expect(regret_report(lg.game, p.to_profile()).max_regret <= 1e-12, "double regret > 1e-12");
        }
        return Outcome{true, "5 formulas"};
    });
}

void criterion2() {
    run_criterion(2, "gadget WSNE sharpness on a cubic YES instance", 1.0, [](Checker& chk) {
        Formula f = cubic_yes_instance();
        for (int tenths : {1, 3, 5, 7, 9}) {
            Rational eps = make_rational(tenths, 10);
            GadgetConstants gc = pick_constants(eps);
            LabeledGame lg = build_Gprime(f, gc);
            auto assignment = check_1in3(f);
            RationalProfile p = assignment_profile(lg, *assignment);
            auto rep = rational_regret_report(lg.exact, p);
            for (const auto& e : rep)
                chk.expect(e.expected == Rational(1) - eps, "payoff != 1 - eps exactly");
            const double deps = eps.get_d();
            chk.expect(is_eps_wsne(lg.game, p.to_profile(), deps).first, "not an eps-WSNE");
            chk.expect(!is_eps_wsne(lg.game, p.to_profile(), deps - 0.01).first,
                       "still a WSNE at eps - 0.01");
        }
        return Outcome{true, "eps in {0.1,0.3,0.5,0.7,0.9}"};
    });
}

void criterion3() {
    run_criterion(3, "all-Out equilibrium and its uniqueness on the cubic NO instance", 300.0, [](Checker& chk) {
        GadgetConstants gc = pick_constants(make_rational(1, 2));
        Formula no = find_cubic_no_instance(1234);
        for (const Formula& f : {cubic_yes_instance(), no}) {
            LabeledGame lg = build_Gprime(f, gc);
            RationalProfile out = all_out_profile(lg);
            auto rep = rational_regret_report(lg.exact, out);
            for (const auto& e : rep) chk.expect(e.expected == 1, "all-Out payoff != 1");
            chk.expect(rational_max_support_regret(lg.exact, out) == 0, "all-Out not a 0-WSNE");
        }
        LabeledGame lg = build_Gprime(no, gc);
        chk.expect(lg.label == Label::NO, "search did not label NO");
        std::vector<int> all_out_actions;
        for (int i = 0; i < lg.game.players(); ++i) all_out_actions.push_back(lg.game.actions(i) - 1);
        auto pure = enumerate_pure_ne(lg.game, 0.5);
        chk.expect(pure.size() == 1 && pure[0].actions == all_out_actions,
                   "pure enumeration found something besides all-Out");
        auto grid = grid_search_wsne(lg.game, 0.5, 0.25, 4000000000ULL);
        bool only_all_out = grid.size() == 1;
        if (only_all_out)
            for (int i = 0; i < lg.game.players(); ++i)
                if (grid[0].strategies[static_cast<std::size_t>(i)].probs.back() != 1.0) only_all_out = false;
        chk.expect(only_all_out, "grid search found " + std::to_string(grid.size()) + " WSNE");
        return Outcome{true, "grid step 0.25 over " + std::to_string(lg.game.players()) + " players"};
    });
}

void criterion4() {
    run_criterion(4, "duplication properties of Gtilde and checkers P6-P9", 1.0, [](Checker& chk) {
        GadgetConstants gc = pick_constants(make_rational(1, 2));
        LabeledGame lg = build_Gtilde(cubic_yes_instance(), gc);
        auto assignment = check_1in3(lg.formula);
        StrategyProfile s = assignment_profile(lg, *assignment, true).to_profile();
        chk.expect(is_eps_wsne(lg.game, s, 0.5).first, "half/half profile not an eps-WSNE");
        const int players = lg.game.players();
        int total_support = 0;
        for (int i = 0; i < players; ++i) {
            const auto& probs = s.strategies[static_cast<std::size_t>(i)].probs;
            chk.expect(*std::max_element(probs.begin(), probs.end()) <= 0.5 + 1e-12, "max prob > 0.5");
            const int sup = static_cast<int>(s.strategies[static_cast<std::size_t>(i)].support().size());
            chk.expect(sup == 2, "support size != 2");
            total_support += sup;
        }
        chk.expect(total_support == 2 * players, "total support != 2(n+m)");
        ConstraintCheck p6;
        p6.problem = 6;
        p6.p = 0.5;
        ConstraintCheck p7;
        p7.problem = 7;
        p7.k = 2 * players;
        ConstraintCheck p8;
        p8.problem = 8;
        p8.k = 2;
        ConstraintCheck p9;
        p9.problem = 9;
        p9.k = 2;
        chk.expect(check(lg.game, s, nullptr, p6, 0.5).pass, "P6 fails");
        chk.expect(check(lg.game, s, nullptr, p7, 0.5).pass, "P7 fails");
        chk.expect(check(lg.game, s, nullptr, p8, 0.5).pass, "P8 fails");
        chk.expect(check(lg.game, s, nullptr, p9, 0.5).pass, "P9 fails");
        return Outcome{true, "n+m = " + std::to_string(players)};
    });
}

constexpr int kCorpusSize = 100;

void criteria5to7() {
    run_criterion(567, "DP soundness, completeness, rounding ledger (corpus)", 600.0, [](Checker& chk) {
        long solves = 0, certified_empty = 0;
        for (int instance = 0; instance < kCorpusSize; ++instance) {
            PolymatrixGame g = random_corpus_game(1000 + static_cast<std::uint64_t>(instance));
            for (double eps : {0.4, 0.6, 0.8}) {
                for (int k : {1, 2, 3}) {
                    SolverConfig cfg;
                    cfg.eps = eps;
                    cfg.k = k;
                    cfg.instrument = true;
                    SolveResult res = solve(g, std::nullopt, cfg);
                    ++solves;
                    // Criterion 7: the rounding ledger at every node, eps/4 at the root.
                    for (const auto& nd : res.diagnostics.nodes)
                        chk.expect(nd.ledger_max_error <= nd.ledger_bound + 1e-12, "ledger violated at a node");
                    chk.expect(res.diagnostics.nodes.back().ledger_max_error <= eps / 4 + 1e-12,
                               "root ledger above eps/4");
                    // Criterion 6: completeness against the oracle.
                    auto baseline = enumerate_k_uniform_ne(g, k, eps / 4);
                    if (res.status == SolveStatus::Solved) {
                        // Criterion 5: soundness at 1.5 eps.
                        chk.expect(is_eps_ne(g, res.profile, 1.5 * eps).first, "solver output above 1.5 eps");
                        chk.expect(res.report.max_regret <= 1.5 * eps + 1e-9, "reported regret above bound");
                    } else {
                        ++certified_empty;
                        chk.expect(baseline.empty(), "certified empty but the oracle found a k-uniform eps/4-NE");
                    }
                }
            }
        }
        std::ostringstream d;
        d << solves << " solves, " << certified_empty << " certified-empty";
        return Outcome{true, d.str()};
    });
}

void criterion8() {
    run_criterion(8, "constrained dominance (welfare, min payoff) vs oracle", 900.0, [](Checker& chk) {
        long compared = 0;
        for (int instance = 0; instance < kCorpusSize; ++instance) {
            PolymatrixGame g = random_corpus_game(1000 + static_cast<std::uint64_t>(instance));
            std::vector<char> everyone(static_cast<std::size_t>(g.players()), 1);
            for (double eps : {0.4, 0.6, 0.8}) {
                for (int k : {1, 2, 3}) {
                    auto baseline = enumerate_k_uniform_ne(g, k, eps / 4);
                    if (baseline.empty()) continue;
                    ++compared;
                    {
                        auto welfare = ovd_welfare();
                        SolverConfig cfg;
                        cfg.eps = eps;
                        cfg.k = k;
                        cfg.constraint = welfare.get();
                        SolveResult res = solve(g, std::nullopt, cfg);
                        chk.expect(res.status == SolveStatus::Solved, "welfare-constrained solve missed");
                        Rational best;
                        bool first = true;
                        for (const auto& b : baseline) {
                            RationalProfile rp = RationalProfile::from_k_uniform(b.strategies, g.action_counts());
                            Rational w = *welfare->g(res.normalized, everyone, rp).v;
                            if (first || w > best) best = w;
                            first = false;
                        }
                        chk.expect(res.achieved.defined() && res.achieved.v->get_d() >= best.get_d() - 1e-9,
                                   "welfare below the oracle baseline");
                    }
                    {
                        auto minpay = ovd_min_payoff();
                        SolverConfig cfg;
                        cfg.eps = eps;
                        cfg.k = k;
                        cfg.constraint = minpay.get();
                        SolveResult res = solve(g, std::nullopt, cfg);
                        chk.expect(res.status == SolveStatus::Solved, "min-payoff-constrained solve missed");
                        Rational best;
                        bool first = true;
                        for (const auto& b : baseline) {
                            RationalProfile rp = RationalProfile::from_k_uniform(b.strategies, g.action_counts());
                            Rational w = *minpay->g(res.normalized, everyone, rp).v;
                            if (first || w < best) best = w;
                            first = false;
                        }
                        // Minimizing objective: achieved stays at or below the
                        // smallest baseline value.
                        chk.expect(res.achieved.defined() && res.achieved.v->get_d() <= best.get_d() + 1e-9,
                                   "min payoff above the oracle baseline");
                    }
                }
            }
        }
        return Outcome{compared > 0, std::to_string(compared) + " baselines compared"};
    });
}

void criterion9() {
    run_criterion(9, "OVD add/merge laws, 1000+1000 exact samples each", 120.0, [](Checker& chk) {
        std::vector<std::unique_ptr<OvdConstraint>> all;
        all.push_back(ovd_welfare());
        all.push_back(ovd_welfare(OvdConstraint::Sense::Minimize));
        all.push_back(ovd_min_payoff());
        all.push_back(ovd_max_prob(0));
        all.push_back(ovd_total_support());
        all.push_back(ovd_min_support());
        all.push_back(ovd_player_support(0));
        for (const auto& c : all) {
            OvdValidationReport rep = ovd_validate(*c, 1000, 1000, 20260809);
            chk.expect(rep.passed, c->name() + ": " + rep.first_failure);
            chk.expect(rep.add_samples == 1000 && rep.merge_samples == 1000, "sample counts off");
        }
        return Outcome{true, std::to_string(all.size()) + " instantiations"};
    });
}

void criterion10() {
    run_criterion(10, "nice-decomposition conversion bound on 100 random decompositions", 120.0,
                  [](Checker& chk) {
        SplitMix64 rng(424242);
        int done = 0;
        while (done < 100) {
            int n = 3 + static_cast<int>(rng.next_below(10));  // up to 12 vertices
            std::set<std::pair<int, int>> eset;
            for (int v = 1; v < n; ++v)
                eset.insert({static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v))), v});
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (rng.next_double() < 0.25) eset.insert({u, v});
            std::vector<std::pair<int, int>> graph(eset.begin(), eset.end());
            std::vector<int> order;
            for (int i = 0; i < n; ++i) order.push_back(i);
            for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.next_below(i)]);
            TreeDecomposition dec = decomposition_from_elimination(n, graph, order);
            ++done;
            NiceTreeDecomposition nice = to_nice(dec, n, graph);
            const int w = dec.width();
            chk.expect(nice.width() == w, "width changed");
            chk.expect(validate_nice(nice, n, graph).empty(), "nice-form invariants violated");
            chk.expect(static_cast<int>(nice.nodes.size()) <= 4 * dec.nodes() + 2 * w,
                       "node count above 4N + 2w");
            auto f = forget_counts(nice);
            chk.expect(f[static_cast<std::size_t>(nice.root)] == nice.count(NodeType::Forget),
                       "f(root) != total forget count");
        }
        return Outcome{true, "100 decompositions"};
    });
}

void criterion11() {
    run_criterion(11, "k-bound formula frozen values", 10.0, [](Checker& chk) {
        // Independent high-precision evaluation with long double arithmetic.
        auto precise = [](long n, long m, long double eps, long double factor) {
            long double v = factor *
                            (std::log(static_cast<long double>(m)) + std::log(static_cast<long double>(n)) -
                             std::log(eps) + std::log(8.0L)) /
                            (eps * eps);
            return static_cast<long>(std::ceil(v));
        };
        chk.expect(k_bound(4, 3, 0.5) == 2692, "k_bound(4,3,0.5) != 2692");
        chk.expect(precise(4, 3, 0.5L, 128.0L) == 2692, "high-precision evaluation disagrees (2692)");
        chk.expect(k_bound(1, 1, 1.0) == 267, "k_bound(1,1,1) != 267");
        chk.expect(precise(1, 1, 1.0L, 128.0L) == 267, "high-precision evaluation disagrees (267)");
        return Outcome{true, "2692 and 267"};
    });
}

void criterion12() {
    run_criterion(12, "sampling concentration (non-certifying)", 300.0, [](Checker& chk) {
        double worst_fraction = 1.0;
        for (int gi = 0; gi < 20; ++gi) {
            SplitMix64 rng(9000 + static_cast<std::uint64_t>(gi));
            int n = 2 + static_cast<int>(rng.next_below(3));  // 2..4 players
            std::vector<int> actions;
            for (int i = 0; i < n; ++i) actions.push_back(1 + static_cast<int>(rng.next_below(3)));
            std::vector<std::pair<int, int>> edges;
            for (int i = 1; i < n; ++i)
                edges.push_back({static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i))), i});
            PolymatrixGame g = normalize(random_game_on(actions, edges, rng.next())).game;
            StrategyProfile s = random_profile(g, rng.next());
            auto res = sampling_check(g, s, 10000, 100, 777, 0.8);  // threshold 0.05
            worst_fraction = std::min(worst_fraction, res.fraction_within);
            chk.expect(res.fraction_within >= 0.99, "fewer than 99% of trials within 0.05");
        }
        std::ostringstream d;
        d << "worst within-threshold fraction " << worst_fraction
          << " (supports, does not certify, the eps/16 sampling bound)";
        return Outcome{true, d.str()};
    });
}

}  // namespace

int main() {
    std::printf("polymatrix acceptance suite\n");
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criteria5to7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    criterion12();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion group(s) FAILED\n", g_failures);
    return 1;
}

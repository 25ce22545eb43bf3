#include <doctest.h>

#include <algorithm>

#include "game.hpp"
#include "helpers.hpp"
#include "reductions.hpp"

using namespace pmx;
using namespace pmx::testing;

namespace {

Formula k4_formula() {
    Formula f;
    f.n_vars = 4;
    f.clauses = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    return f;
}

RationalProfile pure_rational(const LabeledGame& lg, const std::vector<int>& actions) {
    RationalProfile p;
    for (int i = 0; i < lg.game.players(); ++i) {
        RationalStrategy s(static_cast<std::size_t>(lg.game.actions(i)), Rational(0));
        s[static_cast<std::size_t>(actions[static_cast<std::size_t>(i)])] = 1;
        p.strategies.push_back(std::move(s));
    }
    return p;
}

}  // namespace

TEST_CASE("check_1in3 basics") {
    Formula single;
    single.n_vars = 3;
    single.clauses = {{0, 1, 2}};
    auto a = check_1in3(single);
    REQUIRE(a.has_value());
    CHECK(*a == std::vector<bool>{true, false, false});  // lexicographically first

    CHECK_FALSE(check_1in3(k4_formula()).has_value());

    Formula empty;
    empty.n_vars = 2;
    CHECK(check_1in3(empty).has_value());  // vacuous

    Formula big;
    big.n_vars = 30;
    big.clauses = {{0, 1, 2}};
    CHECK_THROWS(check_1in3(big));
}

TEST_CASE("formula validation") {
    Formula bad;
    bad.n_vars = 3;
    bad.clauses = {{0, 1, 1}};
    CHECK_THROWS(bad.validate());
    Formula oob;
    oob.n_vars = 2;
    oob.clauses = {{0, 1, 2}};
    CHECK_THROWS(oob.validate());
}

TEST_CASE("cubic instances") {
    Formula yes = cubic_yes_instance();
    CHECK(yes.is_cubic());
    CHECK(yes.is_connected());
    CHECK(check_1in3(yes).has_value());

    Formula no = find_cubic_no_instance(1234);
    CHECK(no.is_cubic());
    CHECK(no.is_connected());
    CHECK_FALSE(check_1in3(no).has_value());
    // Determinism for a fixed seed.
    Formula no2 = find_cubic_no_instance(1234);
    CHECK(no.clauses == no2.clauses);

    CHECK(k4_formula().is_cubic());
}

TEST_CASE("pick_constants") {
    GadgetConstants half = pick_constants(make_rational(1, 2));
    CHECK(half.c == make_rational(5, 8));
    CHECK(half.kappa == make_rational(2, 9));
    CHECK(half.kappa + 2 * half.c * half.kappa == make_rational(1, 2));  // = 1 - eps

    GadgetConstants high = pick_constants(make_rational(9, 10));
    CHECK(high.c == make_rational(1, 2));
    CHECK(high.kappa == make_rational(1, 20));

    for (int num = 1; num <= 19; ++num) {
        GadgetConstants gc = pick_constants(make_rational(num, 20));
        CHECK(gc.kappa > 0);
        CHECK(gc.kappa < make_rational(1, 3));
        CHECK(gc.kappa * (Rational(1) + 2 * gc.c) == Rational(1) - gc.eps);
    }
    CHECK_THROWS(pick_constants(Rational(0)));
    CHECK_THROWS(pick_constants(Rational(1)));
}

TEST_CASE("build_G shapes, labels and roles") {
    Formula f = k4_formula();
    LabeledGame lg = build_G(f);
    CHECK(lg.game.players() == 8);
    CHECK(lg.label == Label::NO);
    for (int v = 0; v < 4; ++v) {
        CHECK(lg.game.actions(v) == 2);
        CHECK(lg.game.degree(v) == 3);  // cubic
    }
    for (int c = 0; c < 4; ++c) {
        CHECK(lg.game.actions(lg.clause_player(c)) == 3);
        CHECK(lg.game.degree(lg.clause_player(c)) == 3);
        // Clause strategies are named by 1-based variable index.
        const auto& names = lg.strategy_names[static_cast<std::size_t>(lg.clause_player(c))];
        for (int s = 0; s < 3; ++s)
            CHECK(names[static_cast<std::size_t>(s)] ==
                  std::to_string(f.clauses[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)] + 1));
    }
}

TEST_CASE("payoff caps in G on sampled profiles") {
    Formula f = cubic_yes_instance();
    LabeledGame lg = build_G(f);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        StrategyProfile s = random_profile(lg.game, seed);
        RegretReport rep = regret_report(lg.game, s);
        for (int v = 0; v < lg.n_vars; ++v) CHECK(rep.players[static_cast<std::size_t>(v)].expected <= 1e-9);
        for (int c = 0; c < lg.n_clauses; ++c)
            CHECK(rep.players[static_cast<std::size_t>(lg.clause_player(c))].expected <= 1.0 + 1e-9);
    }
}

TEST_CASE("clause payoff 1 forces the 1-in-3 pattern, exactly") {
    Formula single;
    single.n_vars = 3;
    single.clauses = {{0, 1, 2}};
    LabeledGame lg = build_G(single);
    int hits = 0;
    for (int mask = 0; mask < 8; ++mask)
        for (int cs = 0; cs < 3; ++cs) {
            std::vector<int> actions{(mask >> 0) & 1, (mask >> 1) & 1, (mask >> 2) & 1, cs};
            RationalProfile p = pure_rational(lg, actions);
            auto rep = rational_regret_report(lg.exact, p);
            if (rep[3].expected == 1) {
                ++hits;
                // Exactly one variable True (action 0) and the clause names it.
                int trues = 0;
                for (int v = 0; v < 3; ++v) trues += actions[static_cast<std::size_t>(v)] == 0 ? 1 : 0;
                CHECK(trues == 1);
                CHECK(actions[static_cast<std::size_t>(cs)] == 0);
            }
        }
    CHECK(hits == 3);  // one per choice of the true variable
}

TEST_CASE("assignment profile of G: exact NE with welfare m") {
    std::vector<Formula> formulas;
    {
        Formula f1;
        f1.n_vars = 3;
        f1.clauses = {{0, 1, 2}};
        formulas.push_back(f1);
        Formula f2;
        f2.n_vars = 5;
        f2.clauses = {{0, 1, 2}, {0, 3, 4}};
        formulas.push_back(f2);
        Formula f3;
        f3.n_vars = 4;
        f3.clauses = {{0, 1, 2}, {1, 2, 3}};
        formulas.push_back(f3);
        formulas.push_back(cubic_yes_instance());
        Formula f5;
        f5.n_vars = 7;
        f5.clauses = {{0, 1, 2}, {2, 3, 4}, {4, 5, 6}};
        formulas.push_back(f5);
    }
    for (const Formula& f : formulas) {
        auto assignment = check_1in3(f);
        REQUIRE(assignment.has_value());
        LabeledGame lg = build_G(f);
        CHECK(lg.label == Label::YES);
        RationalProfile p = assignment_profile(lg, *assignment);
        auto rep = rational_regret_report(lg.exact, p);
        Rational welfare(0);
        for (const auto& e : rep) {
            CHECK(e.regret == 0);  // exact rational zero
            welfare += e.expected;
        }
        CHECK(welfare == f.n_clauses());
        // Double path agrees within 1e-12.
        RegretReport drep = regret_report(lg.game, p.to_profile());
        CHECK(drep.max_regret <= 1e-12);
    }
}

TEST_CASE("no pure profile of an unsatisfiable G reaches welfare m") {
    LabeledGame lg = build_G(k4_formula());
    REQUIRE(lg.label == Label::NO);
    // All 2^4 * 3^4 pure profiles.
    for (int mask = 0; mask < 16; ++mask)
        for (int c = 0; c < 81; ++c) {
            std::vector<int> actions;
            for (int v = 0; v < 4; ++v) actions.push_back((mask >> v) & 1);
            int rest = c;
            for (int j = 0; j < 4; ++j) {
                actions.push_back(rest % 3);
                rest /= 3;
            }
            Rational welfare = rational_welfare(lg.exact, pure_rational(lg, actions));
            CHECK(welfare < lg.n_clauses);
        }
}

TEST_CASE("build_Gprime edge tables") {
    GadgetConstants gc = pick_constants(make_rational(1, 2));
    Formula single;
    single.n_vars = 3;
    single.clauses = {{0, 1, 2}};
    LabeledGame lg = build_Gprime(single, gc);
    CHECK(lg.game.actions(0) == 3);
    CHECK(lg.game.actions(lg.clause_player(0)) == 4);
    const Rational third = make_rational(1, 3);
    const Rational reward = third - gc.eps / 3;
    // Edge between the clause and variable 1 (slot 1).
    const RationalMatrix* cl = lg.exact.matrix(lg.clause_player(0), 1);
    REQUIRE(cl);
    CHECK(cl->at(1, 0) == gc.kappa);         // own row vs True
    CHECK(cl->at(0, 0) == 0);                // other rows vs True
    CHECK(cl->at(2, 1) == gc.c * gc.kappa);  // any non-Out row vs False
    CHECK(cl->at(0, 2) == 0);                // vs Out
    CHECK(cl->at(3, 0) == third);            // Out row
    CHECK(cl->at(3, 2) == third);
    const RationalMatrix* va = lg.exact.matrix(1, lg.clause_player(0));
    REQUIRE(va);
    CHECK(va->at(0, 1) == reward);  // True vs own slot
    CHECK(va->at(0, 0) == 0);       // True vs other slot
    CHECK(va->at(1, 0) == reward);  // False vs other slot
    CHECK(va->at(1, 1) == 0);       // False vs own slot
    CHECK(va->at(1, 3) == 0);       // False vs Out
    CHECK(va->at(2, 0) == third);   // Out row
    CHECK(va->at(2, 3) == third);
}

TEST_CASE("G' assignment payoffs are exactly 1 - eps on a cubic YES instance") {
    for (auto eps : {make_rational(1, 10), make_rational(1, 2), make_rational(9, 10)}) {
        GadgetConstants gc = pick_constants(eps);
        LabeledGame lg = build_Gprime(cubic_yes_instance(), gc);
        auto assignment = check_1in3(lg.formula);
        REQUIRE(assignment.has_value());
        RationalProfile p = assignment_profile(lg, *assignment);
        auto rep = rational_regret_report(lg.exact, p);
        for (const auto& e : rep) CHECK(e.expected == Rational(1) - eps);
        // eps-WSNE exactly: the sharpest supported regret is eps itself.
        CHECK(rational_max_support_regret(lg.exact, p) == eps);
        // No player uses Out.
        for (int i = 0; i < lg.game.players(); ++i)
            CHECK(p.strategies[static_cast<std::size_t>(i)].back() == 0);
    }
}

TEST_CASE("all-Out earns exactly 1 for every player on cubic instances") {
    GadgetConstants gc = pick_constants(make_rational(1, 2));
    for (const Formula& f : {cubic_yes_instance(), k4_formula()}) {
        LabeledGame lg = build_Gprime(f, gc);
        RationalProfile out = all_out_profile(lg);
        auto rep = rational_regret_report(lg.exact, out);
        for (const auto& e : rep) CHECK(e.expected == 1);
        CHECK(rational_max_support_regret(lg.exact, out) == 0);  // 0-WSNE
    }
}

TEST_CASE("all-Out is the unique pure eps-WSNE of a NO instance") {
    GadgetConstants gc = pick_constants(make_rational(1, 2));
    LabeledGame lg = build_Gprime(k4_formula(), gc);
    REQUIRE(lg.label == Label::NO);
    std::vector<int> counts;  // 3,3,3,3,4,4,4,4
    for (int i = 0; i < 8; ++i) counts.push_back(lg.game.actions(i));
    std::vector<int> actions(8, 0);
    int found = 0;
    for (;;) {
        StrategyProfile s;
        for (int i = 0; i < 8; ++i)
            s.strategies.push_back(
                MixedStrategy::pure(actions[static_cast<std::size_t>(i)], counts[static_cast<std::size_t>(i)]));
        if (is_eps_wsne(lg.game, s, 0.5).first) {
            ++found;
            for (int i = 0; i < 8; ++i)
                CHECK(actions[static_cast<std::size_t>(i)] == counts[static_cast<std::size_t>(i)] - 1);  // Out
        }
        int q = 0;
        for (; q < 8; ++q) {
            if (++actions[static_cast<std::size_t>(q)] < counts[static_cast<std::size_t>(q)]) break;
            actions[static_cast<std::size_t>(q)] = 0;
        }
        if (q == 8) break;
    }
    CHECK(found == 1);
}

TEST_CASE("Gtilde duplicates rows and columns bit-identically") {
    GadgetConstants gc = pick_constants(make_rational(3, 10));
    Formula single;
    single.n_vars = 3;
    single.clauses = {{0, 1, 2}};
    LabeledGame prime = build_Gprime(single, gc);
    LabeledGame tilde = build_Gtilde(single, gc);
    CHECK(tilde.game.actions(0) == 5);
    CHECK(tilde.game.actions(tilde.clause_player(0)) == 7);
    // Names carry primes; Out stays last and unduplicated.
    CHECK(tilde.strategy_names[0] == std::vector<std::string>{"True", "True'", "False", "False'", "Out"});
    const RationalMatrix* orig = prime.exact.matrix(3, 0);
    const RationalMatrix* dup = tilde.exact.matrix(3, 0);
    REQUIRE(orig);
    REQUIRE(dup);
    auto dup_idx = [](int o, int copy, int m_orig) { return o == m_orig - 1 ? 2 * o : 2 * o + copy; };
    for (int r = 0; r < 4; ++r)
        for (int rc = 0; rc < (r == 3 ? 1 : 2); ++rc)
            for (int c = 0; c < 3; ++c)
                for (int cc = 0; cc < (c == 2 ? 1 : 2); ++cc)
                    CHECK(dup->at(dup_idx(r, rc, 4), dup_idx(c, cc, 3)) == orig->at(r, c));
}

TEST_CASE("Gtilde half/half assignment profile properties") {
    GadgetConstants gc = pick_constants(make_rational(1, 2));
    LabeledGame lg = build_Gtilde(cubic_yes_instance(), gc);
    auto assignment = check_1in3(lg.formula);
    REQUIRE(assignment.has_value());
    RationalProfile p = assignment_profile(lg, *assignment, true);
    StrategyProfile s = p.to_profile();
    CHECK(is_eps_wsne(lg.game, s, 0.5).first);
    for (int i = 0; i < lg.game.players(); ++i) {
        const auto& probs = s.strategies[static_cast<std::size_t>(i)].probs;
        CHECK(*std::max_element(probs.begin(), probs.end()) == doctest::Approx(0.5));
        CHECK(s.strategies[static_cast<std::size_t>(i)].support().size() == 2);
        CHECK(probs.back() == 0.0);  // no Out
    }
    // Without duplicate splitting the profile is pure on the primary copies.
    StrategyProfile pure = assignment_profile(lg, *assignment, false).to_profile();
    for (int i = 0; i < lg.game.players(); ++i)
        CHECK(pure.strategies[static_cast<std::size_t>(i)].support().size() == 1);
    CHECK(is_eps_wsne(lg.game, pure, 0.5).first);
}

TEST_CASE("all-Out stays a 0-WSNE after duplication on the NO instance") {
    GadgetConstants gc = pick_constants(make_rational(1, 2));
    LabeledGame lg = build_Gtilde(k4_formula(), gc);
    REQUIRE(lg.label == Label::NO);
    RationalProfile out = all_out_profile(lg);
    CHECK(rational_max_support_regret(lg.exact, out) == 0);
    auto rep = rational_regret_report(lg.exact, out);
    for (const auto& e : rep) CHECK(e.expected == 1);
}

TEST_CASE("assignment_profile rejects non-satisfying assignments") {
    LabeledGame lg = build_G(cubic_yes_instance());
    std::vector<bool> wrong(6, true);
    CHECK_THROWS(assignment_profile(lg, wrong));
}

TEST_CASE("clause player names its true variable") {
    Formula single;
    single.n_vars = 3;
    single.clauses = {{0, 1, 2}};
    LabeledGame lg = build_G(single);
    RationalProfile p = assignment_profile(lg, std::vector<bool>{true, false, false});
    // Clause strategy "1" is slot 0.
    CHECK(p.strategies[3][0] == 1);
    CHECK(lg.strategy_names[3][0] == "1");
}

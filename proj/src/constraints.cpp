#include "constraints.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "rng.hpp"

namespace pmx {

RationalProfile RationalProfile::from_k_uniform(const std::vector<KUniformStrategy>& strats,
                                                const std::vector<int>& action_counts) {
    RationalProfile out;
    out.strategies.resize(strats.size());
    for (std::size_t i = 0; i < strats.size(); ++i) {
        RationalStrategy s(static_cast<std::size_t>(action_counts[i]), Rational(0));
        for (int idx : strats[i].multiset) s[static_cast<std::size_t>(idx)] += make_rational(1, strats[i].k);
        out.strategies[i] = std::move(s);
    }
    return out;
}

StrategyProfile RationalProfile::to_profile() const {
    StrategyProfile p;
    p.strategies.resize(strategies.size());
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        p.strategies[i].probs.resize(strategies[i].size());
        for (std::size_t j = 0; j < strategies[i].size(); ++j)
            p.strategies[i].probs[j] = strategies[i][j].get_d();
    }
    return p;
}

Rational rational_bilinear(const Matrix& A, const RationalStrategy& su, const RationalStrategy& sv) {
    Rational acc(0);
    for (int a = 0; a < A.rows; ++a) {
        if (su[a] == 0) continue;
        Rational row(0);
        for (int b = 0; b < A.cols; ++b) {
            if (sv[b] == 0) continue;
            row += rational_from_double(A.at(a, b)) * sv[b];
        }
        acc += su[a] * row;
    }
    return acc;
}

Rational rational_member_payoff(const PolymatrixGame& host, const std::vector<char>& members,
                                const RationalProfile& profile, int player) {
    Rational acc(0);
    for (int j : host.neighbors(player)) {
        if (!members[static_cast<std::size_t>(j)]) continue;
        acc += rational_bilinear(*host.matrix(player, j), profile.strategies[player], profile.strategies[j]);
    }
    return acc;
}

bool OvdConstraint::better(const OvdValue& a, const OvdValue& b) const {
    if (a.defined() != b.defined()) return a.defined();
    if (!a.defined()) return false;
    return sense() == Sense::Maximize ? *a.v > *b.v : *a.v < *b.v;
}

namespace {

Rational k_uniform_rational_payoff_against(const PolymatrixGame& game, int player,
                                           const KUniformStrategy& mine,
                                           const std::vector<std::pair<int, const KUniformStrategy*>>& others) {
    RationalStrategy si(static_cast<std::size_t>(game.actions(player)), Rational(0));
    for (int idx : mine.multiset) si[static_cast<std::size_t>(idx)] += make_rational(1, mine.k);
    Rational acc(0);
    for (auto [j, sj] : others) {
        RationalStrategy rj(static_cast<std::size_t>(game.actions(j)), Rational(0));
        for (int idx : sj->multiset) rj[static_cast<std::size_t>(idx)] += make_rational(1, sj->k);
        acc += rational_bilinear(*game.matrix(player, j), si, rj);
    }
    return acc;
}

int rational_support_size(const RationalStrategy& s) {
    int c = 0;
    for (const Rational& q : s)
        if (q > 0) ++c;
    return c;
}

/// Distinct pure strategies in the forgotten player's multiset.
int multiset_support(const DpForgetContext& ctx) {
    std::vector<char> played(static_cast<std::size_t>(ctx.game.actions(ctx.player)), 0);
    int sup = 0;
    for (int idx : ctx.strategy.multiset)
        if (!played[static_cast<std::size_t>(idx)]) {
            played[static_cast<std::size_t>(idx)] = 1;
            ++sup;
        }
    return sup;
}

class WelfareConstraint final : public OvdConstraint {
public:
    explicit WelfareConstraint(Sense sense) : sense_(sense) {}

    std::string name() const override {
        return sense_ == Sense::Maximize ? "welfare_max" : "welfare_min";
    }
    Sense sense() const override { return sense_; }

    OvdValue g(const PolymatrixGame& host, const std::vector<char>& members,
               const RationalProfile& profile) const override {
        // Total payoff over edges internal to the member set; each edge
        // contributes both endpoints' expected payoffs.
        Rational total(0);
        for (const GameEdge& e : host.edges()) {
            if (!members[e.u] || !members[e.v]) continue;
            total += rational_bilinear(e.payoff_u, profile.strategies[e.u], profile.strategies[e.v]);
            total += rational_bilinear(e.payoff_v, profile.strategies[e.v], profile.strategies[e.u]);
        }
        return {total};
    }

    OvdValue add(const PolymatrixGame& host, const std::vector<char>& members, const RationalProfile& profile,
                 int v, const RationalStrategy& t, const OvdValue& x) const override {
        Rational total = x.defined() ? *x.v : Rational(0);
        for (int j : host.neighbors(v)) {
            if (!members[static_cast<std::size_t>(j)]) continue;
            total += rational_bilinear(*host.matrix(v, j), t, profile.strategies[j]);
            total += rational_bilinear(*host.matrix(j, v), profile.strategies[j], t);
        }
        return {total};
    }

    OvdValue merge(const OvdValue& a, const OvdValue& b) const override {
        Rational total(0);
        if (a.defined()) total += *a.v;
        if (b.defined()) total += *b.v;
        return {total};
    }

    OvdValue dp_start() const override { return {Rational(0)}; }

    OvdValue dp_forget(const DpForgetContext& ctx, const OvdValue& x) const override {
        // Each edge is committed when its earlier endpoint is forgotten; the
        // later endpoint is then still in the bag, so both directions of the
        // edge are computable from witness data.
        Rational total = x.defined() ? *x.v : Rational(0);
        for (auto [j, sj] : ctx.bag_neighbors) {
            total += k_uniform_rational_payoff_against(ctx.game, ctx.player, ctx.strategy, {{j, sj}});
            total += k_uniform_rational_payoff_against(ctx.game, j, *sj, {{ctx.player, &ctx.strategy}});
        }
        return {total};
    }

private:
    Sense sense_;
};

class MinPayoffConstraint final : public OvdConstraint {
public:
    std::string name() const override { return "min_payoff"; }
    Sense sense() const override { return Sense::Minimize; }
    bool needs_accum() const override { return true; }

    /// g ranges over the payoff-complete members: players whose whole
    /// neighborhood lies inside the member set, so their host-game payoff is
    /// already determined.
    OvdValue g(const PolymatrixGame& host, const std::vector<char>& members,
               const RationalProfile& profile) const override {
        OvdValue out;
        for (int i = 0; i < host.players(); ++i) {
            if (!members[static_cast<std::size_t>(i)]) continue;
            if (!complete(host, members, i)) continue;
            Rational pay = rational_member_payoff(host, members, profile, i);
            if (!out.defined() || pay < *out.v) out.v = pay;
        }
        return out;
    }

    OvdValue add(const PolymatrixGame& host, const std::vector<char>& members, const RationalProfile& profile,
                 int v, const RationalStrategy& t, const OvdValue& x) const override {
        std::vector<char> extended = members;
        extended[static_cast<std::size_t>(v)] = 1;
        RationalProfile ext = profile;
        ext.strategies[static_cast<std::size_t>(v)] = t;
        OvdValue out = x;
        auto consider = [&](int w) {
            if (complete(host, members, w)) return;  // already counted
            if (!complete(host, extended, w)) return;
            Rational pay = rational_member_payoff(host, extended, ext, w);
            if (!out.defined() || pay < *out.v) out.v = pay;
        };
        consider(v);
        for (int j : host.neighbors(v))
            if (members[static_cast<std::size_t>(j)]) consider(j);
        return out;
    }

    OvdValue merge(const OvdValue& a, const OvdValue& b) const override {
        if (!a.defined()) return b;
        if (!b.defined()) return a;
        return {std::min(*a.v, *b.v)};
    }

    OvdValue dp_start() const override { return {}; }

    OvdValue dp_forget(const DpForgetContext& ctx, const OvdValue& x) const override {
        Rational pay = ctx.accum ? *ctx.accum : Rational(0);
        pay += k_uniform_rational_payoff_against(ctx.game, ctx.player, ctx.strategy, ctx.bag_neighbors);
        if (!x.defined() || pay < *x.v) return {pay};
        return x;
    }

private:
    static bool complete(const PolymatrixGame& host, const std::vector<char>& members, int w) {
        if (!members[static_cast<std::size_t>(w)]) return false;
        for (int j : host.neighbors(w))
            if (!members[static_cast<std::size_t>(j)]) return false;
        return true;
    }
};

/// Base for constraints whose value is determined by a single player's
/// strategy: g is defined once the target joins the member set and never
/// changes afterwards.
class SinglePlayerConstraint : public OvdConstraint {
public:
    explicit SinglePlayerConstraint(int target) : target_(target) {}

    OvdValue g(const PolymatrixGame&, const std::vector<char>& members,
               const RationalProfile& profile) const override {
        if (!members[static_cast<std::size_t>(target_)]) return {};
        return {measure(profile.strategies[static_cast<std::size_t>(target_)])};
    }

    OvdValue add(const PolymatrixGame&, const std::vector<char>&, const RationalProfile&, int v,
                 const RationalStrategy& t, const OvdValue& x) const override {
        if (v == target_) return {measure(t)};
        return x;
    }

    OvdValue merge(const OvdValue& a, const OvdValue& b) const override {
        return a.defined() ? a : b;
    }

    OvdValue dp_start() const override { return {}; }

    OvdValue dp_forget(const DpForgetContext& ctx, const OvdValue& x) const override {
        if (ctx.player != target_) return x;
        RationalStrategy s(static_cast<std::size_t>(ctx.game.actions(target_)), Rational(0));
        for (int idx : ctx.strategy.multiset) s[static_cast<std::size_t>(idx)] += make_rational(1, ctx.strategy.k);
        return {measure(s)};
    }

protected:
    virtual Rational measure(const RationalStrategy& s) const = 0;
    int target_;
};

class MaxProbConstraint final : public SinglePlayerConstraint {
public:
    using SinglePlayerConstraint::SinglePlayerConstraint;
    std::string name() const override { return "max_prob"; }
    Sense sense() const override { return Sense::Minimize; }

protected:
    Rational measure(const RationalStrategy& s) const override {
        Rational m(0);
        for (const Rational& q : s) m = std::max(m, q);
        return m;
    }
};

class PlayerSupportConstraint final : public SinglePlayerConstraint {
public:
    using SinglePlayerConstraint::SinglePlayerConstraint;
    std::string name() const override { return "player_support"; }
    Sense sense() const override { return Sense::Maximize; }

protected:
    Rational measure(const RationalStrategy& s) const override { return Rational(rational_support_size(s)); }
};

class TotalSupportConstraint final : public OvdConstraint {
public:
    std::string name() const override { return "total_support"; }
    Sense sense() const override { return Sense::Maximize; }

    OvdValue g(const PolymatrixGame& host, const std::vector<char>& members,
               const RationalProfile& profile) const override {
        Rational total(0);
        for (int i = 0; i < host.players(); ++i)
            if (members[static_cast<std::size_t>(i)])
                total += rational_support_size(profile.strategies[static_cast<std::size_t>(i)]);
        return {total};
    }

    OvdValue add(const PolymatrixGame&, const std::vector<char>&, const RationalProfile&, int,
                 const RationalStrategy& t, const OvdValue& x) const override {
        Rational total = x.defined() ? *x.v : Rational(0);
        return {total + rational_support_size(t)};
    }

    OvdValue merge(const OvdValue& a, const OvdValue& b) const override {
        Rational total(0);
        if (a.defined()) total += *a.v;
        if (b.defined()) total += *b.v;
        return {total};
    }

    OvdValue dp_start() const override { return {Rational(0)}; }

    OvdValue dp_forget(const DpForgetContext& ctx, const OvdValue& x) const override {
        Rational total = x.defined() ? *x.v : Rational(0);
        return {total + multiset_support(ctx)};
    }
};

class MinSupportConstraint final : public OvdConstraint {
public:
    std::string name() const override { return "min_support"; }
    Sense sense() const override { return Sense::Maximize; }

    OvdValue g(const PolymatrixGame& host, const std::vector<char>& members,
               const RationalProfile& profile) const override {
        OvdValue out;
        for (int i = 0; i < host.players(); ++i) {
            if (!members[static_cast<std::size_t>(i)]) continue;
            Rational sup(rational_support_size(profile.strategies[static_cast<std::size_t>(i)]));
            if (!out.defined() || sup < *out.v) out.v = sup;
        }
        return out;
    }

    OvdValue add(const PolymatrixGame&, const std::vector<char>&, const RationalProfile&, int,
                 const RationalStrategy& t, const OvdValue& x) const override {
        Rational sup(rational_support_size(t));
        if (!x.defined() || sup < *x.v) return {sup};
        return x;
    }

    OvdValue merge(const OvdValue& a, const OvdValue& b) const override {
        if (!a.defined()) return b;
        if (!b.defined()) return a;
        return {std::min(*a.v, *b.v)};
    }

    OvdValue dp_start() const override { return {}; }

    OvdValue dp_forget(const DpForgetContext& ctx, const OvdValue& x) const override {
        Rational s(multiset_support(ctx));
        if (!x.defined() || s < *x.v) return {s};
        return x;
    }
};

}  // namespace

std::unique_ptr<OvdConstraint> ovd_welfare(OvdConstraint::Sense sense) {
    return std::make_unique<WelfareConstraint>(sense);
}
std::unique_ptr<OvdConstraint> ovd_min_payoff() { return std::make_unique<MinPayoffConstraint>(); }
std::unique_ptr<OvdConstraint> ovd_max_prob(int target) { return std::make_unique<MaxProbConstraint>(target); }
std::unique_ptr<OvdConstraint> ovd_total_support() { return std::make_unique<TotalSupportConstraint>(); }
std::unique_ptr<OvdConstraint> ovd_min_support() { return std::make_unique<MinSupportConstraint>(); }
std::unique_ptr<OvdConstraint> ovd_player_support(int target) {
    return std::make_unique<PlayerSupportConstraint>(target);
}

namespace {

PolymatrixGame random_small_game(SplitMix64& rng, int min_players = 1, int max_players = 6) {
    int n = min_players + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_players - min_players + 1)));
    std::vector<int> actions;
    for (int i = 0; i < n; ++i) actions.push_back(1 + static_cast<int>(rng.next_below(3)));
    std::vector<GameEdge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (rng.next_double() > 0.5) continue;
            GameEdge e;
            e.u = u;
            e.v = v;
            e.payoff_u = Matrix(actions[u], actions[v]);
            e.payoff_v = Matrix(actions[v], actions[u]);
            for (double& x : e.payoff_u.a) x = rng.next_double();
            for (double& x : e.payoff_v.a) x = rng.next_double();
            edges.push_back(std::move(e));
        }
    return PolymatrixGame(std::move(actions), std::move(edges));
}

RationalProfile random_k_uniform_profile(SplitMix64& rng, const PolymatrixGame& game) {
    std::vector<KUniformStrategy> strats;
    for (int i = 0; i < game.players(); ++i) {
        int k = 1 + static_cast<int>(rng.next_below(3));
        KUniformStrategy s;
        s.k = k;
        for (int j = 0; j < k; ++j)
            s.multiset.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(game.actions(i)))));
        std::sort(s.multiset.begin(), s.multiset.end());
        strats.push_back(std::move(s));
    }
    return RationalProfile::from_k_uniform(strats, game.action_counts());
}

}  // namespace

OvdValidationReport ovd_validate(const OvdConstraint& constraint, long add_samples, long merge_samples,
                                 std::uint64_t seed) {
    OvdValidationReport rep;
    auto fail = [&](const std::string& what) {
        if (rep.passed) rep.first_failure = what;
        rep.passed = false;
    };
    // Add consistency: g(S + v) == add(host, S, profile, v, t, g(S)).
    for (long it = 0; it < add_samples; ++it) {
        SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(it), 1);
        PolymatrixGame host = random_small_game(rng, 2);
        RationalProfile profile = random_k_uniform_profile(rng, host);
        std::vector<char> members(static_cast<std::size_t>(host.players()), 0);
        for (auto& m : members) m = rng.next_double() < 0.5 ? 1 : 0;
        std::vector<int> outside;
        for (int i = 0; i < host.players(); ++i)
            if (!members[static_cast<std::size_t>(i)]) outside.push_back(i);
        if (outside.empty()) outside.push_back(0), members[0] = 0;
        int v = outside[static_cast<std::size_t>(rng.next_below(outside.size()))];
        OvdValue before = constraint.g(host, members, profile);
        OvdValue via_add = constraint.add(host, members, profile, v,
                                          profile.strategies[static_cast<std::size_t>(v)], before);
        std::vector<char> extended = members;
        extended[static_cast<std::size_t>(v)] = 1;
        OvdValue direct = constraint.g(host, extended, profile);
        ++rep.add_samples;
        if (via_add.defined() != direct.defined() || (direct.defined() && *via_add.v != *direct.v)) {
            fail("add law violated at sample " + std::to_string(it));
        }
    }
    // Merge consistency on guaranteed-disconnected halves: the host is a
    // disjoint union of two games.
    for (long it = 0; it < merge_samples; ++it) {
        SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(it), 2);
        PolymatrixGame left = random_small_game(rng, 1, 3);
        PolymatrixGame right = random_small_game(rng, 1, 3);
        std::vector<int> actions = left.action_counts();
        for (int a : right.action_counts()) actions.push_back(a);
        std::vector<GameEdge> edges = left.edges();
        for (GameEdge e : right.edges()) {
            e.u += left.players();
            e.v += left.players();
            edges.push_back(std::move(e));
        }
        PolymatrixGame host(std::move(actions), std::move(edges));
        RationalProfile profile = random_k_uniform_profile(rng, host);
        std::vector<char> m1(static_cast<std::size_t>(host.players()), 0);
        std::vector<char> m2(static_cast<std::size_t>(host.players()), 0);
        for (int i = 0; i < left.players(); ++i) m1[static_cast<std::size_t>(i)] = rng.next_double() < 0.7;
        for (int i = left.players(); i < host.players(); ++i) m2[static_cast<std::size_t>(i)] = rng.next_double() < 0.7;
        std::vector<char> both(static_cast<std::size_t>(host.players()), 0);
        for (std::size_t i = 0; i < both.size(); ++i) both[i] = m1[i] || m2[i];
        OvdValue merged = constraint.merge(constraint.g(host, m1, profile), constraint.g(host, m2, profile));
        OvdValue direct = constraint.g(host, both, profile);
        ++rep.merge_samples;
        if (merged.defined() != direct.defined() || (direct.defined() && *merged.v != *direct.v)) {
            fail("merge law violated at sample " + std::to_string(it));
        }
    }
    return rep;
}

void validate_parameter(const ConstraintCheck& c, const PolymatrixGame& game) {
    const int n = game.players();
    auto bad = [&](const std::string& what) { throw std::invalid_argument("constraint parameter: " + what); };
    switch (c.problem) {
        case 1:
            if (!(c.u > 0.0 && c.u <= n)) bad("Problem 1 requires u in (0, n]");
            break;
        case 2:
            if (!(c.u >= 0.0 && c.u < n)) bad("Problem 2 requires u in [0, n)");
            break;
        case 3:
            if (!(c.u >= 0.0 && c.u < 1.0)) bad("Problem 3 requires u in [0, 1)");
            break;
        case 4: {
            if (c.support_set.empty()) bad("Problem 4 requires a non-empty action set");
            for (int a : c.support_set)
                if (a < 0 || a >= game.actions(0)) bad("Problem 4 action out of range for player 1");
            break;
        }
        case 5:
            if (!(c.d > 0.0 && c.d <= 1.0)) bad("Problem 5 requires d in (0, 1]");
            break;
        case 6:
            if (!(c.p > 0.0 && c.p < 1.0)) bad("Problem 6 requires p in (0, 1)");
            break;
        case 7: {
            int total = 0;
            for (int i = 0; i < n; ++i) total += game.actions(i);
            if (!(c.k >= 1 && c.k <= total)) bad("Problem 7 requires k in [1, total action count]");
            break;
        }
        case 8: {
            int mn = game.actions(0);
            for (int i = 1; i < n; ++i) mn = std::min(mn, game.actions(i));
            if (!(c.k >= 1 && c.k <= mn)) bad("Problem 8 requires k in [1, min action count]");
            break;
        }
        case 9:
            if (!(c.k >= 1 && c.k <= game.actions(0))) bad("Problem 9 requires k in [1, m(player 1)]");
            break;
        default:
            bad("problem must be 1..9");
    }
}

CheckOutcome check(const PolymatrixGame& game, const StrategyProfile& profile,
                   const StrategyProfile* second_profile, const ConstraintCheck& c, double eps) {
    validate_parameter(c, game);
    if ((c.problem == 5) != (second_profile != nullptr))
        throw std::invalid_argument(c.problem == 5 ? "Problem 5 requires two profiles"
                                                   : "only Problem 5 takes two profiles");
    CheckOutcome out;
    std::ostringstream why;
    auto [eq_ok, rep] = c.problem == 1 ? is_eps_ne(game, profile, eps) : is_eps_wsne(game, profile, eps);
    out.report = rep;
    out.equilibrium_ok = eq_ok;
    if (c.problem == 5) {
        auto [eq2, rep2] = is_eps_wsne(game, *second_profile, eps);
        out.second_report = rep2;
        out.equilibrium_ok = out.equilibrium_ok && eq2;
    }
    const char* kind = c.problem == 1 ? "eps-NE" : "eps-WSNE";
    why << (out.equilibrium_ok ? "profile is a " : "profile is NOT a ") << kind << " at eps=" << eps;

    auto expected_payoffs = [&](const RegretReport& r) {
        std::vector<double> v;
        for (const auto& pr : r.players) v.push_back(pr.expected);
        return v;
    };
    switch (c.problem) {
        case 1:
        case 2: {
            double welfare = 0.0;
            for (double e : expected_payoffs(out.report)) welfare += e;
            out.value = welfare;
            out.predicate_ok = c.problem == 1 ? welfare >= c.u - kVerifyTol : welfare <= c.u + kVerifyTol;
            why << "; total payoff " << welfare << (c.problem == 1 ? " >= " : " <= ") << c.u << " is "
                << (out.predicate_ok ? "true" : "false");
            break;
        }
        case 3: {
            auto pays = expected_payoffs(out.report);
            out.value = *std::min_element(pays.begin(), pays.end());
            out.predicate_ok = out.value <= c.u + kVerifyTol;
            why << "; min payoff " << out.value << " <= " << c.u << " is " << (out.predicate_ok ? "true" : "false");
            break;
        }
        case 4: {
            auto sup = profile.strategies.at(0).support(kSupportThreshold);
            bool inside = true;
            for (int a : sup)
                if (!std::count(c.support_set.begin(), c.support_set.end(), a)) inside = false;
            out.value = static_cast<double>(sup.size());
            out.predicate_ok = inside;
            why << "; supp(s_1) subset of S is " << (inside ? "true" : "false");
            break;
        }
        case 5: {
            out.value = tv_distance(profile, *second_profile);
            out.predicate_ok = out.value >= c.d - kVerifyTol;
            why << "; TV distance " << out.value << " >= " << c.d << " is " << (out.predicate_ok ? "true" : "false");
            break;
        }
        case 6: {
            const auto& probs = profile.strategies.at(0).probs;
            out.value = *std::max_element(probs.begin(), probs.end());
            out.predicate_ok = out.value <= c.p + kVerifyTol;
            why << "; max_j s_1(j) = " << out.value << " <= " << c.p << " is "
                << (out.predicate_ok ? "true" : "false");
            break;
        }
        case 7: {
            int total = 0;
            for (const auto& s : profile.strategies) total += static_cast<int>(s.support(kSupportThreshold).size());
            out.value = total;
            out.predicate_ok = total >= c.k;
            why << "; total support " << total << " >= " << c.k << " is " << (out.predicate_ok ? "true" : "false");
            break;
        }
        case 8: {
            int mn = static_cast<int>(profile.strategies.at(0).support(kSupportThreshold).size());
            for (const auto& s : profile.strategies)
                mn = std::min(mn, static_cast<int>(s.support(kSupportThreshold).size()));
            out.value = mn;
            out.predicate_ok = mn >= c.k;
            why << "; min support " << mn << " >= " << c.k << " is " << (out.predicate_ok ? "true" : "false");
            break;
        }
        case 9: {
            int sup = static_cast<int>(profile.strategies.at(0).support(kSupportThreshold).size());
            out.value = sup;
            out.predicate_ok = sup >= c.k;
            why << "; |supp(s_1)| = " << sup << " >= " << c.k << " is " << (out.predicate_ok ? "true" : "false");
            break;
        }
    }
    out.pass = out.equilibrium_ok && out.predicate_ok;
    out.explanation = why.str();
    return out;
}

}  // namespace pmx

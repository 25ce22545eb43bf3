#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "game.hpp"
#include "rng.hpp"

namespace pmx::testing {

/// Random game on a given interaction graph with payoffs uniform in [0, 1].
inline PolymatrixGame random_game_on(const std::vector<int>& actions,
                                     const std::vector<std::pair<int, int>>& edges, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<GameEdge> ge;
    for (auto [u, v] : edges) {
        GameEdge e;
        e.u = u;
        e.v = v;
        e.payoff_u = Matrix(actions[static_cast<std::size_t>(u)], actions[static_cast<std::size_t>(v)]);
        e.payoff_v = Matrix(actions[static_cast<std::size_t>(v)], actions[static_cast<std::size_t>(u)]);
        for (double& x : e.payoff_u.a) x = rng.next_double();
        for (double& x : e.payoff_v.a) x = rng.next_double();
        ge.push_back(std::move(e));
    }
    return PolymatrixGame(actions, std::move(ge));
}

/// Random tree/path/star style corpus instance: n <= 6, m(i) <= 3, w <= 2.
inline PolymatrixGame random_desk_game(std::uint64_t seed) {
    SplitMix64 rng(seed);
    const int n = 2 + static_cast<int>(rng.next_below(5));  // 2..6
    std::vector<int> actions;
    for (int i = 0; i < n; ++i) actions.push_back(1 + static_cast<int>(rng.next_below(3)));
    std::vector<std::pair<int, int>> edges;
    const int shape = static_cast<int>(rng.next_below(3));
    if (shape == 0) {  // path
        for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    } else if (shape == 1) {  // star
        for (int i = 1; i < n; ++i) edges.push_back({0, i});
    } else {  // random tree
        for (int i = 1; i < n; ++i) edges.push_back({static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i))), i});
    }
    return random_game_on(actions, edges, rng.next());
}

/// Corpus instance for the solver checks: a path/star/tree skeleton with an
/// occasional extra edge (treewidth <= 2), payoffs in [0,1], then normalized.
inline PolymatrixGame random_corpus_game(std::uint64_t seed) {
    SplitMix64 rng(seed);
    const int n = 2 + static_cast<int>(rng.next_below(5));  // 2..6
    std::vector<int> actions;
    for (int i = 0; i < n; ++i) actions.push_back(1 + static_cast<int>(rng.next_below(3)));
    std::vector<std::pair<int, int>> edges;
    const int shape = static_cast<int>(rng.next_below(3));
    if (shape == 0) {
        for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    } else if (shape == 1) {
        for (int i = 1; i < n; ++i) edges.push_back({0, i});
    } else {
        for (int i = 1; i < n; ++i)
            edges.push_back({static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i))), i});
    }
    if (n >= 3 && rng.next_double() < 0.4) {  // widen to treewidth 2
        int u = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        if (u != v) {
            auto e = std::minmax(u, v);
            if (!std::count(edges.begin(), edges.end(), std::make_pair(e.first, e.second)))
                edges.push_back({e.first, e.second});
        }
    }
    return normalize(random_game_on(actions, edges, rng.next())).game;
}

inline StrategyProfile random_profile(const PolymatrixGame& game, std::uint64_t seed) {
    SplitMix64 rng(seed);
    StrategyProfile p;
    for (int i = 0; i < game.players(); ++i) {
        MixedStrategy s;
        double total = 0.0;
        for (int a = 0; a < game.actions(i); ++a) {
            s.probs.push_back(-std::log(1.0 - rng.next_double()));
            total += s.probs.back();
        }
        for (double& x : s.probs) x /= total;
        p.strategies.push_back(std::move(s));
    }
    return p;
}

inline StrategyProfile random_pure_profile(const PolymatrixGame& game, std::uint64_t seed) {
    SplitMix64 rng(seed);
    StrategyProfile p;
    for (int i = 0; i < game.players(); ++i)
        p.strategies.push_back(MixedStrategy::pure(
            static_cast<int>(rng.next_below(static_cast<std::uint64_t>(game.actions(i)))), game.actions(i)));
    return p;
}

/// Independent payoff oracle: expectation over all opponent pure-strategy
/// combinations weighted by the product distribution (not the per-edge sum
/// the implementation uses).
inline std::vector<double> payoff_vector_oracle(const PolymatrixGame& game, const StrategyProfile& profile,
                                                int player) {
    std::vector<int> nbrs = game.neighbors(player);
    std::vector<double> out(static_cast<std::size_t>(game.actions(player)), 0.0);
    std::vector<int> combo(nbrs.size(), 0);
    for (;;) {
        double weight = 1.0;
        for (std::size_t q = 0; q < nbrs.size(); ++q)
            weight *= profile.strategies[static_cast<std::size_t>(nbrs[q])].probs[static_cast<std::size_t>(combo[q])];
        for (int a = 0; a < game.actions(player); ++a) {
            double total = 0.0;
            for (std::size_t q = 0; q < nbrs.size(); ++q)
                total += game.matrix(player, nbrs[q])->at(a, combo[q]);
            out[static_cast<std::size_t>(a)] += weight * total;
        }
        std::size_t q = 0;
        for (; q < nbrs.size(); ++q) {
            if (++combo[q] < game.actions(nbrs[q])) break;
            combo[q] = 0;
        }
        if (q == nbrs.size()) break;
    }
    return out;
}

/// Max regret computed through the oracle payoff path.
inline double max_regret_oracle(const PolymatrixGame& game, const StrategyProfile& profile) {
    double worst = 0.0;
    for (int i = 0; i < game.players(); ++i) {
        auto pay = payoff_vector_oracle(game, profile, i);
        double best = pay[0], expected = 0.0;
        for (double x : pay) best = std::max(best, x);
        for (int a = 0; a < game.actions(i); ++a)
            expected += profile.strategies[static_cast<std::size_t>(i)].probs[static_cast<std::size_t>(a)] * pay[static_cast<std::size_t>(a)];
        worst = std::max(worst, best - expected);
    }
    return worst;
}

}  // namespace pmx::testing

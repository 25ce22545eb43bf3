#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "rng.hpp"

namespace pmx {

StrategyProfile PureProfileResult::to_profile(const PolymatrixGame& game) const {
    StrategyProfile p;
    for (int i = 0; i < game.players(); ++i)
        p.strategies.push_back(MixedStrategy::pure(actions[static_cast<std::size_t>(i)], game.actions(i)));
    return p;
}

StrategyProfile KUniformProfileResult::to_profile(const PolymatrixGame& game) const {
    StrategyProfile p;
    for (int i = 0; i < game.players(); ++i)
        p.strategies.push_back(strategies[static_cast<std::size_t>(i)].to_mixed(game.actions(i)));
    return p;
}

namespace {

/// Per-player best-response payoff and played payoff for a pure profile,
/// using direct matrix lookups.
double pure_profile_max_regret(const PolymatrixGame& game, const std::vector<int>& actions) {
    double worst = 0.0;
    for (int i = 0; i < game.players(); ++i) {
        std::vector<double> pay(static_cast<std::size_t>(game.actions(i)), 0.0);
        for (int j : game.neighbors(i)) {
            const Matrix& A = *game.matrix(i, j);
            const int b = actions[static_cast<std::size_t>(j)];
            for (int a = 0; a < A.rows; ++a) pay[static_cast<std::size_t>(a)] += A.at(a, b);
        }
        double best = *std::max_element(pay.begin(), pay.end());
        worst = std::max(worst, best - pay[static_cast<std::size_t>(actions[static_cast<std::size_t>(i)])]);
    }
    return worst;
}

/// Splits [0, total) into per-thread chunks and merges results in order.
template <typename Fn>
void run_chunks(std::uint64_t total, int threads, Fn&& fn) {
    if (threads <= 1 || total < 2) {
        fn(0, 0, total);
        return;
    }
    const std::uint64_t t = std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), total);
    std::vector<std::thread> pool;
    for (std::uint64_t c = 0; c < t; ++c) {
        std::uint64_t lo = total * c / t, hi = total * (c + 1) / t;
        pool.emplace_back([&fn, c, lo, hi] { fn(static_cast<int>(c), lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<PureProfileResult> enumerate_pure_ne(const PolymatrixGame& game, double eps, std::uint64_t budget,
                                                 int threads) {
    if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
    const int n = game.players();
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
        if (total > budget / static_cast<std::uint64_t>(game.actions(i)) + 1)
            throw BudgetExceeded("pure profile count exceeds budget " + std::to_string(budget));
        total *= static_cast<std::uint64_t>(game.actions(i));
    }
    if (total > budget) throw BudgetExceeded("pure profile count exceeds budget " + std::to_string(budget));

    const int nthreads = std::max(threads, 1);
    std::vector<std::vector<PureProfileResult>> partial(static_cast<std::size_t>(std::max<std::uint64_t>(
        1, std::min<std::uint64_t>(static_cast<std::uint64_t>(nthreads), std::max<std::uint64_t>(total, 1)))));
    run_chunks(total, nthreads, [&](int chunk, std::uint64_t lo, std::uint64_t hi) {
        std::vector<int> actions(static_cast<std::size_t>(n), 0);
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            std::uint64_t rest = idx;
            for (int i = n - 1; i >= 0; --i) {
                actions[static_cast<std::size_t>(i)] = static_cast<int>(rest % game.actions(i));
                rest /= static_cast<std::uint64_t>(game.actions(i));
            }
            double regret = pure_profile_max_regret(game, actions);
            if (regret <= eps + kVerifyTol)
                partial[static_cast<std::size_t>(chunk)].push_back({actions, regret});
        }
    });
    std::vector<PureProfileResult> out;
    for (auto& chunk : partial)
        for (auto& r : chunk) out.push_back(std::move(r));
    return out;
}

std::vector<KUniformProfileResult> enumerate_k_uniform_ne(const PolymatrixGame& game, int k, double eps,
                                                          std::uint64_t budget, int threads) {
    if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const int n = game.players();
    std::vector<std::vector<KUniformStrategy>> options;
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
        options.push_back(enumerate_k_uniform(game.actions(i), k));
        if (total > budget / options.back().size() + 1)
            throw BudgetExceeded("k-uniform profile count exceeds budget " + std::to_string(budget));
        total *= options.back().size();
    }
    if (total > budget) throw BudgetExceeded("k-uniform profile count exceeds budget " + std::to_string(budget));

    // Precompute per-edge payoff contributions for every opponent strategy.
    struct EdgeCache {
        int me, other;
        std::vector<std::vector<double>> by_other_strategy;  // [opp strat idx][my action]
    };
    std::vector<std::vector<EdgeCache>> caches(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j : game.neighbors(i)) {
            EdgeCache c;
            c.me = i;
            c.other = j;
            const Matrix& A = *game.matrix(i, j);
            for (const KUniformStrategy& sj : options[static_cast<std::size_t>(j)]) {
                MixedStrategy mj = sj.to_mixed(game.actions(j));
                std::vector<double> col(static_cast<std::size_t>(game.actions(i)), 0.0);
                for (int a = 0; a < A.rows; ++a) {
                    double acc = 0.0;
                    for (int b = 0; b < A.cols; ++b) acc += A.at(a, b) * mj.probs[static_cast<std::size_t>(b)];
                    col[static_cast<std::size_t>(a)] = acc;
                }
                c.by_other_strategy.push_back(std::move(col));
            }
            caches[static_cast<std::size_t>(i)].push_back(std::move(c));
        }
    }

    const int nthreads = std::max(threads, 1);
    std::vector<std::vector<KUniformProfileResult>> partial(static_cast<std::size_t>(std::max<std::uint64_t>(
        1, std::min<std::uint64_t>(static_cast<std::uint64_t>(nthreads), std::max<std::uint64_t>(total, 1)))));
    run_chunks(total, nthreads, [&](int chunk, std::uint64_t lo, std::uint64_t hi) {
        std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
        std::vector<double> pay;
        for (std::uint64_t flat = lo; flat < hi; ++flat) {
            std::uint64_t rest = flat;
            for (int i = n - 1; i >= 0; --i) {
                idx[static_cast<std::size_t>(i)] = rest % options[static_cast<std::size_t>(i)].size();
                rest /= options[static_cast<std::size_t>(i)].size();
            }
            double worst = 0.0;
            for (int i = 0; i < n && worst <= eps + kVerifyTol; ++i) {
                pay.assign(static_cast<std::size_t>(game.actions(i)), 0.0);
                for (const EdgeCache& c : caches[static_cast<std::size_t>(i)]) {
                    const auto& col = c.by_other_strategy[idx[static_cast<std::size_t>(c.other)]];
                    for (std::size_t a = 0; a < col.size(); ++a) pay[a] += col[a];
                }
                const KUniformStrategy& si = options[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
                double best = *std::max_element(pay.begin(), pay.end());
                double expected = 0.0;
                for (int a : si.multiset) expected += pay[static_cast<std::size_t>(a)];
                expected /= si.k;
                worst = std::max(worst, best - expected);
            }
            if (worst <= eps + kVerifyTol) {
                KUniformProfileResult r;
                for (int i = 0; i < n; ++i)
                    r.strategies.push_back(options[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]]);
                r.max_regret = worst;
                partial[static_cast<std::size_t>(chunk)].push_back(std::move(r));
            }
        }
    });
    std::vector<KUniformProfileResult> out;
    for (auto& chunk : partial)
        for (auto& r : chunk) out.push_back(std::move(r));
    return out;
}

std::vector<MixedStrategy> grid_strategies(int m, double grid_step) {
    if (grid_step <= 0 || grid_step > 1) throw std::invalid_argument("grid_step must be in (0, 1]");
    const double inv = 1.0 / grid_step;
    const long steps = std::lround(inv);
    if (std::abs(inv - static_cast<double>(steps)) > 1e-9)
        throw std::invalid_argument("1/grid_step must be an integer");
    std::vector<MixedStrategy> out;
    std::vector<long> parts(static_cast<std::size_t>(m), 0);
    // All compositions of `steps` into m nonnegative parts, lexicographic.
    auto emit = [&](auto&& self, int pos, long remaining) -> void {
        if (pos == m - 1) {
            parts[static_cast<std::size_t>(pos)] = remaining;
            MixedStrategy s;
            for (long p : parts) s.probs.push_back(static_cast<double>(p) / static_cast<double>(steps));
            out.push_back(std::move(s));
            return;
        }
        for (long take = 0; take <= remaining; ++take) {
            parts[static_cast<std::size_t>(pos)] = take;
            self(self, pos + 1, remaining - take);
        }
    };
    emit(emit, 0, steps);
    return out;
}

namespace {

struct GridSearcher {
    const PolymatrixGame& game;
    double eps = 0.0;
    std::uint64_t budget = 0;
    std::uint64_t visited = 0;
    std::vector<std::vector<MixedStrategy>> options{};  // per player
    std::vector<int> order{};                           // assignment order
    std::vector<std::vector<int>> checks_at{};          // per order position: players to verify
    std::vector<int> chosen{};                          // per player: option index, -1 unassigned
    std::vector<StrategyProfile> results{};

    bool player_happy(int q) const {
        std::vector<double> pay(static_cast<std::size_t>(game.actions(q)), 0.0);
        for (int j : game.neighbors(q)) {
            const Matrix& A = *game.matrix(q, j);
            const MixedStrategy& sj = options[static_cast<std::size_t>(j)][static_cast<std::size_t>(
                chosen[static_cast<std::size_t>(j)])];
            for (int a = 0; a < A.rows; ++a) {
                double acc = 0.0;
                for (int b = 0; b < A.cols; ++b) acc += A.at(a, b) * sj.probs[static_cast<std::size_t>(b)];
                pay[static_cast<std::size_t>(a)] += acc;
            }
        }
        double best = *std::max_element(pay.begin(), pay.end());
        const MixedStrategy& sq =
            options[static_cast<std::size_t>(q)][static_cast<std::size_t>(chosen[static_cast<std::size_t>(q)])];
        for (int a = 0; a < game.actions(q); ++a)
            if (sq.probs[static_cast<std::size_t>(a)] > kSupportThreshold && pay[static_cast<std::size_t>(a)] < best - eps - kVerifyTol)
                return false;
        return true;
    }

    void dfs(std::size_t pos) {
        if (pos == order.size()) {
            StrategyProfile p;
            for (int i = 0; i < game.players(); ++i)
                p.strategies.push_back(options[static_cast<std::size_t>(i)][static_cast<std::size_t>(
                    chosen[static_cast<std::size_t>(i)])]);
            results.push_back(std::move(p));
            return;
        }
        const int player = order[pos];
        for (std::size_t oi = 0; oi < options[static_cast<std::size_t>(player)].size(); ++oi) {
            if (++visited > budget)
                throw BudgetExceeded("grid search budget exceeded at " + std::to_string(budget) + " nodes");
            chosen[static_cast<std::size_t>(player)] = static_cast<int>(oi);
            bool ok = true;
            for (int q : checks_at[pos])
                if (!player_happy(q)) {
                    ok = false;
                    break;
                }
            if (ok) dfs(pos + 1);
        }
        chosen[static_cast<std::size_t>(player)] = -1;
    }
};

}  // namespace

std::vector<StrategyProfile> grid_search_wsne(const PolymatrixGame& game, double eps, double grid_step,
                                              std::uint64_t budget) {
    if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
    const int n = game.players();
    GridSearcher gs{.game = game, .eps = eps, .budget = budget};
    for (int i = 0; i < n; ++i) gs.options.push_back(grid_strategies(game.actions(i), grid_step));

    // Assignment order: repeatedly close the cheapest open neighborhood.
    // Pick the player whose unassigned closed neighborhood is smallest and
    // append it (small domains first), so happiness checks fire early.
    std::vector<char> placed(static_cast<std::size_t>(n), 0);
    while (static_cast<int>(gs.order.size()) < n) {
        int best_q = -1;
        std::size_t best_size = 0;
        for (int q = 0; q < n; ++q) {
            std::vector<int> missing;
            if (!placed[static_cast<std::size_t>(q)]) missing.push_back(q);
            for (int j : game.neighbors(q))
                if (!placed[static_cast<std::size_t>(j)]) missing.push_back(j);
            if (missing.empty()) continue;
            if (best_q == -1 || missing.size() < best_size) {
                best_q = q;
                best_size = missing.size();
            }
        }
        if (best_q == -1) break;
        std::vector<int> missing;
        if (!placed[static_cast<std::size_t>(best_q)]) missing.push_back(best_q);
        for (int j : game.neighbors(best_q))
            if (!placed[static_cast<std::size_t>(j)]) missing.push_back(j);
        std::sort(missing.begin(), missing.end(), [&](int a, int b) {
            auto da = gs.options[static_cast<std::size_t>(a)].size();
            auto db = gs.options[static_cast<std::size_t>(b)].size();
            return da != db ? da < db : a < b;
        });
        for (int p : missing) {
            placed[static_cast<std::size_t>(p)] = 1;
            gs.order.push_back(p);
        }
    }
    // Checks fire at the position where a player's closed neighborhood completes.
    std::vector<int> position(static_cast<std::size_t>(n), 0);
    for (std::size_t pos = 0; pos < gs.order.size(); ++pos)
        position[static_cast<std::size_t>(gs.order[pos])] = static_cast<int>(pos);
    gs.checks_at.assign(gs.order.size(), {});
    for (int q = 0; q < n; ++q) {
        int when = position[static_cast<std::size_t>(q)];
        for (int j : game.neighbors(q)) when = std::max(when, position[static_cast<std::size_t>(j)]);
        gs.checks_at[static_cast<std::size_t>(when)].push_back(q);
    }
    gs.chosen.assign(static_cast<std::size_t>(n), -1);
    if (n > 0) gs.dfs(0);
    else gs.results.push_back({});

    std::sort(gs.results.begin(), gs.results.end(), [](const StrategyProfile& a, const StrategyProfile& b) {
        for (std::size_t i = 0; i < a.strategies.size(); ++i)
            if (a.strategies[i].probs != b.strategies[i].probs) return a.strategies[i].probs < b.strategies[i].probs;
        return false;
    });
    return gs.results;
}

SamplingCheckResult sampling_check(const PolymatrixGame& game, const StrategyProfile& profile, int k,
                                   int trials, std::uint64_t seed, double eps_for_fraction) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (!profile.shape_matches(game)) throw std::invalid_argument("profile shape does not match game");
    SamplingCheckResult res;
    res.threshold = eps_for_fraction / 16.0;
    std::vector<std::vector<double>> base;
    for (int i = 0; i < game.players(); ++i) base.push_back(payoff_vector(game, profile, i));
    int within = 0;
    for (int t = 0; t < trials; ++t) {
        StrategyProfile sampled;
        for (int i = 0; i < game.players(); ++i) {
            SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i));
            KUniformStrategy s;
            s.k = k;
            const auto& probs = profile.strategies[static_cast<std::size_t>(i)].probs;
            for (int draw = 0; draw < k; ++draw) {
                double u = rng.next_double();
                double acc = 0.0;
                int pick = static_cast<int>(probs.size()) - 1;
                for (std::size_t a = 0; a < probs.size(); ++a) {
                    acc += probs[a];
                    if (u < acc) {
                        pick = static_cast<int>(a);
                        break;
                    }
                }
                s.multiset.push_back(pick);
            }
            std::sort(s.multiset.begin(), s.multiset.end());
            sampled.strategies.push_back(s.to_mixed(game.actions(i)));
        }
        double dev = 0.0;
        for (int i = 0; i < game.players(); ++i) {
            auto pay = payoff_vector(game, sampled, i);
            for (std::size_t a = 0; a < pay.size(); ++a)
                dev = std::max(dev, std::abs(pay[a] - base[static_cast<std::size_t>(i)][a]));
        }
        res.trial_deviations.push_back(dev);
        res.max_deviation = std::max(res.max_deviation, dev);
        if (dev <= res.threshold) ++within;
    }
    res.fraction_within = static_cast<double>(within) / trials;
    return res;
}

}  // namespace pmx

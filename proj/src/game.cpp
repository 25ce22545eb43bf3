#include "game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace pmx {

PolymatrixGame::PolymatrixGame(std::vector<int> actions, std::vector<GameEdge> edges)
    : actions_(std::move(actions)), edges_(std::move(edges)) {
    const int n = players();
    for (int i = 0; i < n; ++i) {
        if (actions_[i] < 1) throw std::invalid_argument("player " + std::to_string(i) + " has no actions");
    }
    neighbors_.assign(n, {});
    edge_of_.assign(n, {});
    std::set<std::pair<int, int>> seen;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        GameEdge& ed = edges_[e];
        if (ed.u < 0 || ed.u >= n || ed.v < 0 || ed.v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (ed.u == ed.v) throw std::invalid_argument("self-loop on player " + std::to_string(ed.u));
        if (ed.u > ed.v) {
            std::swap(ed.u, ed.v);
            std::swap(ed.payoff_u, ed.payoff_v);
        }
        if (!seen.insert({ed.u, ed.v}).second)
            throw std::invalid_argument("duplicate edge (" + std::to_string(ed.u) + "," + std::to_string(ed.v) + ")");
        if (ed.payoff_u.rows != actions_[ed.u] || ed.payoff_u.cols != actions_[ed.v] ||
            ed.payoff_v.rows != actions_[ed.v] || ed.payoff_v.cols != actions_[ed.u])
            throw std::invalid_argument("payoff matrix shape mismatch on edge (" + std::to_string(ed.u) + "," +
                                        std::to_string(ed.v) + ")");
        neighbors_[ed.u].push_back(ed.v);
        neighbors_[ed.v].push_back(ed.u);
        edge_of_[ed.u].push_back({ed.v, static_cast<int>(e)});
        edge_of_[ed.v].push_back({ed.u, static_cast<int>(e)});
    }
    for (int i = 0; i < n; ++i) {
        std::sort(neighbors_[i].begin(), neighbors_[i].end());
        std::sort(edge_of_[i].begin(), edge_of_[i].end());
    }
}

const Matrix* PolymatrixGame::matrix(int i, int j) const {
    const auto& lst = edge_of_.at(static_cast<std::size_t>(i));
    auto it = std::lower_bound(lst.begin(), lst.end(), std::pair<int, int>{j, -1});
    if (it == lst.end() || it->first != j) return nullptr;
    const GameEdge& e = edges_[static_cast<std::size_t>(it->second)];
    return e.u == i ? &e.payoff_u : &e.payoff_v;
}

std::vector<int> MixedStrategy::support(double threshold) const {
    std::vector<int> out;
    for (int j = 0; j < actions(); ++j)
        if (probs[j] > threshold) out.push_back(j);
    return out;
}

bool MixedStrategy::valid(double tol) const {
    double sum = 0.0;
    for (double p : probs) {
        if (p < -tol) return false;
        sum += p;
    }
    return std::abs(sum - 1.0) <= tol && !probs.empty();
}

MixedStrategy MixedStrategy::pure(int action, int m) {
    MixedStrategy s;
    s.probs.assign(static_cast<std::size_t>(m), 0.0);
    s.probs.at(static_cast<std::size_t>(action)) = 1.0;
    return s;
}

MixedStrategy MixedStrategy::uniform(int m) {
    MixedStrategy s;
    s.probs.assign(static_cast<std::size_t>(m), 1.0 / m);
    return s;
}

MixedStrategy KUniformStrategy::to_mixed(int m) const {
    MixedStrategy s;
    s.probs.assign(static_cast<std::size_t>(m), 0.0);
    for (int idx : multiset) s.probs.at(static_cast<std::size_t>(idx)) += 1.0 / k;
    return s;
}

bool StrategyProfile::shape_matches(const PolymatrixGame& g) const {
    if (players() != g.players()) return false;
    for (int i = 0; i < players(); ++i)
        if (strategies[i].actions() != g.actions(i)) return false;
    return true;
}

std::vector<double> payoff_vector(const PolymatrixGame& game, const StrategyProfile& profile, int player) {
    if (player < 0 || player >= game.players()) throw std::out_of_range("player index out of range");
    std::vector<double> p(static_cast<std::size_t>(game.actions(player)), 0.0);
    for (int j : game.neighbors(player)) {
        const Matrix& A = *game.matrix(player, j);
        const MixedStrategy& sj = profile.strategies.at(static_cast<std::size_t>(j));
        for (int a = 0; a < A.rows; ++a) {
            double acc = 0.0;
            for (int b = 0; b < A.cols; ++b) acc += A.at(a, b) * sj.probs[b];
            p[a] += acc;
        }
    }
    return p;
}

RegretReport regret_report(const PolymatrixGame& game, const StrategyProfile& profile) {
    if (!profile.shape_matches(game)) throw std::invalid_argument("profile shape does not match game");
    RegretReport rep;
    rep.players.resize(static_cast<std::size_t>(game.players()));
    for (int i = 0; i < game.players(); ++i) {
        PlayerRegret& pr = rep.players[i];
        pr.payoff_vector = payoff_vector(game, profile, i);
        const MixedStrategy& si = profile.strategies[i];
        pr.best_response = *std::max_element(pr.payoff_vector.begin(), pr.payoff_vector.end());
        pr.expected = 0.0;
        for (int a = 0; a < si.actions(); ++a) pr.expected += si.probs[a] * pr.payoff_vector[a];
        pr.regret = pr.best_response - pr.expected;
        pr.pure_regrets.resize(pr.payoff_vector.size());
        for (std::size_t a = 0; a < pr.payoff_vector.size(); ++a)
            pr.pure_regrets[a] = pr.best_response - pr.payoff_vector[a];
        rep.max_regret = std::max(rep.max_regret, pr.regret);
        for (int a : si.support(kSupportThreshold))
            rep.max_support_regret = std::max(rep.max_support_regret, pr.pure_regrets[a]);
    }
    return rep;
}

std::pair<bool, RegretReport> is_eps_ne(const PolymatrixGame& game, const StrategyProfile& profile, double eps) {
    if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
    RegretReport rep = regret_report(game, profile);
    return {rep.max_regret <= eps + kVerifyTol, std::move(rep)};
}

std::pair<bool, RegretReport> is_eps_wsne(const PolymatrixGame& game, const StrategyProfile& profile, double eps) {
    if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
    RegretReport rep = regret_report(game, profile);
    return {rep.max_support_regret <= eps + kVerifyTol, std::move(rep)};
}

std::pair<double, double> pure_payoff_range(const PolymatrixGame& game, int player) {
    double hi = 0.0, lo = 0.0;
    std::vector<double> row_max(static_cast<std::size_t>(game.actions(player)), 0.0);
    std::vector<double> row_min(static_cast<std::size_t>(game.actions(player)), 0.0);
    for (int j : game.neighbors(player)) {
        const Matrix& A = *game.matrix(player, j);
        for (int a = 0; a < A.rows; ++a) {
            double mx = -std::numeric_limits<double>::infinity();
            double mn = std::numeric_limits<double>::infinity();
            for (int b = 0; b < A.cols; ++b) {
                mx = std::max(mx, A.at(a, b));
                mn = std::min(mn, A.at(a, b));
            }
            row_max[a] += mx;
            row_min[a] += mn;
        }
    }
    if (game.degree(player) == 0) return {0.0, 0.0};
    hi = *std::max_element(row_max.begin(), row_max.end());
    lo = *std::min_element(row_min.begin(), row_min.end());
    return {hi, lo};
}

NormalizedGame normalize(const PolymatrixGame& game) {
    const int n = game.players();
    std::vector<AffineRecord> records(static_cast<std::size_t>(n));
    std::vector<GameEdge> edges = game.edges();
    for (int i = 0; i < n; ++i) {
        auto [hi, lo] = pure_payoff_range(game, i);
        const int deg = game.degree(i);
        AffineRecord& rec = records[i];
        if (deg == 0) continue;  // no matrices to touch; payoff identically 0
        if (hi - lo <= 0.0) {
            // Constant total payoff: map to all-zero.
            rec.scale = 1.0;
            rec.shift = -lo;
        } else {
            rec.scale = 1.0 / (hi - lo);
            rec.shift = -lo * rec.scale;
        }
        for (GameEdge& e : edges) {
            Matrix* mine = nullptr;
            if (e.u == i) mine = &e.payoff_u;
            else if (e.v == i) mine = &e.payoff_v;
            else continue;
            for (double& x : mine->a) x = x * rec.scale + rec.shift / deg;
        }
    }
    return {PolymatrixGame(game.action_counts(), std::move(edges)), std::move(records)};
}

bool is_normalized(const PolymatrixGame& game, double tol) {
    for (int i = 0; i < game.players(); ++i) {
        auto [hi, lo] = pure_payoff_range(game, i);
        if (hi > 1.0 + tol || lo < -tol) return false;
    }
    return true;
}

namespace {
void emit_multisets(int m, int k, int start, std::vector<int>& cur, std::vector<KUniformStrategy>& out) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back({k, cur});
        return;
    }
    for (int v = start; v < m; ++v) {
        cur.push_back(v);
        emit_multisets(m, k, v, cur, out);
        cur.pop_back();
    }
}
}  // namespace

std::vector<KUniformStrategy> enumerate_k_uniform(int m, int k) {
    if (m < 1 || k < 1) throw std::invalid_argument("enumerate_k_uniform requires m >= 1 and k >= 1");
    std::vector<KUniformStrategy> out;
    std::vector<int> cur;
    emit_multisets(m, k, 0, cur, out);
    return out;
}

double k_uniform_count(int m, int k) {
    // C(m+k-1, k)
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (m - 1 + i) / i;
    return c;
}

namespace {
long ceil_k_formula(double factor, long n, long m, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
    if (n < 1 || m < 1) throw std::invalid_argument("n and m must be >= 1");
    double val = factor * (std::log(static_cast<double>(m)) + std::log(static_cast<double>(n)) - std::log(eps) +
                           std::log(8.0)) /
                 (eps * eps);
    return static_cast<long>(std::ceil(val));
}
}  // namespace

long k_bound(long n, long m, double eps) { return ceil_k_formula(128.0, n, m, eps); }
long k_bound_existence(long n, long m, double eps) { return ceil_k_formula(8.0, n, m, eps); }

double tv_distance(const StrategyProfile& a, const StrategyProfile& b) {
    if (a.players() != b.players()) throw std::invalid_argument("profile player counts differ");
    double d = 0.0;
    for (int i = 0; i < a.players(); ++i) {
        if (a.strategies[i].actions() != b.strategies[i].actions())
            throw std::invalid_argument("profile shapes differ for player " + std::to_string(i));
        for (int j = 0; j < a.strategies[i].actions(); ++j)
            d = std::max(d, std::abs(a.strategies[i].probs[j] - b.strategies[i].probs[j]));
    }
    return d;
}

Subgame subgame(const PolymatrixGame& game, const std::vector<int>& players) {
    std::vector<int> to_sub(static_cast<std::size_t>(game.players()), -1);
    std::vector<int> to_orig = players;
    std::sort(to_orig.begin(), to_orig.end());
    to_orig.erase(std::unique(to_orig.begin(), to_orig.end()), to_orig.end());
    std::vector<int> actions;
    for (std::size_t s = 0; s < to_orig.size(); ++s) {
        int p = to_orig[s];
        if (p < 0 || p >= game.players()) throw std::invalid_argument("subgame player out of range");
        to_sub[p] = static_cast<int>(s);
        actions.push_back(game.actions(p));
    }
    std::vector<GameEdge> edges;
    for (const GameEdge& e : game.edges()) {
        if (to_sub[e.u] >= 0 && to_sub[e.v] >= 0) {
            GameEdge ne = e;
            ne.u = to_sub[e.u];
            ne.v = to_sub[e.v];
            edges.push_back(std::move(ne));
        }
    }
    return {PolymatrixGame(std::move(actions), std::move(edges)), std::move(to_sub), std::move(to_orig)};
}

}  // namespace pmx

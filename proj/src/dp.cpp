#include "dp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace pmx {

std::vector<std::pair<int, int>> interaction_edges(const PolymatrixGame& game) {
    std::vector<std::pair<int, int>> out;
    for (const GameEdge& e : game.edges()) out.push_back({e.u, e.v});
    return out;
}

namespace {

int index_in_bag(const std::vector<int>& bag, int player) {
    auto it = std::lower_bound(bag.begin(), bag.end(), player);
    if (it == bag.end() || *it != player) return -1;
    return static_cast<int>(it - bag.begin());
}

/// Lexicographic witness key over (strats, pays, accum).
bool key_less(const Witness& a, const Witness& b) {
    if (a.strats != b.strats) return a.strats < b.strats;
    if (a.pays != b.pays) return a.pays < b.pays;
    return a.accum < b.accum;
}

bool key_equal(const Witness& a, const Witness& b) {
    return a.strats == b.strats && a.pays == b.pays && a.accum == b.accum;
}

/// Sort + dedup, keeping per key the best-x witness (constrained) or the
/// first-generated one. Generation order is deterministic, so the surviving
/// provenance is too.
void finalize_table(std::vector<Witness>& table, const SolverConfig& cfg) {
    std::stable_sort(table.begin(), table.end(), key_less);
    std::vector<Witness> out;
    for (Witness& w : table) {
        if (!out.empty() && key_equal(out.back(), w)) {
            if (cfg.constraint && cfg.constraint->better(w.x, out.back().x)) out.back() = std::move(w);
        } else {
            out.push_back(std::move(w));
        }
    }
    table = std::move(out);
}

/// k-uniform strategies available to a player under the optional Problem-4
/// support restriction.
std::vector<KUniformStrategy> strategies_for(const PolymatrixGame& game, int player, int k,
                                             const SolverConfig& cfg) {
    // Fail fast before materializing C(m+k-1, k) multisets.
    if (k_uniform_count(game.actions(player), k) > static_cast<double>(cfg.witness_budget))
        throw std::runtime_error("witness budget exceeded: C(m+k-1,k) strategies per player at k = " +
                                 std::to_string(k) + "; pass a smaller k");
    std::vector<KUniformStrategy> all = enumerate_k_uniform(game.actions(player), k);
    if (cfg.support_restriction && cfg.support_restriction->first == player) {
        const std::vector<int>& allowed = cfg.support_restriction->second;
        std::vector<KUniformStrategy> filtered;
        for (KUniformStrategy& s : all) {
            bool ok = true;
            for (int idx : s.multiset)
                if (!std::count(allowed.begin(), allowed.end(), idx)) ok = false;
            if (ok) filtered.push_back(std::move(s));
        }
        return filtered;
    }
    return all;
}

void check_budget(std::size_t generated, const SolverConfig& cfg) {
    if (generated > cfg.witness_budget)
        throw std::runtime_error("witness budget exceeded (" + std::to_string(cfg.witness_budget) +
                                 "); lower k or raise eps");
}

struct LedgerTracker {
    double max_error = 0.0;

    void observe(const Witness& w, const RoundedPayoffGrid& grid) {
        for (std::size_t p = 0; p < w.pays.size(); ++p)
            for (std::size_t a = 0; a < w.pays[p].size(); ++a)
                max_error = std::max(max_error, std::abs(grid.value(w.pays[p][a]) - w.shadow[p][a]));
    }
};

}  // namespace

bool happiness_test(const PolymatrixGame& game, const std::vector<int>& child_bag, const Witness& witness,
                    int forgotten, const RoundedPayoffGrid& grid, double eps, double tol) {
    const int pos = index_in_bag(child_bag, forgotten);
    if (pos < 0) throw std::invalid_argument("forgotten player not in child bag");
    const int m = game.actions(forgotten);
    std::vector<double> vec(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) vec[a] = grid.value(witness.pays[pos][a]);
    MixedStrategy si = witness.strats[pos].to_mixed(m);
    for (std::size_t q = 0; q < child_bag.size(); ++q) {
        int j = child_bag[q];
        if (j == forgotten) continue;
        const Matrix* A = game.matrix(forgotten, j);
        if (!A) continue;
        MixedStrategy sj = witness.strats[q].to_mixed(game.actions(j));
        for (int a = 0; a < m; ++a) {
            double acc = 0.0;
            for (int b = 0; b < A->cols; ++b) acc += A->at(a, b) * sj.probs[b];
            vec[a] += acc;
        }
    }
    double best = *std::max_element(vec.begin(), vec.end());
    double expected = 0.0;
    for (int a = 0; a < m; ++a) expected += si.probs[a] * vec[a];
    return expected >= best - eps - tol;
}

std::vector<std::vector<Witness>> phase1(const PolymatrixGame& game, const NiceTreeDecomposition& nice,
                                         const SolverConfig& cfg, SolveDiagnostics* diag) {
    if (!(cfg.eps > 0.0 && cfg.eps <= 1.0)) throw std::invalid_argument("eps must be in (0, 1]");
    if (!is_normalized(game, cfg.tol))
        throw std::invalid_argument("phase 1 requires a normalized game (payoff outside [-tol, 1+tol])");
    {
        // The decomposition must actually cover this game.
        std::vector<char> seen(static_cast<std::size_t>(game.players()), 0);
        for (const NiceNode& nd : nice.nodes)
            for (int p : nd.bag) {
                if (p < 0 || p >= game.players())
                    throw std::invalid_argument("decomposition mentions unknown player " + std::to_string(p));
                seen[static_cast<std::size_t>(p)] = 1;
            }
        for (int p = 0; p < game.players(); ++p)
            if (!seen[static_cast<std::size_t>(p)])
                throw std::invalid_argument("decomposition does not cover player " + std::to_string(p));
        for (const GameEdge& e : game.edges()) {
            bool covered = false;
            for (const NiceNode& nd : nice.nodes)
                if (std::binary_search(nd.bag.begin(), nd.bag.end(), e.u) &&
                    std::binary_search(nd.bag.begin(), nd.bag.end(), e.v)) {
                    covered = true;
                    break;
                }
            if (!covered)
                throw std::invalid_argument("decomposition does not cover edge (" + std::to_string(e.u) + "," +
                                            std::to_string(e.v) + ")");
        }
    }
    const int max_action =
        game.players() == 0 ? 1
                            : *std::max_element(game.action_counts().begin(), game.action_counts().end());
    const int k = cfg.k.value_or(static_cast<int>(k_bound(std::max(game.players(), 1), max_action, cfg.eps)));
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const bool accum = cfg.constraint && cfg.constraint->needs_accum();
    const RoundedPayoffGrid grid(cfg.eps, std::max(game.players(), 1));
    const std::vector<int> fcounts = forget_counts(nice);

    std::vector<std::vector<Witness>> tables(nice.nodes.size());
    std::size_t generated = 0;
    for (std::size_t vi = 0; vi < nice.nodes.size(); ++vi) {
        const NiceNode& node = nice.nodes[vi];
        std::vector<Witness>& table = tables[vi];
        LedgerTracker ledger;
        switch (node.type) {
            case NodeType::Start: {
                // Every tuple of k-uniform strategies; zero payoff vectors.
                std::vector<std::vector<KUniformStrategy>> options;
                for (int p : node.bag) options.push_back(strategies_for(game, p, k, cfg));
                std::vector<std::size_t> idx(options.size(), 0);
                bool done = false;
                if (options.empty()) done = true;
                for (const auto& o : options)
                    if (o.empty()) done = true;
                while (!done) {
                    Witness w;
                    for (std::size_t q = 0; q < options.size(); ++q) {
                        w.strats.push_back(options[q][idx[q]]);
                        w.pays.emplace_back(static_cast<std::size_t>(game.actions(node.bag[q])), 0L);
                        if (accum) w.accum.emplace_back(0);
                        if (cfg.instrument)
                            w.shadow.emplace_back(static_cast<std::size_t>(game.actions(node.bag[q])), 0.0);
                    }
                    if (cfg.constraint) w.x = cfg.constraint->dp_start();
                    if (cfg.instrument) ledger.observe(w, grid);
                    table.push_back(std::move(w));
                    check_budget(++generated, cfg);
                    // Odometer.
                    std::size_t q = 0;
                    for (; q < idx.size(); ++q) {
                        if (++idx[q] < options[q].size()) break;
                        idx[q] = 0;
                    }
                    if (q == idx.size()) done = true;
                }
                if (node.bag.empty()) {
                    Witness w;
                    if (cfg.constraint) w.x = cfg.constraint->dp_start();
                    table.push_back(std::move(w));
                }
                break;
            }
            case NodeType::Introduce: {
                const std::vector<Witness>& child = tables[node.child1];
                const int pos = index_in_bag(node.bag, node.player);
                const auto options = strategies_for(game, node.player, k, cfg);
                for (std::size_t ci = 0; ci < child.size(); ++ci) {
                    for (const KUniformStrategy& s : options) {
                        Witness w = child[ci];
                        w.child1 = static_cast<int>(ci);
                        w.child2 = -1;
                        w.strats.insert(w.strats.begin() + pos, s);
                        w.pays.insert(w.pays.begin() + pos,
                                      std::vector<long>(static_cast<std::size_t>(game.actions(node.player)), 0L));
                        if (accum) w.accum.insert(w.accum.begin() + pos, Rational(0));
                        if (cfg.instrument)
                            w.shadow.insert(w.shadow.begin() + pos,
                                            std::vector<double>(static_cast<std::size_t>(game.actions(node.player)),
                                                                0.0));
                        if (cfg.instrument) ledger.observe(w, grid);
                        table.push_back(std::move(w));
                        check_budget(++generated, cfg);
                    }
                }
                break;
            }
            case NodeType::Forget: {
                const std::vector<Witness>& child = tables[node.child1];
                const std::vector<int>& child_bag = nice.nodes[node.child1].bag;
                const int pos = index_in_bag(child_bag, node.player);
                for (std::size_t ci = 0; ci < child.size(); ++ci) {
                    const Witness& cw = child[ci];
                    if (!happiness_test(game, child_bag, cw, node.player, grid, cfg.eps, cfg.tol)) continue;
                    Witness w;
                    w.child1 = static_cast<int>(ci);
                    const MixedStrategy si = cw.strats[pos].to_mixed(game.actions(node.player));
                    for (std::size_t q = 0; q < child_bag.size(); ++q) {
                        if (static_cast<int>(q) == pos) continue;
                        const int j = child_bag[q];
                        w.strats.push_back(cw.strats[q]);
                        std::vector<long> pay = cw.pays[q];
                        std::vector<double> sh;
                        if (cfg.instrument) sh = cw.shadow[q];
                        const Matrix* A = game.matrix(j, node.player);
                        if (A) {
                            for (int a = 0; a < game.actions(j); ++a) {
                                double add = 0.0;
                                for (int b = 0; b < A->cols; ++b) add += A->at(a, b) * si.probs[b];
                                pay[a] = grid.round_index(grid.value(pay[a]) + add);
                                if (cfg.instrument) sh[a] += add;
                            }
                        }
                        w.pays.push_back(std::move(pay));
                        if (cfg.instrument) w.shadow.push_back(std::move(sh));
                        if (accum) {
                            Rational acc = cw.accum[q];
                            if (A) {
                                RationalStrategy rj(static_cast<std::size_t>(game.actions(j)), Rational(0));
                                for (int idx2 : cw.strats[q].multiset)
                                    rj[static_cast<std::size_t>(idx2)] += make_rational(1, cw.strats[q].k);
                                RationalStrategy ri(static_cast<std::size_t>(game.actions(node.player)),
                                                    Rational(0));
                                for (int idx2 : cw.strats[pos].multiset)
                                    ri[static_cast<std::size_t>(idx2)] += make_rational(1, cw.strats[pos].k);
                                acc += rational_bilinear(*A, rj, ri);
                            }
                            w.accum.push_back(std::move(acc));
                        }
                    }
                    if (cfg.constraint) {
                        DpForgetContext ctx{game, node.player, cw.strats[pos], {}, accum ? &cw.accum[pos] : nullptr};
                        for (std::size_t q = 0; q < child_bag.size(); ++q) {
                            if (static_cast<int>(q) == pos) continue;
                            if (game.has_edge(node.player, child_bag[q]))
                                ctx.bag_neighbors.push_back({child_bag[q], &cw.strats[q]});
                        }
                        w.x = cfg.constraint->dp_forget(ctx, cw.x);
                    }
                    if (cfg.instrument) ledger.observe(w, grid);
                    table.push_back(std::move(w));
                    check_budget(++generated, cfg);
                }
                break;
            }
            case NodeType::Join: {
                const std::vector<Witness>& left = tables[node.child1];
                const std::vector<Witness>& right = tables[node.child2];
                // Bucket the right child by bag strategies; pair only equal keys.
                std::map<std::vector<KUniformStrategy>, std::vector<int>> buckets;
                for (std::size_t ri = 0; ri < right.size(); ++ri)
                    buckets[right[ri].strats].push_back(static_cast<int>(ri));
                for (std::size_t li = 0; li < left.size(); ++li) {
                    auto it = buckets.find(left[li].strats);
                    if (it == buckets.end()) continue;
                    for (int ri : it->second) {
                        const Witness& a = left[li];
                        const Witness& b = right[static_cast<std::size_t>(ri)];
                        Witness w;
                        w.child1 = static_cast<int>(li);
                        w.child2 = ri;
                        w.strats = a.strats;
                        w.pays.resize(a.pays.size());
                        for (std::size_t q = 0; q < a.pays.size(); ++q) {
                            w.pays[q].resize(a.pays[q].size());
                            for (std::size_t t = 0; t < a.pays[q].size(); ++t)
                                w.pays[q][t] = a.pays[q][t] + b.pays[q][t];  // already rounded; no re-rounding
                        }
                        if (accum) {
                            w.accum.resize(a.accum.size());
                            for (std::size_t q = 0; q < a.accum.size(); ++q) w.accum[q] = a.accum[q] + b.accum[q];
                        }
                        if (cfg.instrument) {
                            w.shadow.resize(a.shadow.size());
                            for (std::size_t q = 0; q < a.shadow.size(); ++q) {
                                w.shadow[q].resize(a.shadow[q].size());
                                for (std::size_t t = 0; t < a.shadow[q].size(); ++t)
                                    w.shadow[q][t] = a.shadow[q][t] + b.shadow[q][t];
                            }
                        }
                        if (cfg.constraint) w.x = cfg.constraint->merge(a.x, b.x);
                        if (cfg.instrument) ledger.observe(w, grid);
                        table.push_back(std::move(w));
                        check_budget(++generated, cfg);
                    }
                }
                break;
            }
        }
        finalize_table(table, cfg);
        if (diag) {
            NodeDiagnostics nd;
            nd.node = static_cast<int>(vi);
            nd.type = node.type;
            nd.bag = node.bag;
            nd.witnesses = table.size();
            nd.forget_count = fcounts[vi];
            nd.ledger_bound = fcounts[vi] * cfg.eps / (4.0 * std::max(game.players(), 1));
            nd.ledger_max_error = ledger.max_error;
            diag->nodes.push_back(nd);
            diag->total_witnesses += table.size();
            if (cfg.instrument)
                diag->max_ledger_excess = std::max(diag->max_ledger_excess, ledger.max_error - nd.ledger_bound);
        }
    }
    return tables;
}

std::vector<KUniformStrategy> phase2(const std::vector<std::vector<Witness>>& tables,
                                     const NiceTreeDecomposition& nice, const SolverConfig& cfg) {
    const std::vector<Witness>& root_table = tables[static_cast<std::size_t>(nice.root)];
    if (root_table.empty()) throw std::runtime_error("phase 2 requires a non-empty root table");
    // Constrained mode: best x; otherwise the first (tables are key-sorted).
    std::size_t best = 0;
    if (cfg.constraint) {
        for (std::size_t i = 1; i < root_table.size(); ++i)
            if (cfg.constraint->better(root_table[i].x, root_table[best].x)) best = i;
    }
    int n = 0;
    for (const NiceNode& nd : nice.nodes)
        for (int p : nd.bag) n = std::max(n, p + 1);
    std::vector<KUniformStrategy> assignment(static_cast<std::size_t>(n));
    std::vector<char> assigned(static_cast<std::size_t>(n), 0);
    // Walk provenance down from the chosen root witness.
    std::vector<std::pair<int, int>> stack{{nice.root, static_cast<int>(best)}};
    while (!stack.empty()) {
        auto [node_idx, wit_idx] = stack.back();
        stack.pop_back();
        const NiceNode& node = nice.nodes[static_cast<std::size_t>(node_idx)];
        const Witness& w = tables[static_cast<std::size_t>(node_idx)][static_cast<std::size_t>(wit_idx)];
        switch (node.type) {
            case NodeType::Start:
                break;
            case NodeType::Introduce:
                stack.push_back({node.child1, w.child1});
                break;
            case NodeType::Forget: {
                const std::vector<int>& child_bag = nice.nodes[node.child1].bag;
                const Witness& cw = tables[static_cast<std::size_t>(node.child1)][static_cast<std::size_t>(w.child1)];
                const int pos = index_in_bag(child_bag, node.player);
                assignment[static_cast<std::size_t>(node.player)] = cw.strats[static_cast<std::size_t>(pos)];
                assigned[static_cast<std::size_t>(node.player)] = 1;
                stack.push_back({node.child1, w.child1});
                break;
            }
            case NodeType::Join:
                stack.push_back({node.child1, w.child1});
                stack.push_back({node.child2, w.child2});
                break;
        }
    }
    for (int p = 0; p < n; ++p)
        if (!assigned[static_cast<std::size_t>(p)])
            throw std::runtime_error("player " + std::to_string(p) + " was never forgotten");
    return assignment;
}

SolveResult solve(const PolymatrixGame& game, const std::optional<TreeDecomposition>& dec,
                  const SolverConfig& cfg_in) {
    SolverConfig cfg = cfg_in;
    SolveResult result;
    if (is_normalized(game, cfg.tol)) {
        result.normalized = game;
        result.affine.assign(static_cast<std::size_t>(game.players()), AffineRecord{});
    } else {
        NormalizedGame norm = normalize(game);
        result.normalized = norm.game;
        result.affine = std::move(norm.records);
    }
    const auto edges = interaction_edges(result.normalized);

    TreeDecomposition base;
    if (dec) {
        auto violations = validate(*dec, game.players(), edges);
        if (!violations.empty())
            throw std::invalid_argument("decomposition invalid for game: " + violations.front().what);
        base = *dec;
    } else {
        base = small_exact_treewidth(game.players(), edges).decomposition;
    }
    result.nice = to_nice(base, game.players(), edges);

    const int max_m = game.players() == 0
                          ? 1
                          : *std::max_element(game.action_counts().begin(), game.action_counts().end());
    result.k = cfg.k.value_or(static_cast<int>(k_bound(std::max(game.players(), 1), max_m, cfg.eps)));
    cfg.k = result.k;

    result.diagnostics.instrumented = cfg.instrument;
    auto tables = phase1(result.normalized, result.nice, cfg, &result.diagnostics);
    {
        const int w1 = result.nice.width() + 1;  // bag size
        const double n2e = 2.0 * game.players() / cfg.eps;
        result.diagnostics.candidate_bound =
            std::pow(static_cast<double>(max_m), static_cast<double>(result.k) * w1) *
            std::pow(n2e, static_cast<double>(max_m) * w1);
    }
    if (tables[static_cast<std::size_t>(result.nice.root)].empty()) {
        result.status = SolveStatus::NoCertifiedNe;
        return result;
    }
    result.status = SolveStatus::Solved;
    result.k_profile = phase2(tables, result.nice, cfg);
    result.profile.strategies.clear();
    for (int p = 0; p < game.players(); ++p)
        result.profile.strategies.push_back(result.k_profile[static_cast<std::size_t>(p)].to_mixed(game.actions(p)));
    result.report = regret_report(result.normalized, result.profile);
    if (cfg.constraint) {
        const Witness* best = nullptr;
        for (const Witness& w : tables[static_cast<std::size_t>(result.nice.root)])
            if (!best || cfg.constraint->better(w.x, best->x)) best = &w;
        result.achieved = best->x;
    }
    return result;
}

}  // namespace pmx

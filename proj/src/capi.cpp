#include "../include/polymatrix.h"

#include <cstring>
#include <memory>
#include <string>

#include <json.hpp>

#include "constraints.hpp"
#include "dp.hpp"
#include "game.hpp"
#include "oracle.hpp"
#include "reductions.hpp"
#include "serial.hpp"
#include "treedec.hpp"

using nlohmann::json;

struct pmx_game {
    pmx::PolymatrixGame game;
};

struct pmx_profile {
    pmx::StrategyProfile profile;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

/// Runs `fn`, translating exceptions into status codes + pmx_last_error.
template <typename Fn>
pmx_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const pmx::BudgetExceeded& e) {
        g_last_error = e.what();
        return PMX_BUDGET_EXCEEDED;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PMX_ERROR;
    } catch (...) {
        g_last_error = "unknown error";
        return PMX_ERROR;
    }
}

json parse_options(const char* text, const char* what) {
    if (!text || !*text) return json::object();
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw pmx::ParseError(std::string(what) + ": malformed JSON");
    if (!j.is_object()) throw pmx::ParseError(std::string(what) + ": expected a JSON object");
    return j;
}

pmx::ConstraintCheck constraint_from_json(const json& j) {
    if (!j.is_object() || !j.contains("problem"))
        throw pmx::ParseError("constraint: expected {\"problem\": 1..9, \"param\": ...}");
    pmx::ConstraintCheck c;
    c.problem = j["problem"].get<int>();
    if (c.problem < 1 || c.problem > 9) throw pmx::ParseError("constraint: problem must be 1..9");
    const bool has_param = j.contains("param");
    switch (c.problem) {
        case 1:
        case 2:
        case 3:
            if (!has_param) throw pmx::ParseError("constraint: problems 1-3 need a numeric param u");
            c.u = j["param"].get<double>();
            break;
        case 4:
            if (!has_param || !j["param"].is_array())
                throw pmx::ParseError("constraint: problem 4 needs an action index array");
            c.support_set = j["param"].get<std::vector<int>>();
            break;
        case 5:
            if (!has_param) throw pmx::ParseError("constraint: problem 5 needs a numeric param d");
            c.d = j["param"].get<double>();
            break;
        case 6:
            if (!has_param) throw pmx::ParseError("constraint: problem 6 needs a numeric param p");
            c.p = j["param"].get<double>();
            break;
        default:
            if (!has_param) throw pmx::ParseError("constraint: problems 7-9 need an integer param k");
            c.k = j["param"].get<int>();
            break;
    }
    return c;
}

/// Maps a Table-1 problem onto the solver's constrained mode.
struct SolverConstraint {
    std::unique_ptr<pmx::OvdConstraint> ovd;
    std::optional<std::pair<int, std::vector<int>>> support_restriction;
    int problem = 0;
};

SolverConstraint solver_constraint_from_json(const json& j) {
    pmx::ConstraintCheck c = constraint_from_json(j);
    SolverConstraint out;
    out.problem = c.problem;
    switch (c.problem) {
        case 1: out.ovd = pmx::ovd_welfare(pmx::OvdConstraint::Sense::Maximize); break;
        case 2: out.ovd = pmx::ovd_welfare(pmx::OvdConstraint::Sense::Minimize); break;
        case 3: out.ovd = pmx::ovd_min_payoff(); break;
        case 4: out.support_restriction = {0, c.support_set}; break;
        case 5: throw pmx::ParseError("constraint: problem 5 is checker-only; the solver cannot emit profile pairs");
        case 6: out.ovd = pmx::ovd_max_prob(0); break;
        case 7: out.ovd = pmx::ovd_total_support(); break;
        case 8: out.ovd = pmx::ovd_min_support(); break;
        case 9: out.ovd = pmx::ovd_player_support(0); break;
    }
    return out;
}

}  // namespace

extern "C" {

const char* pmx_version(void) { return "0.1.0"; }

const char* pmx_last_error(void) { return g_last_error.c_str(); }

void pmx_string_free(char* s) { delete[] s; }
void pmx_game_free(pmx_game* game) { delete game; }
void pmx_profile_free(pmx_profile* profile) { delete profile; }

pmx_status pmx_game_from_json(const char* json_text, pmx_game** out_game) {
    return guarded([&]() -> pmx_status {
        if (!json_text || !out_game) throw std::invalid_argument("null argument");
        json j = json::parse(json_text, nullptr, false);
        if (j.is_discarded()) throw pmx::ParseError("game: malformed JSON");
        *out_game = new pmx_game{pmx::game_from_json(j)};
        return PMX_OK;
    });
}

pmx_status pmx_game_to_json(const pmx_game* game, char** out_json) {
    return guarded([&]() -> pmx_status {
        if (!game || !out_json) throw std::invalid_argument("null argument");
        *out_json = dup_string(pmx::game_to_json(game->game).dump(2));
        return PMX_OK;
    });
}

int pmx_game_players(const pmx_game* game) { return game ? game->game.players() : -1; }

int pmx_game_actions(const pmx_game* game, int player) {
    if (!game || player < 0 || player >= game->game.players()) return -1;
    return game->game.actions(player);
}

pmx_status pmx_profile_from_json(const char* json_text, pmx_profile** out_profile) {
    return guarded([&]() -> pmx_status {
        if (!json_text || !out_profile) throw std::invalid_argument("null argument");
        json j = json::parse(json_text, nullptr, false);
        if (j.is_discarded()) throw pmx::ParseError("profile: malformed JSON");
        *out_profile = new pmx_profile{pmx::profile_from_json(j)};
        return PMX_OK;
    });
}

pmx_status pmx_profile_to_json(const pmx_profile* profile, char** out_json) {
    return guarded([&]() -> pmx_status {
        if (!profile || !out_json) throw std::invalid_argument("null argument");
        *out_json = dup_string(pmx::profile_to_json(profile->profile).dump(2));
        return PMX_OK;
    });
}

pmx_status pmx_game_normalize(const pmx_game* game, pmx_game** out_game, char** out_affine_json) {
    return guarded([&]() -> pmx_status {
        if (!game || !out_game) throw std::invalid_argument("null argument");
        pmx::NormalizedGame norm = pmx::normalize(game->game);
        *out_game = new pmx_game{std::move(norm.game)};
        if (out_affine_json) {
            json recs = json::array();
            for (const pmx::AffineRecord& r : norm.records) recs.push_back({{"scale", r.scale}, {"shift", r.shift}});
            *out_affine_json = dup_string(recs.dump(2));
        }
        return PMX_OK;
    });
}

pmx_status pmx_generate(const char* formula_text, const char* kind, const char* eps_decimal,
                        pmx_game** out_game, char** out_manifest_json) {
    return guarded([&]() -> pmx_status {
        if (!formula_text || !kind || !out_game) throw std::invalid_argument("null argument");
        pmx::Formula formula = pmx::parse_formula(formula_text);
        std::string k = kind;
        pmx::LabeledGame labeled;
        if (k == "G") {
            labeled = pmx::build_G(formula);
        } else if (k == "Gprime" || k == "Gtilde") {
            if (!eps_decimal || !*eps_decimal)
                throw std::invalid_argument(k + " needs an eps in (0,1)");
            pmx::Rational eps = pmx::parse_rational(eps_decimal);
            pmx::GadgetConstants gc = pmx::pick_constants(eps);
            labeled = k == "Gprime" ? pmx::build_Gprime(formula, gc) : pmx::build_Gtilde(formula, gc);
        } else {
            throw std::invalid_argument("kind must be G, Gprime or Gtilde");
        }
        *out_game = new pmx_game{labeled.game};
        if (out_manifest_json) {
            json man;
            man["kind"] = pmx::gadget_kind_name(labeled.kind);
            man["label"] = pmx::label_name(labeled.label);
            man["n_vars"] = labeled.n_vars;
            man["n_clauses"] = labeled.n_clauses;
            if (labeled.constants) {
                json gc;
                gc["eps"] = pmx::rational_to_string(labeled.constants->eps);
                gc["c"] = pmx::rational_to_string(labeled.constants->c);
                gc["kappa"] = pmx::rational_to_string(labeled.constants->kappa);
                gc["eps_double"] = labeled.constants->eps.get_d();
                gc["c_double"] = labeled.constants->c.get_d();
                gc["kappa_double"] = labeled.constants->kappa.get_d();
                man["constants"] = std::move(gc);
            }
            json players = json::array();
            for (int p = 0; p < labeled.game.players(); ++p) {
                json jp;
                jp["player"] = p;
                jp["role"] = labeled.is_variable(p) ? "variable" : "clause";
                jp["name"] = labeled.is_variable(p) ? "x" + std::to_string(p + 1)
                                                    : "y" + std::to_string(p - labeled.n_vars + 1);
                jp["strategies"] = labeled.strategy_names[static_cast<std::size_t>(p)];
                players.push_back(std::move(jp));
            }
            man["players"] = std::move(players);
            if (labeled.witness_assignment) {
                json w = json::array();
                for (bool b : *labeled.witness_assignment) w.push_back(b);
                man["witness_assignment"] = std::move(w);
            } else {
                man["witness_assignment"] = nullptr;
            }
            *out_manifest_json = dup_string(man.dump(2));
        }
        return PMX_OK;
    });
}

pmx_status pmx_solve(const pmx_game* game, const char* td_text, const char* options_json,
                     pmx_profile** out_profile, char** out_report_json) {
    return guarded([&]() -> pmx_status {
        if (!game || !out_profile) throw std::invalid_argument("null argument");
        *out_profile = nullptr;
        json opts = parse_options(options_json, "solve options");
        pmx::SolverConfig cfg;
        if (!opts.contains("eps")) throw std::invalid_argument("solve options need \"eps\"");
        cfg.eps = opts["eps"].get<double>();
        if (opts.contains("k")) cfg.k = opts["k"].get<int>();
        if (opts.contains("witness_budget")) cfg.witness_budget = opts["witness_budget"].get<std::size_t>();
        cfg.instrument = opts.value("instrument", false);
        const bool dump_witnesses = opts.value("dump_witnesses", false);
        SolverConstraint sc;
        if (opts.contains("constraint")) {
            sc = solver_constraint_from_json(opts["constraint"]);
            cfg.constraint = sc.ovd.get();
            cfg.support_restriction = sc.support_restriction;
        }
        std::optional<pmx::TreeDecomposition> dec;
        if (td_text && *td_text) dec = pmx::parse_td(td_text);

        pmx::SolveResult result = pmx::solve(game->game, dec, cfg);

        json rep;
        rep["status"] = result.status == pmx::SolveStatus::Solved ? "solved" : "no_certified_ne";
        rep["eps"] = cfg.eps;
        rep["k"] = result.k;
        rep["regret_bound"] = 1.5 * cfg.eps;
        json nodes = json::array();
        for (const pmx::NodeDiagnostics& nd : result.diagnostics.nodes) {
            json jn;
            jn["node"] = nd.node;
            jn["type"] = pmx::node_type_name(nd.type);
            jn["bag"] = nd.bag;
            jn["witnesses"] = nd.witnesses;
            if (cfg.instrument) {
                jn["ledger_bound"] = nd.ledger_bound;
                jn["ledger_max_error"] = nd.ledger_max_error;
            }
            nodes.push_back(std::move(jn));
        }
        rep["witness_counts"] = std::move(nodes);
        rep["total_witnesses"] = result.diagnostics.total_witnesses;
        rep["candidate_bound"] = result.diagnostics.candidate_bound;
        json affine = json::array();
        for (const pmx::AffineRecord& r : result.affine) affine.push_back({{"scale", r.scale}, {"shift", r.shift}});
        rep["normalization"] = std::move(affine);
        if (result.status == pmx::SolveStatus::Solved) {
            rep["max_regret"] = result.report.max_regret;
            rep["regret_report"] = pmx::regret_report_to_json(result.report);
            if (cfg.constraint) {
                json cj;
                cj["problem"] = sc.problem;
                cj["objective"] = cfg.constraint->name();
                cj["achieved"] = result.achieved.defined() ? json(pmx::rational_to_string(*result.achieved.v))
                                                           : json(nullptr);
                cj["achieved_double"] = result.achieved.defined() ? json(result.achieved.v->get_d()) : json(nullptr);
                rep["constrained"] = std::move(cj);
            }
            *out_profile = new pmx_profile{result.profile};
        } else {
            rep["reason"] = "no k-uniform eps/4-NE certified (empty root table)";
        }
        if (dump_witnesses) {
            // Re-run phase 1 to export the tables; solve itself does not keep them.
            pmx::SolverConfig cfg2 = cfg;
            cfg2.k = result.k;
            auto tables = pmx::phase1(result.normalized, result.nice, cfg2);
            pmx::RoundedPayoffGrid grid(cfg.eps, std::max(game->game.players(), 1));
            rep["witness_tables"] = pmx::witness_tables_to_json(result.nice, tables, grid);
        }
        if (out_report_json) *out_report_json = dup_string(rep.dump(2));
        return result.status == pmx::SolveStatus::Solved ? PMX_OK : PMX_NO_CERTIFIED_NE;
    });
}

pmx_status pmx_verify(const pmx_game* game, const pmx_profile* profile, const pmx_profile* second_profile,
                      const char* options_json, char** out_report_json) {
    return guarded([&]() -> pmx_status {
        if (!game || !profile) throw std::invalid_argument("null argument");
        json opts = parse_options(options_json, "verify options");
        if (!opts.contains("eps")) throw std::invalid_argument("verify options need \"eps\"");
        const double eps = opts["eps"].get<double>();
        const std::string mode = opts.value("mode", "ne");
        if (mode != "ne" && mode != "wsne") throw std::invalid_argument("mode must be \"ne\" or \"wsne\"");
        if (!profile->profile.shape_matches(game->game))
            throw std::invalid_argument("profile shape does not match game");
        if (second_profile && !second_profile->profile.shape_matches(game->game))
            throw std::invalid_argument("second profile shape does not match game");

        json rep;
        rep["eps"] = eps;
        rep["mode"] = mode;
        {
            pmx::RegretReport wr = pmx::regret_report(game->game, profile->profile);
            double welfare = 0.0;
            for (const auto& pr : wr.players) welfare += pr.expected;
            rep["welfare"] = welfare;
        }
        bool pass;
        if (opts.contains("constraint")) {
            pmx::ConstraintCheck c = constraint_from_json(opts["constraint"]);
            pmx::CheckOutcome outcome =
                pmx::check(game->game, profile->profile, second_profile ? &second_profile->profile : nullptr, c,
                           eps);
            pass = outcome.pass;
            rep["constraint"] = {{"problem", c.problem},
                                 {"equilibrium_ok", outcome.equilibrium_ok},
                                 {"predicate_ok", outcome.predicate_ok},
                                 {"value", outcome.value},
                                 {"explanation", outcome.explanation}};
            rep["regret_report"] = pmx::regret_report_to_json(outcome.report);
            if (outcome.second_report)
                rep["second_regret_report"] = pmx::regret_report_to_json(*outcome.second_report);
        } else {
            if (second_profile) throw std::invalid_argument("a second profile needs constraint problem 5");
            auto [ok, report] = mode == "ne" ? pmx::is_eps_ne(game->game, profile->profile, eps)
                                             : pmx::is_eps_wsne(game->game, profile->profile, eps);
            pass = ok;
            rep["regret_report"] = pmx::regret_report_to_json(report);
        }
        rep["pass"] = pass;
        if (out_report_json) *out_report_json = dup_string(rep.dump(2));
        return pass ? PMX_OK : PMX_VERIFY_FAILED;
    });
}

pmx_status pmx_oracle(const pmx_game* game, const char* request_json, char** out_results_json) {
    return guarded([&]() -> pmx_status {
        if (!game || !out_results_json) throw std::invalid_argument("null argument");
        json req = parse_options(request_json, "oracle request");
        const std::string op = req.value("op", "");
        json out;
        out["op"] = op;
        if (op == "pure") {
            const double eps = req.value("eps", 0.0);
            auto results = pmx::enumerate_pure_ne(game->game, eps, req.value("budget", std::uint64_t{10000000}),
                                                  req.value("threads", 1));
            json arr = json::array();
            for (const auto& r : results) arr.push_back({{"actions", r.actions}, {"max_regret", r.max_regret}});
            out["eps"] = eps;
            out["count"] = results.size();
            out["profiles"] = std::move(arr);
        } else if (op == "kuniform") {
            const double eps = req.value("eps", 0.0);
            const int k = req.value("k", 1);
            auto results = pmx::enumerate_k_uniform_ne(game->game, k, eps,
                                                       req.value("budget", std::uint64_t{1000000}),
                                                       req.value("threads", 1));
            json arr = json::array();
            for (const auto& r : results) {
                json strategies = json::array();
                for (const auto& s : r.strategies) strategies.push_back(s.multiset);
                arr.push_back({{"multisets", std::move(strategies)}, {"max_regret", r.max_regret}});
            }
            out["eps"] = eps;
            out["k"] = k;
            out["count"] = results.size();
            out["profiles"] = std::move(arr);
        } else if (op == "grid") {
            const double eps = req.value("eps", 0.0);
            const double step = req.value("grid_step", 0.5);
            auto results =
                pmx::grid_search_wsne(game->game, eps, step, req.value("budget", std::uint64_t{10000000}));
            json arr = json::array();
            for (const auto& p : results) arr.push_back(pmx::profile_to_json(p));
            out["eps"] = eps;
            out["grid_step"] = step;
            out["count"] = results.size();
            out["profiles"] = std::move(arr);
        } else if (op == "sample") {
            if (!req.contains("profile")) throw std::invalid_argument("sample op needs \"profile\"");
            pmx::StrategyProfile profile = pmx::profile_from_json(req["profile"]);
            const int k = req.value("k", 100);
            const int trials = req.value("trials", 100);
            const std::uint64_t seed = req.value("seed", std::uint64_t{0});
            const double eps = req.value("eps", 0.8);
            auto res = pmx::sampling_check(game->game, profile, k, trials, seed, eps);
            out["k"] = k;
            out["trials"] = trials;
            out["seed"] = seed;
            out["max_deviation"] = res.max_deviation;
            out["threshold"] = res.threshold;
            out["fraction_within"] = res.fraction_within;
            out["trial_deviations"] = res.trial_deviations;
            out["certifying"] = false;
            out["note"] = "empirical sampling check; supports but does not certify the eps/16 bound";
        } else {
            throw std::invalid_argument("oracle op must be pure, kuniform, grid or sample");
        }
        *out_results_json = dup_string(out.dump(2));
        return PMX_OK;
    });
}

}  // extern "C"

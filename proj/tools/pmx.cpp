// Command-line front end. Links only the C API (polymatrix.h); all game
// logic lives behind it.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "polymatrix.h"

using nlohmann::json;

namespace {

struct StringDeleter {
    void operator()(char* s) const { pmx_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct GameDeleter {
    void operator()(pmx_game* g) const { pmx_game_free(g); }
};
using Game = std::unique_ptr<pmx_game, GameDeleter>;

struct ProfileDeleter {
    void operator()(pmx_profile* p) const { pmx_profile_free(p); }
};
using Profile = std::unique_ptr<pmx_profile, ProfileDeleter>;

int fail(const std::string& what) {
    std::cerr << "pmx: " << what << "\n";
    return 1;
}

int fail_api(const std::string& what) { return fail(what + ": " + pmx_last_error()); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

/// --constraint accepts inline JSON or @file.
std::string constraint_text(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') return read_file(arg.substr(1));
    return arg;
}

void attach_meta(json& j, bool no_meta) {
    if (no_meta) return;
    std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["meta"] = {{"tool", "pmx"}, {"version", pmx_version()}, {"timestamp", buf}};
}

Game load_game(const std::string& path) {
    std::string text = read_file(path);
    pmx_game* g = nullptr;
    if (pmx_game_from_json(text.c_str(), &g) != PMX_OK)
        throw std::runtime_error(std::string("loading ") + path + ": " + pmx_last_error());
    return Game(g);
}

Profile load_profile(const std::string& path) {
    std::string text = read_file(path);
    pmx_profile* p = nullptr;
    if (pmx_profile_from_json(text.c_str(), &p) != PMX_OK)
        throw std::runtime_error(std::string("loading ") + path + ": " + pmx_last_error());
    return Profile(p);
}

int cmd_generate(const std::string& formula_path, const std::string& kind, const std::string& eps,
                 const std::string& out_path, const std::string& manifest_path, bool no_meta) {
    std::string formula = read_file(formula_path);
    pmx_game* game_raw = nullptr;
    char* manifest_raw = nullptr;
    pmx_status st = pmx_generate(formula.c_str(), kind.c_str(), eps.empty() ? nullptr : eps.c_str(), &game_raw,
                                 &manifest_raw);
    if (st != PMX_OK) return fail_api("generate");
    Game game(game_raw);
    CString manifest(manifest_raw);

    char* game_json_raw = nullptr;
    if (pmx_game_to_json(game.get(), &game_json_raw) != PMX_OK) return fail_api("generate");
    CString game_json(game_json_raw);
    write_file(out_path, std::string(game_json.get()) + "\n");

    json man = json::parse(manifest.get());
    man["game_file"] = out_path;
    attach_meta(man, no_meta);
    std::string man_text = man.dump(2) + "\n";
    if (!manifest_path.empty()) write_file(manifest_path, man_text);
    else std::cout << man_text;
    return 0;
}

int cmd_solve(const std::string& game_path, const std::string& td_path, double eps, int k,
              const std::string& constraint, std::uint64_t /*seed*/, int /*threads*/, bool instrument,
              const std::string& dump_witnesses_path, std::uint64_t witness_budget, const std::string& out_path,
              const std::string& report_path, bool no_meta) {
    Game game = load_game(game_path);
    std::string td_text;
    if (!td_path.empty()) td_text = read_file(td_path);

    json opts;
    opts["eps"] = eps;
    if (k > 0) opts["k"] = k;
    if (!constraint.empty()) opts["constraint"] = json::parse(constraint_text(constraint));
    if (instrument) opts["instrument"] = true;
    if (!dump_witnesses_path.empty()) opts["dump_witnesses"] = true;
    if (witness_budget > 0) opts["witness_budget"] = witness_budget;

    pmx_profile* profile_raw = nullptr;
    char* report_raw = nullptr;
    pmx_status st = pmx_solve(game.get(), td_text.empty() ? nullptr : td_text.c_str(),
                              opts.dump().c_str(), &profile_raw, &report_raw);
    if (st != PMX_OK && st != PMX_NO_CERTIFIED_NE) return fail_api("solve");
    Profile profile(profile_raw);
    CString report_cstr(report_raw);

    json report = json::parse(report_cstr.get());
    if (!dump_witnesses_path.empty() && report.contains("witness_tables")) {
        write_file(dump_witnesses_path, report["witness_tables"].dump(2) + "\n");
        report.erase("witness_tables");
    }
    if (profile) {
        char* profile_json_raw = nullptr;
        if (pmx_profile_to_json(profile.get(), &profile_json_raw) != PMX_OK) return fail_api("solve");
        CString profile_json(profile_json_raw);
        if (!out_path.empty()) write_file(out_path, std::string(profile_json.get()) + "\n");
        else report["profile"] = json::parse(profile_json.get());
    }
    attach_meta(report, no_meta);
    std::string report_text = report.dump(2) + "\n";
    if (!report_path.empty()) write_file(report_path, report_text);
    else std::cout << report_text;
    return st == PMX_NO_CERTIFIED_NE ? 2 : 0;
}

int cmd_verify(const std::string& game_path, const std::vector<std::string>& profile_paths, double eps,
               const std::string& mode, const std::string& constraint, bool no_meta) {
    Game game = load_game(game_path);
    if (profile_paths.empty() || profile_paths.size() > 2) return fail("verify takes one or two profile files");
    Profile first = load_profile(profile_paths[0]);
    Profile second;
    if (profile_paths.size() == 2) second = load_profile(profile_paths[1]);

    json opts;
    opts["eps"] = eps;
    opts["mode"] = mode;
    if (!constraint.empty()) opts["constraint"] = json::parse(constraint_text(constraint));

    char* report_raw = nullptr;
    pmx_status st = pmx_verify(game.get(), first.get(), second.get(), opts.dump().c_str(), &report_raw);
    if (st != PMX_OK && st != PMX_VERIFY_FAILED) return fail_api("verify");
    CString report_cstr(report_raw);
    json report = json::parse(report_cstr.get());
    attach_meta(report, no_meta);
    std::cout << report.dump(2) << "\n";
    return st == PMX_VERIFY_FAILED ? 3 : 0;
}

int cmd_oracle(const std::string& game_path, const std::string& op, double eps, int k, double grid_step,
               int trials, std::uint64_t seed, std::uint64_t budget, int threads,
               const std::string& profile_path, bool no_meta) {
    Game game = load_game(game_path);
    json req;
    req["op"] = op;
    req["eps"] = eps;
    if (k > 0) req["k"] = k;
    if (op == "grid") req["grid_step"] = grid_step;
    if (op == "sample") {
        req["trials"] = trials;
        req["seed"] = seed;
        if (profile_path.empty()) return fail("oracle sample needs --profile");
        req["profile"] = json::parse(read_file(profile_path));
    }
    if (budget > 0) req["budget"] = budget;
    req["threads"] = threads;

    char* results_raw = nullptr;
    pmx_status st = pmx_oracle(game.get(), req.dump().c_str(), &results_raw);
    if (st != PMX_OK) return fail_api("oracle");
    CString results(results_raw);
    json out = json::parse(results.get());
    attach_meta(out, no_meta);
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polymatrix game toolkit: gadget generation, equilibrium verification, "
                 "tree-decomposition solving and brute-force oracles"};
    app.require_subcommand(1);
    bool no_meta = false;
    app.add_flag("--no-meta", no_meta, "omit timestamps from outputs (byte-identical reruns)");

    // generate
    std::string gen_formula, gen_kind = "G", gen_eps, gen_out, gen_manifest;
    CLI::App* gen = app.add_subcommand("generate", "build a gadget game from a monotone 1-in-3 formula");
    gen->add_option("formula", gen_formula, "formula file (p m13sat header)")->required();
    gen->add_option("--kind", gen_kind, "G, Gprime or Gtilde")->required();
    gen->add_option("--eps", gen_eps, "gadget eps in (0,1), exact decimal or fraction (Gprime/Gtilde)");
    gen->add_option("--out", gen_out, "output game JSON file")->required();
    gen->add_option("--manifest", gen_manifest, "manifest file (default: stdout)");

    // solve
    std::string sol_game, sol_td, sol_constraint, sol_out, sol_report, sol_dump;
    double sol_eps = 0.5;
    int sol_k = 0, sol_threads = 1;
    std::uint64_t sol_seed = 0, sol_witness_budget = 0;
    bool sol_instrument = false;
    CLI::App* sol = app.add_subcommand("solve", "find a 1.5*eps-NE via the tree-decomposition DP");
    sol->add_option("game", sol_game, "game JSON file")->required();
    sol->add_option("--td", sol_td, "tree decomposition file (.td); omitted => exact small-instance search");
    sol->add_option("--eps", sol_eps, "accuracy parameter in (0,1]")->required();
    sol->add_option("--k", sol_k, "k-uniform sample size (default: the analytical k bound)");
    sol->add_option("--constraint", sol_constraint, "constraint JSON or @file ({\"problem\":1-9,\"param\":...})");
    sol->add_option("--seed", sol_seed, "random seed (reserved; the solver is deterministic)");
    sol->add_option("--threads", sol_threads, "worker threads (default 1 for reproducibility)");
    sol->add_flag("--instrument", sol_instrument, "track exact shadow payoffs; adds the rounding ledger to the report");
    sol->add_option("--dump-witnesses", sol_dump, "write phase-1 witness tables to a JSON file");
    sol->add_option("--witness-budget", sol_witness_budget, "abort if phase 1 generates more witnesses than this");
    sol->add_option("--out", sol_out, "profile output file (default: embedded in the report)");
    sol->add_option("--report", sol_report, "report output file (default: stdout)");

    // verify
    std::string ver_game, ver_mode = "ne", ver_constraint;
    std::vector<std::string> ver_profiles;
    double ver_eps = 0.0;
    CLI::App* ver = app.add_subcommand("verify", "check eps-NE / eps-WSNE and Table-1 style constraints");
    ver->add_option("game", ver_game, "game JSON file")->required();
    ver->add_option("profiles", ver_profiles, "one profile file (two for constraint problem 5)")
        ->required()
        ->expected(1, 2);
    ver->add_option("--eps", ver_eps, "tolerance eps >= 0")->required();
    ver->add_option("--mode", ver_mode, "ne or wsne (constraint rows override: P1 ne, P2-9 wsne)");
    ver->add_option("--constraint", ver_constraint, "constraint JSON or @file");

    // oracle
    std::string ora_game, ora_op, ora_profile;
    double ora_eps = 0.0, ora_step = 0.5;
    int ora_k = 0, ora_trials = 100, ora_threads = 1;
    std::uint64_t ora_seed = 0, ora_budget = 0;
    CLI::App* ora = app.add_subcommand("oracle", "brute-force enumerations and sampling checks");
    ora->add_option("game", ora_game, "game JSON file")->required();
    ora->add_option("op", ora_op, "pure | kuniform | grid | sample")->required();
    ora->add_option("--eps", ora_eps, "tolerance eps >= 0");
    ora->add_option("--k", ora_k, "multiset size (kuniform/sample)");
    ora->add_option("--grid-step", ora_step, "probability grid step (grid)");
    ora->add_option("--trials", ora_trials, "sampling trials (sample)");
    ora->add_option("--seed", ora_seed, "random seed (sample)");
    ora->add_option("--budget", ora_budget, "enumeration budget override");
    ora->add_option("--threads", ora_threads, "worker threads for enumerations");
    ora->add_option("--profile", ora_profile, "profile JSON file (sample)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_generate(gen_formula, gen_kind, gen_eps, gen_out, gen_manifest, no_meta);
        if (sol->parsed())
            return cmd_solve(sol_game, sol_td, sol_eps, sol_k, sol_constraint, sol_seed, sol_threads,
                             sol_instrument, sol_dump, sol_witness_budget, sol_out, sol_report, no_meta);
        if (ver->parsed())
            return cmd_verify(ver_game, ver_profiles, ver_eps, ver_mode, ver_constraint, no_meta);
        if (ora->parsed())
            return cmd_oracle(ora_game, ora_op, ora_eps, ora_k, ora_step, ora_trials, ora_seed, ora_budget,
                              ora_threads, ora_profile, no_meta);
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    return fail("no subcommand");
}

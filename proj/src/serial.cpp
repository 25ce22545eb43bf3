#include "serial.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace pmx {

using nlohmann::json;

json game_to_json(const PolymatrixGame& game) {
    json j;
    j["n"] = game.players();
    j["actions"] = game.action_counts();
    json edges = json::array();
    for (const GameEdge& e : game.edges()) {
        json je;
        je["u"] = e.u;
        je["v"] = e.v;
        auto matrix_to_json = [](const Matrix& m) {
            json rows = json::array();
            for (int r = 0; r < m.rows; ++r) {
                json row = json::array();
                for (int c = 0; c < m.cols; ++c) row.push_back(m.at(r, c));
                rows.push_back(std::move(row));
            }
            return rows;
        };
        je["payoffs_u"] = matrix_to_json(e.payoff_u);
        je["payoffs_v"] = matrix_to_json(e.payoff_v);
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    return j;
}

PolymatrixGame game_from_json(const json& j) {
    try {
        if (!j.is_object()) throw ParseError("game JSON must be an object");
        if (!j.contains("actions") || !j["actions"].is_array()) throw ParseError("game JSON needs an 'actions' array");
        std::vector<int> actions = j["actions"].get<std::vector<int>>();
        if (j.contains("n") && j["n"].get<int>() != static_cast<int>(actions.size()))
            throw ParseError("game JSON: 'n' does not match the length of 'actions'");
        std::vector<GameEdge> edges;
        auto matrix_from_json = [](const json& rows, const char* name) {
            if (!rows.is_array() || rows.empty()) throw ParseError(std::string("bad matrix in ") + name);
            Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
            for (int r = 0; r < m.rows; ++r) {
                if (static_cast<int>(rows[r].size()) != m.cols)
                    throw ParseError(std::string("ragged matrix in ") + name);
                for (int c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c].get<double>();
            }
            return m;
        };
        for (const json& je : j.value("edges", json::array())) {
            GameEdge e;
            e.u = je.at("u").get<int>();
            e.v = je.at("v").get<int>();
            e.payoff_u = matrix_from_json(je.at("payoffs_u"), "payoffs_u");
            e.payoff_v = matrix_from_json(je.at("payoffs_v"), "payoffs_v");
            edges.push_back(std::move(e));
        }
        return PolymatrixGame(std::move(actions), std::move(edges));
    } catch (const json::exception& e) {
        throw ParseError(std::string("game JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("game JSON: ") + e.what());
    }
}

json profile_to_json(const StrategyProfile& profile) {
    json j = json::array();
    for (const MixedStrategy& s : profile.strategies) j.push_back(s.probs);
    return j;
}

StrategyProfile profile_from_json(const json& j) {
    try {
        if (!j.is_array()) throw ParseError("profile JSON must be an array of probability arrays");
        StrategyProfile p;
        for (const json& row : j) {
            MixedStrategy s;
            s.probs = row.get<std::vector<double>>();
            if (!s.valid())
                throw ParseError("profile strategy does not sum to 1 (or has negative entries)");
            p.strategies.push_back(std::move(s));
        }
        return p;
    } catch (const json::exception& e) {
        throw ParseError(std::string("profile JSON: ") + e.what());
    }
}

namespace {

[[noreturn]] void line_error(int line_no, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Formula parse_formula(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    Formula f;
    int declared_clauses = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;  // blank
        if (first == "c") continue;    // comment
        if (first == "p") {
            if (have_header) line_error(line_no, "duplicate header");
            std::string fmt;
            if (!(ls >> fmt) || fmt != "m13sat") line_error(line_no, "expected 'p m13sat <n_vars> <n_clauses>'");
            if (!(ls >> f.n_vars >> declared_clauses) || f.n_vars < 0 || declared_clauses < 0)
                line_error(line_no, "malformed header counts");
            have_header = true;
            continue;
        }
        if (!have_header) line_error(line_no, "clause before 'p m13sat' header");
        std::array<int, 3> clause{};
        int terminator = -1;
        std::istringstream cs(line);
        long v1, v2, v3;
        if (!(cs >> v1 >> v2 >> v3 >> terminator)) line_error(line_no, "expected '<v1> <v2> <v3> 0'");
        std::string extra;
        if (cs >> extra) line_error(line_no, "trailing tokens after clause");
        if (terminator != 0) line_error(line_no, "clause must end with 0");
        long vars[3] = {v1, v2, v3};
        for (int i = 0; i < 3; ++i) {
            if (vars[i] < 0) line_error(line_no, "negative literal (the formula must be monotone)");
            if (vars[i] == 0 || vars[i] > f.n_vars) line_error(line_no, "variable out of range");
            clause[static_cast<std::size_t>(i)] = static_cast<int>(vars[i]) - 1;
        }
        std::sort(clause.begin(), clause.end());
        if (clause[0] == clause[1] || clause[1] == clause[2])
            line_error(line_no, "repeated variable within a clause");
        f.clauses.push_back(clause);
    }
    if (!have_header) throw ParseError("missing 'p m13sat' header");
    if (declared_clauses != f.n_clauses())
        throw ParseError("header declares " + std::to_string(declared_clauses) + " clauses but " +
                         std::to_string(f.n_clauses()) + " were given");
    return f;
}

std::string formula_to_text(const Formula& formula) {
    std::ostringstream out;
    out << "p m13sat " << formula.n_vars << " " << formula.n_clauses() << "\n";
    for (const auto& cl : formula.clauses)
        out << cl[0] + 1 << " " << cl[1] + 1 << " " << cl[2] + 1 << " 0\n";
    return out.str();
}

std::pair<int, std::vector<std::pair<int, int>>> parse_gr(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int n = -1, m = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "c") continue;
        if (first == "p") {
            if (n >= 0) line_error(line_no, "duplicate header");
            std::string fmt;
            if (!(ls >> fmt) || fmt != "tw") line_error(line_no, "expected 'p tw <n> <m>'");
            if (!(ls >> n >> m) || n < 0 || m < 0) line_error(line_no, "malformed header counts");
            continue;
        }
        if (n < 0) line_error(line_no, "edge before 'p tw' header");
        int u, v;
        std::istringstream es(line);
        if (!(es >> u >> v)) line_error(line_no, "expected '<u> <v>'");
        if (u < 1 || u > n || v < 1 || v > n) line_error(line_no, "vertex out of range");
        edges.push_back({u - 1, v - 1});
    }
    if (n < 0) throw ParseError("missing 'p tw' header");
    if (m != static_cast<int>(edges.size()))
        throw ParseError("header declares " + std::to_string(m) + " edges but " +
                         std::to_string(edges.size()) + " were given");
    return {n, std::move(edges)};
}

std::string gr_to_text(int n_vertices, const std::vector<std::pair<int, int>>& edges) {
    std::ostringstream out;
    out << "p tw " << n_vertices << " " << edges.size() << "\n";
    for (auto [u, v] : edges) out << u + 1 << " " << v + 1 << "\n";
    return out.str();
}

TreeDecomposition parse_td(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int bags = -1, width_plus1 = -1, n = -1;
    TreeDecomposition dec;
    std::vector<char> seen_bag;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "c") continue;
        if (first == "s") {
            if (bags >= 0) line_error(line_no, "duplicate solution header");
            std::string fmt;
            if (!(ls >> fmt) || fmt != "td") line_error(line_no, "expected 's td <#bags> <width+1> <n>'");
            if (!(ls >> bags >> width_plus1 >> n) || bags < 0 || width_plus1 < 0 || n < 0)
                line_error(line_no, "malformed header counts");
            dec.bags.assign(static_cast<std::size_t>(bags), {});
            seen_bag.assign(static_cast<std::size_t>(bags), 0);
            continue;
        }
        if (bags < 0) line_error(line_no, "content before 's td' header");
        if (first == "b") {
            int id;
            if (!(ls >> id) || id < 1 || id > bags) line_error(line_no, "bag id out of range");
            if (seen_bag[static_cast<std::size_t>(id - 1)]) line_error(line_no, "duplicate bag id");
            seen_bag[static_cast<std::size_t>(id - 1)] = 1;
            std::vector<int>& bag = dec.bags[static_cast<std::size_t>(id - 1)];
            int v;
            while (ls >> v) {
                if (v < 1 || v > n) line_error(line_no, "bag vertex out of range");
                bag.push_back(v - 1);
            }
            std::sort(bag.begin(), bag.end());
            bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
            continue;
        }
        // Bag tree edge.
        int a, b;
        std::istringstream es(line);
        if (!(es >> a >> b)) line_error(line_no, "expected '<i> <j>' bag tree edge");
        if (a < 1 || a > bags || b < 1 || b > bags) line_error(line_no, "bag id out of range");
        dec.tree_edges.push_back({a - 1, b - 1});
    }
    if (bags < 0) throw ParseError("missing 's td' header");
    for (const auto& bag : dec.bags)
        if (static_cast<int>(bag.size()) > width_plus1)
            throw ParseError("a bag exceeds the declared width");
    return dec;
}

std::string td_to_text(const TreeDecomposition& dec, int n_vertices) {
    std::ostringstream out;
    out << "s td " << dec.nodes() << " " << dec.width() + 1 << " " << n_vertices << "\n";
    for (int i = 0; i < dec.nodes(); ++i) {
        out << "b " << i + 1;
        for (int v : dec.bags[static_cast<std::size_t>(i)]) out << " " << v + 1;
        out << "\n";
    }
    for (auto [a, b] : dec.tree_edges) out << a + 1 << " " << b + 1 << "\n";
    return out.str();
}

json witness_tables_to_json(const NiceTreeDecomposition& nice, const std::vector<std::vector<Witness>>& tables,
                            const RoundedPayoffGrid& grid) {
    json nodes = json::array();
    for (std::size_t vi = 0; vi < nice.nodes.size(); ++vi) {
        json jn;
        jn["node"] = vi;
        jn["type"] = node_type_name(nice.nodes[vi].type);
        jn["bag"] = nice.nodes[vi].bag;
        json ws = json::array();
        for (const Witness& w : tables[vi]) {
            json jw;
            json strategies = json::array();
            for (const KUniformStrategy& s : w.strats) strategies.push_back(s.multiset);
            jw["strategies"] = std::move(strategies);
            json pays = json::array();
            for (const auto& pv : w.pays) {
                json row = json::array();
                for (long idx : pv) row.push_back(grid.value(idx));
                pays.push_back(std::move(row));
            }
            jw["payoffs"] = std::move(pays);
            jw["x"] = w.x.defined() ? json(rational_to_string(*w.x.v)) : json(nullptr);
            ws.push_back(std::move(jw));
        }
        jn["witnesses"] = std::move(ws);
        nodes.push_back(std::move(jn));
    }
    json out;
    out["nodes"] = std::move(nodes);
    return out;
}

json regret_report_to_json(const RegretReport& report) {
    json players = json::array();
    for (const PlayerRegret& pr : report.players) {
        json jp;
        jp["payoff_vector"] = pr.payoff_vector;
        jp["expected"] = pr.expected;
        jp["best_response"] = pr.best_response;
        jp["regret"] = pr.regret;
        jp["pure_regrets"] = pr.pure_regrets;
        players.push_back(std::move(jp));
    }
    json out;
    out["players"] = std::move(players);
    out["max_regret"] = report.max_regret;
    out["max_support_regret"] = report.max_support_regret;
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << content;
}

}  // namespace pmx

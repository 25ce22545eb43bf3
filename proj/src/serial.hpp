#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dp.hpp"
#include "game.hpp"
#include "reductions.hpp"
#include "treedec.hpp"

namespace pmx {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// {"n", "actions": [...], "edges": [{"u","v","payoffs_u","payoffs_v"}]}.
/// Doubles round-trip bit-exactly (shortest round-trip decimal encoding).
nlohmann::json game_to_json(const PolymatrixGame& game);
PolymatrixGame game_from_json(const nlohmann::json& j);

/// A profile is a JSON array of probability arrays.
nlohmann::json profile_to_json(const StrategyProfile& profile);
StrategyProfile profile_from_json(const nlohmann::json& j);

/// DIMACS-like monotone 1-in-3 format: header `p m13sat <n_vars> <n_clauses>`,
/// clause lines `<v1> <v2> <v3> 0` (1-based), `c ...` comments. Rejects
/// negative literals and repeated variables, with line numbers.
Formula parse_formula(const std::string& text);
std::string formula_to_text(const Formula& formula);

/// PACE-style graph: `p tw <n> <m>` then 1-based edge lines.
std::pair<int, std::vector<std::pair<int, int>>> parse_gr(const std::string& text);
std::string gr_to_text(int n_vertices, const std::vector<std::pair<int, int>>& edges);

/// PACE-style decomposition: `s td <#bags> <width+1> <n>`, `b <id> <v...>`,
/// then bag tree edges; all 1-based.
TreeDecomposition parse_td(const std::string& text);
std::string td_to_text(const TreeDecomposition& dec, int n_vertices);

nlohmann::json witness_tables_to_json(const NiceTreeDecomposition& nice,
                                      const std::vector<std::vector<Witness>>& tables,
                                      const RoundedPayoffGrid& grid);

nlohmann::json regret_report_to_json(const RegretReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace pmx

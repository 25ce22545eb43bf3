/* Polymatrix game toolkit: C API.
 *
 * All functions return a pmx_status; results are returned through out
 * parameters. Handles are opaque and must be released with the matching
 * _free function; strings returned by the library are released with
 * pmx_string_free. On any non-OK status, pmx_last_error() describes the
 * problem (thread-local). Structured inputs and outputs are JSON text.
 */
#ifndef POLYMATRIX_H
#define POLYMATRIX_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pmx_status {
    PMX_OK = 0,
    /* Usage, parse or IO error; details via pmx_last_error(). */
    PMX_ERROR = 1,
    /* Solve finished with an empty root table: no k-uniform eps/4-NE
     * exists. Distinct from failure. */
    PMX_NO_CERTIFIED_NE = 2,
    /* Verification ran and the profile failed the requested check. */
    PMX_VERIFY_FAILED = 3,
    /* An enumeration refused to run past its budget. */
    PMX_BUDGET_EXCEEDED = 4
} pmx_status;

typedef struct pmx_game pmx_game;
typedef struct pmx_profile pmx_profile;

const char* pmx_version(void);

/* Thread-local message describing the most recent failure. */
const char* pmx_last_error(void);

void pmx_string_free(char* s);
void pmx_game_free(pmx_game* game);
void pmx_profile_free(pmx_profile* profile);

/* ---- Games and profiles (JSON formats documented in the README) ---- */

pmx_status pmx_game_from_json(const char* json_text, pmx_game** out_game);
pmx_status pmx_game_to_json(const pmx_game* game, char** out_json);
int pmx_game_players(const pmx_game* game);
int pmx_game_actions(const pmx_game* game, int player);

pmx_status pmx_profile_from_json(const char* json_text, pmx_profile** out_profile);
pmx_status pmx_profile_to_json(const pmx_profile* profile, char** out_json);

/* Normalizes payoffs to [0,1] per player. out_affine_json records the
 * per-player scale/shift applied to total payoffs. */
pmx_status pmx_game_normalize(const pmx_game* game, pmx_game** out_game, char** out_affine_json);

/* ---- Gadget generation ---- */

/* kind: "G", "Gprime" or "Gtilde". eps_decimal: exact decimal or fraction
 * string, e.g. "0.5" or "2/9" (required for Gprime/Gtilde, ignored for G).
 * The manifest carries roles, strategy names, constants and the 1-in-3
 * ground-truth label. */
pmx_status pmx_generate(const char* formula_text, const char* kind, const char* eps_decimal,
                        pmx_game** out_game, char** out_manifest_json);

/* ---- Solver ---- */

/* options: {"eps": number, "k": int?, "constraint": {"problem": 1..9,
 * "param": ...}?, "instrument": bool?, "dump_witnesses": bool?,
 * "witness_budget": int?}
 * td_text: optional PACE .td text; omitted => exact small-instance
 * decomposition. On PMX_OK, *out_profile holds the 1.5*eps profile.
 * On PMX_NO_CERTIFIED_NE, *out_profile is NULL and the report explains. */
pmx_status pmx_solve(const pmx_game* game, const char* td_text, const char* options_json,
                     pmx_profile** out_profile, char** out_report_json);

/* ---- Verification ---- */

/* options: {"eps": number, "mode": "ne"|"wsne", "constraint": {...}?}.
 * second_profile is required exactly for constraint problem 5.
 * PMX_OK = pass, PMX_VERIFY_FAILED = checks ran and failed. */
pmx_status pmx_verify(const pmx_game* game, const pmx_profile* profile, const pmx_profile* second_profile,
                      const char* options_json, char** out_report_json);

/* ---- Oracles ---- */

/* request: {"op": "pure"|"kuniform"|"grid"|"sample", "eps": number,
 * "k": int?, "grid_step": number?, "trials": int?, "seed": int?,
 * "budget": int?, "threads": int?, "profile": [[...]]? (sample only)} */
pmx_status pmx_oracle(const pmx_game* game, const char* request_json, char** out_results_json);

#ifdef __cplusplus
}
#endif

#endif /* POLYMATRIX_H */

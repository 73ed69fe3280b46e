#ifndef LEOISL_H
#define LEOISL_H

/* C interface to the LEO inter-satellite link simulator. All functions
 * return a status code; on failure leoisl_last_error() describes the cause
 * for the calling thread. Strings returned through out-parameters are
 * heap-allocated and must be released with leoisl_string_free(). */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct leoisl_scenario leoisl_scenario;

enum {
  LEOISL_OK = 0,
  LEOISL_ERR_CONFIG = 2,         /* bad configuration or options */
  LEOISL_ERR_INFEASIBLE = 3,     /* empty feasible set / no such window */
  LEOISL_ERR_SEARCH_ABORTED = 4, /* search space above the cost gate */
  LEOISL_ERR_INTERNAL = 5        /* I/O or internal failure */
};

const char* leoisl_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* leoisl_last_error(void);

int leoisl_scenario_from_json(const char* json_text, leoisl_scenario** out);
int leoisl_scenario_from_file(const char* path, leoisl_scenario** out);
void leoisl_scenario_destroy(leoisl_scenario* sc);

/* Feasibility timeline and per-L window statistics.
 * Writes timeline + window_stats tables under out_dir. */
int leoisl_run_feasibility(const leoisl_scenario* sc, const char* opts_json,
                           const char* out_dir, char** summary_json);

/* Doppler table at the resolved epoch.
 * opts_json keys: "epoch" (number), "format" ("csv"|"json"). */
int leoisl_run_doppler(const leoisl_scenario* sc, const char* opts_json,
                       const char* out_dir, char** summary_json);

/* Multi-scheme capacity/fairness comparison.
 * opts_json keys: "schemes" (array of names), "search_mode"
 * ("random-sample"|"exhaustive"|"swap-heuristic"), "samples", "seed",
 * "allow_exhaustive", "epoch", "format", "sweep_S" (array of ints),
 * "sweep_noise_figure" (array of dB values). */
int leoisl_run_comparison(const leoisl_scenario* sc, const char* opts_json,
                          const char* out_dir, char** summary_json);

/* Single partition study.
 * opts_json keys: "algorithm" ("alg1"|"alg2"), "dof"
 * ("uniform"|"optimized"), "search_mode", "samples", "seed",
 * "allow_exhaustive", "epoch", "format". */
int leoisl_run_partition(const leoisl_scenario* sc, const char* opts_json,
                         const char* out_dir, char** summary_json);

void leoisl_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* LEOISL_H */

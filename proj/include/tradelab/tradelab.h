/* C interface to the tradelab library.
 *
 * Every function returns a tl_status. On failure, tl_last_error() returns a
 * message describing the most recent failure on the calling thread; the
 * pointer stays valid until the next failing call on that thread.
 *
 * Objects are opaque handles created by *_create and released by
 * *_destroy. Destroy functions accept NULL. Handles are not thread-safe;
 * distinct handles may be used from different threads.
 */
#ifndef TRADELAB_TRADELAB_H
#define TRADELAB_TRADELAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TL_API __declspec(dllexport)
#else
#define TL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tl_status {
  TL_OK = 0,
  TL_ERR_INVALID_ARGUMENT = 1, /* NULL pointer or out-of-range value */
  TL_ERR_CONTRACT = 2,         /* call order or feedback variant violated */
  TL_ERR_CONFIG = 3,           /* configuration or input file rejected */
  TL_ERR_IO = 4,               /* file could not be read or written */
  TL_ERR_INTERNAL = 5
} tl_status;

typedef enum tl_feedback_kind {
  TL_FEEDBACK_FULL = 0,
  TL_FEEDBACK_REALISTIC = 1,
  TL_FEEDBACK_TRADE_BIT = 2,
  TL_FEEDBACK_NONE = 3
} tl_feedback_kind;

typedef struct tl_env tl_env;
typedef struct tl_strategy tl_strategy;
typedef struct tl_rng tl_rng;

/* Receives one line of output, without the trailing newline. */
typedef void (*tl_line_callback)(const char* line, void* user);

TL_API const char* tl_last_error(void);
TL_API const char* tl_version(void);

/* ---- Rewards ------------------------------------------------------------ */

/* (b - s) if s <= p <= b, else 0. */
TL_API tl_status tl_gft(double p, double s, double b, double* out);
/* (b - p' + p - s) if s <= p <= p' <= b, else 0. */
TL_API tl_status tl_gft_wbb(double p, double p_prime, double s, double b, double* out);

/* ---- Random streams ----------------------------------------------------- */

TL_API tl_status tl_rng_create(uint64_t seed, tl_rng** out);
TL_API void tl_rng_destroy(tl_rng* rng);
TL_API tl_status tl_rng_uniform(tl_rng* rng, double* out);

/* ---- Environments ------------------------------------------------------- */

/* spec: a family name ("uniform_iid") or a JSON object such as
 * {"family": "t23_lower", "eps": 0.7}. */
TL_API tl_status tl_env_create(const char* spec, tl_env** out);
TL_API void tl_env_destroy(tl_env* env);
/* The string is owned by env. */
TL_API tl_status tl_env_name(const tl_env* env, const char** out);
TL_API tl_status tl_env_expected_gft(const tl_env* env, double p, double* out);
TL_API tl_status tl_env_expected_gft_wbb(const tl_env* env, double p, double p_prime,
                                         double* out);
/* Independent numeric evaluation; n >= 1000 cells. */
TL_API tl_status tl_env_numeric_expected_gft(const tl_env* env, double p, size_t n,
                                             double* out);
TL_API tl_status tl_env_trade_probability(const tl_env* env, double p, double* out);
TL_API tl_status tl_env_best_price(const tl_env* env, double* price, double* value);
TL_API tl_status tl_env_sample(const tl_env* env, tl_rng* rng, double* s, double* b);

/* ---- Strategies --------------------------------------------------------- */

/* algo: a family name ("fbp") or a JSON object such as
 * {"family": "scouting_bandits", "exploration_rounds": "auto"}.
 * env may be NULL unless the family needs distribution knowledge
 * (best_fixed_price, median_mechanism). */
TL_API tl_status tl_strategy_create(const char* algo, uint64_t horizon, const tl_env* env,
                                    tl_strategy** out);
TL_API void tl_strategy_destroy(tl_strategy* strategy);
/* Deep copy that behaves identically on identical future inputs. */
TL_API tl_status tl_strategy_snapshot(const tl_strategy* strategy, tl_strategy** out);
TL_API tl_status tl_strategy_name(const tl_strategy* strategy, const char** out);
TL_API tl_status tl_strategy_required_feedback(const tl_strategy* strategy,
                                               tl_feedback_kind* out);
/* Writes the seller price p and the buyer price p' (equal for budget
 * balanced strategies). Must alternate with one observe call. */
TL_API tl_status tl_strategy_next_post(tl_strategy* strategy, tl_rng* rng, double* p,
                                       double* p_prime);
TL_API tl_status tl_strategy_observe_full(tl_strategy* strategy, double s, double b);
TL_API tl_status tl_strategy_observe_realistic(tl_strategy* strategy, int seller_accepts,
                                               int buyer_accepts);
TL_API tl_status tl_strategy_observe_trade_bit(tl_strategy* strategy, int traded);
TL_API tl_status tl_strategy_observe_none(tl_strategy* strategy);

/* ---- Drivers ------------------------------------------------------------ */

/* Runs every experiment of a JSON config file, writing <name>_trace.csv and
 * <name>_summary.csv under the output directory (the config's, or
 * output_dir when non-NULL). Progress and summary tables go to cb. */
TL_API tl_status tl_run_config_file(const char* path, const char* output_dir, tl_line_callback cb,
                                    void* user);

/* Runs the property suite; properties whose name contains filter (all when
 * filter is NULL or empty). One "PASS name: detail" or "FAIL name: detail"
 * line per property. failures receives the number of failed properties. */
TL_API tl_status tl_verify(const char* filter, tl_line_callback cb, void* user, int* failures);
/* Names of the properties, one per line. */
TL_API tl_status tl_verify_list(tl_line_callback cb, void* user);

/* Converts a summary CSV into log-log plot data with reference lines T^a for
 * a in {1/2, 2/3, 3/4, 1}; emits CSV lines. */
TL_API tl_status tl_plotdata_summary(const char* summary_csv_path, tl_line_callback cb,
                                     void* user);
/* Expected GFT of an environment on a uniform grid of `points` prices. */
TL_API tl_status tl_plotdata_curve(const char* env_spec, int points, tl_line_callback cb,
                                   void* user);

/* Upper bound table for the given horizons (auto-tuned parameters, density
 * bound M), followed by the lower bound constants. */
TL_API tl_status tl_bounds_table(const uint64_t* horizons, size_t count, double density_bound,
                                 tl_line_callback cb, void* user);

#ifdef __cplusplus
}
#endif

#endif /* TRADELAB_TRADELAB_H */

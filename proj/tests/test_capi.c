/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "tradelab/tradelab.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expectation failed: %s (%s)\n", __FILE__, \
              __LINE__, #cond, tl_last_error());                      \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static int lines_seen = 0;
static void count_lines(const char* line, void* user) {
  (void)line;
  ++*(int*)user;
}

int main(void) {
  double value = -1.0;
  EXPECT(tl_gft(0.5, 0.25, 0.75, &value) == TL_OK && fabs(value - 0.5) < 1e-15);
  EXPECT(tl_gft_wbb(0.3, 0.6, 0.2, 0.8, &value) == TL_OK && fabs(value - 0.3) < 1e-12);
  EXPECT(tl_gft_wbb(0.6, 0.3, 0.2, 0.8, &value) == TL_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(tl_last_error()) > 0);
  EXPECT(tl_gft(0.5, 0.25, 0.75, NULL) == TL_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(tl_version()) > 0);

  tl_env* env = NULL;
  EXPECT(tl_env_create("{\"family\": \"bd_lower\", \"lambda\": 0}", &env) == TL_OK);
  EXPECT(tl_env_expected_gft(env, 0.375, &value) == TL_OK && fabs(value - 1.0 / 3.0) < 1e-12);
  EXPECT(tl_env_numeric_expected_gft(env, 0.375, 10000, &value) == TL_OK &&
         fabs(value - 1.0 / 3.0) < 1e-6);
  double price = 0.0;
  EXPECT(tl_env_best_price(env, &price, &value) == TL_OK && fabs(price - 0.375) < 1e-9);
  EXPECT(tl_env_trade_probability(env, 0.5, &value) == TL_OK);
  const char* name = NULL;
  EXPECT(tl_env_name(env, &name) == TL_OK && name != NULL);

  tl_env* bad = NULL;
  EXPECT(tl_env_create("{\"family\": \"moon\"}", &bad) == TL_ERR_CONFIG && bad == NULL);

  tl_rng* rng = NULL;
  EXPECT(tl_rng_create(7, &rng) == TL_OK);
  double s = 0.0, b = 0.0;
  EXPECT(tl_env_sample(env, rng, &s, &b) == TL_OK && s >= 0.0 && b <= 1.0);

  tl_strategy* fbp = NULL;
  EXPECT(tl_strategy_create("fbp", 100, NULL, &fbp) == TL_OK);
  tl_feedback_kind kind = TL_FEEDBACK_NONE;
  EXPECT(tl_strategy_required_feedback(fbp, &kind) == TL_OK && kind == TL_FEEDBACK_FULL);
  double p = 0.0, q = 0.0;
  EXPECT(tl_strategy_next_post(fbp, rng, &p, &q) == TL_OK && p == 0.5 && q == 0.5);
  EXPECT(tl_strategy_observe_realistic(fbp, 1, 1) == TL_ERR_CONTRACT);
  EXPECT(tl_strategy_observe_full(fbp, 0.2, 0.8) == TL_OK);
  EXPECT(tl_strategy_next_post(fbp, rng, &p, &q) == TL_OK);
  EXPECT(tl_strategy_observe_full(fbp, 0.5, 0.6) == TL_OK);

  tl_strategy* copy = NULL;
  EXPECT(tl_strategy_snapshot(fbp, &copy) == TL_OK);
  double p2 = 0.0, q2 = 0.0;
  EXPECT(tl_strategy_next_post(fbp, rng, &p, &q) == TL_OK && p == 0.5);
  EXPECT(tl_strategy_next_post(copy, rng, &p2, &q2) == TL_OK && p2 == p);
  EXPECT(tl_strategy_next_post(fbp, rng, &p, &q) == TL_ERR_CONTRACT);

  tl_strategy* sbl = NULL;
  EXPECT(tl_strategy_create("{\"family\": \"scouting_blindits\"}", 10000, NULL, &sbl) == TL_OK);
  EXPECT(tl_strategy_next_post(sbl, rng, &p, &q) == TL_OK && p <= q);
  EXPECT(tl_strategy_observe_trade_bit(sbl, 1) == TL_OK);

  tl_strategy* median = NULL;
  EXPECT(tl_strategy_create("median_mechanism", 10, NULL, &median) == TL_ERR_CONFIG);
  EXPECT(tl_strategy_create("median_mechanism", 10, env, &median) == TL_OK);
  EXPECT(tl_strategy_next_post(median, rng, &p, &q) == TL_OK);
  EXPECT(tl_strategy_observe_none(median) == TL_OK);

  int failed = -1;
  lines_seen = 0;
  EXPECT(tl_verify("decomposition", count_lines, &lines_seen, &failed) == TL_OK);
  EXPECT(failed == 0 && lines_seen == 1);
  int listed = 0;
  EXPECT(tl_verify_list(count_lines, &listed) == TL_OK && listed >= 8);

  int curve = 0;
  EXPECT(tl_plotdata_curve("uniform_iid", 11, count_lines, &curve) == TL_OK && curve == 12);
  int table = 0;
  const uint64_t horizons[2] = {1000, 10000};
  EXPECT(tl_bounds_table(horizons, 2, 1.0, count_lines, &table) == TL_OK && table >= 3);
  EXPECT(tl_plotdata_summary("/nonexistent.csv", count_lines, &table) != TL_OK);

  tl_strategy_destroy(median);
  tl_strategy_destroy(sbl);
  tl_strategy_destroy(copy);
  tl_strategy_destroy(fbp);
  tl_strategy_destroy(NULL);
  tl_rng_destroy(rng);
  tl_env_destroy(env);

  if (failures == 0) printf("capi: all expectations met\n");
  return failures == 0 ? 0 : 1;
}

/*
 * Copyright 2026 The ddos-embed Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libddos: graph node embeddings learned by separating the
 * distributions of decoded similarities of linked and unlinked node pairs,
 * plus the link-prediction evaluation used to score them.
 *
 * All objects are opaque handles created by ddos_*_create/load/train calls
 * and released with the matching *_destroy. Functions returning ddos_status
 * report failures through the code; ddos_last_error() then holds a message
 * for the calling thread. Handles are immutable after creation and may be
 * shared across threads.
 */

#ifndef DDOS_DDOS_H_
#define DDOS_DDOS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(DDOS_BUILDING_LIBRARY)
#define DDOS_API __attribute__((visibility("default")))
#else
#define DDOS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ddos_status {
  DDOS_OK = 0,
  DDOS_ERR_INVALID_ARGUMENT = 1,
  DDOS_ERR_PARSE = 2,
  DDOS_ERR_IO = 3,
  /* Non-finite loss/gradient during training. */
  DDOS_ERR_NUMERICAL = 4,
  /* Not enough candidate pairs for a sampling request. */
  DDOS_ERR_INFEASIBLE = 5,
  DDOS_ERR_OUT_OF_RANGE = 6,
  DDOS_ERR_INTERNAL = 7
} ddos_status;

typedef enum ddos_encoder {
  DDOS_ENCODER_LOOKUP = 0,
  DDOS_ENCODER_LINEAR = 1
} ddos_encoder;

/* Pair representation fed to the link-prediction classifier. */
typedef enum ddos_pair_features {
  DDOS_PAIR_CONCAT = 0,
  DDOS_PAIR_HADAMARD = 1
} ddos_pair_features;

typedef struct ddos_graph ddos_graph;
typedef struct ddos_model ddos_model;
typedef struct ddos_eval ddos_eval;

typedef struct ddos_train_config {
  int32_t dim;
  int32_t num_bins;
  ddos_encoder encoder;
  /* 1: S = A, 2: S = A^2 with zero diagonal. */
  int32_t similarity_order;
  int32_t epochs;
  double learning_rate;
  double neg_ratio;
  int32_t pos_batch;
  uint64_t seed;
  int32_t freeze_intercept;
  double init_scale;
} ddos_train_config;

#define DDOS_GRADCHECK_MAX_BIN_COUNTS 8

typedef struct ddos_gradcheck_options {
  uint32_t num_nodes;
  int32_t dim;
  int32_t bin_counts[DDOS_GRADCHECK_MAX_BIN_COUNTS];
  size_t num_bin_counts;
  int32_t configurations;
  double step;
  uint64_t seed;
  double margin;
  /* Negative control: compare against the negated analytic gradient. */
  int32_t flip_sign;
} ddos_gradcheck_options;

typedef struct ddos_gradcheck_report {
  double max_relative_error;
  double tolerance;
  int32_t passed;
  int32_t configurations;
  int32_t rejected;
  int32_t worst_configuration;
  int32_t worst_bins;
  ddos_encoder worst_encoder;
  char worst_coordinate[32];
  double worst_analytic;
  double worst_numeric;
} ddos_gradcheck_report;

DDOS_API const char* ddos_version(void);
/* Message of the last failed call on this thread ("" if none). */
DDOS_API const char* ddos_last_error(void);
DDOS_API const char* ddos_status_string(ddos_status status);

/* ---- graphs ---------------------------------------------------------- */

/* Edge-list file: two node ids per line, '#' comments, CRLF accepted.
 * Self-loops and duplicate pairs are dropped; the counts are optional
 * outputs (pass NULL to ignore). */
DDOS_API ddos_status ddos_graph_load_file(const char* path, ddos_graph** out,
                                          size_t* self_loops_dropped,
                                          size_t* duplicates_dropped);
/* `endpoints` holds 2 * num_edges node ids. */
DDOS_API ddos_status ddos_graph_from_edges(uint32_t num_nodes,
                                           const uint32_t* endpoints,
                                           size_t num_edges, ddos_graph** out);
DDOS_API void ddos_graph_destroy(ddos_graph* graph);
DDOS_API uint32_t ddos_graph_num_nodes(const ddos_graph* graph);
DDOS_API size_t ddos_graph_num_edges(const ddos_graph* graph);
/* Off-diagonal nonzeros of A^2, without materializing it. */
DDOS_API ddos_status ddos_graph_second_order_nonzeros(const ddos_graph* graph,
                                                      size_t* out);

/* ---- configuration --------------------------------------------------- */

DDOS_API void ddos_train_config_default(ddos_train_config* cfg);
/* Overlays `key = value` lines from a file onto *cfg. */
DDOS_API ddos_status ddos_train_config_load(const char* path,
                                            ddos_train_config* cfg);
DDOS_API ddos_status ddos_train_config_set(ddos_train_config* cfg,
                                           const char* key, const char* value);
DDOS_API ddos_status ddos_train_config_validate(const ddos_train_config* cfg);

/* ---- training -------------------------------------------------------- */

DDOS_API ddos_status ddos_train(const ddos_graph* graph,
                                const ddos_train_config* cfg,
                                ddos_model** out);
DDOS_API void ddos_model_destroy(ddos_model* model);
DDOS_API uint32_t ddos_model_num_nodes(const ddos_model* model);
DDOS_API int32_t ddos_model_dim(const ddos_model* model);
/* Copies the d coordinates of `node` into out[0..capacity). */
DDOS_API ddos_status ddos_model_embedding(const ddos_model* model,
                                          uint32_t node, double* out,
                                          size_t capacity);
DDOS_API ddos_status ddos_model_write_embeddings(const ddos_model* model,
                                                 const char* path);
DDOS_API size_t ddos_model_curve_length(const ddos_model* model);
DDOS_API ddos_status ddos_model_curve(const ddos_model* model, int64_t* steps,
                                      double* losses, size_t capacity);
/* CSV "step,loss". */
DDOS_API ddos_status ddos_model_write_curve(const ddos_model* model,
                                            const char* path);
/* Mean decoded similarity of positive pairs minus that of zero-similarity
 * pairs, on the graph the model was trained on. */
DDOS_API ddos_status ddos_model_similarity_gap(const ddos_model* model,
                                               int32_t similarity_order,
                                               size_t sample_size,
                                               uint64_t seed, double* out);

/* ---- link prediction ------------------------------------------------- */

/* Splits the edges in half with `eval_seed`, trains on one half and reports
 * the ROC-AUC of a logistic regression on the other. */
DDOS_API ddos_status ddos_link_prediction(const ddos_graph* graph,
                                          const ddos_train_config* cfg,
                                          ddos_pair_features features,
                                          uint64_t eval_seed, ddos_eval** out);
DDOS_API void ddos_eval_destroy(ddos_eval* eval);
DDOS_API double ddos_eval_auc(const ddos_eval* eval);
DDOS_API double ddos_eval_train_auc(const ddos_eval* eval);
DDOS_API double ddos_eval_wall_seconds(const ddos_eval* eval);
DDOS_API size_t ddos_eval_train_edges(const ddos_eval* eval);
DDOS_API size_t ddos_eval_test_edges(const ddos_eval* eval);
DDOS_API int32_t ddos_eval_logreg_converged(const ddos_eval* eval);
DDOS_API size_t ddos_eval_curve_length(const ddos_eval* eval);
DDOS_API ddos_status ddos_eval_curve(const ddos_eval* eval, int64_t* steps,
                                     double* losses, size_t capacity);
DDOS_API ddos_status ddos_eval_write_curve(const ddos_eval* eval,
                                           const char* path);

/* ---- diagnostics ----------------------------------------------------- */

DDOS_API void ddos_gradcheck_options_default(ddos_gradcheck_options* options);
DDOS_API ddos_status ddos_gradcheck(const ddos_gradcheck_options* options,
                                    ddos_gradcheck_report* report);
/* labels are 0 or 1; both classes must be present. */
DDOS_API ddos_status ddos_roc_auc(const double* scores, const int32_t* labels,
                                  size_t count, double* out);

#ifdef __cplusplus
}
#endif

#endif /* DDOS_DDOS_H_ */

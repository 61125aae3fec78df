// Copyright 2026 The ddos-embed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exercises the shared library through its public header only.

#include "ddos/ddos.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace {

std::vector<uint32_t> TwoCliqueEndpoints() {
  std::vector<uint32_t> out;
  for (uint32_t c = 0; c < 2; ++c) {
    for (uint32_t i = 0; i < 5; ++i) {
      for (uint32_t j = i + 1; j < 5; ++j) {
        out.push_back(5 * c + i);
        out.push_back(5 * c + j);
      }
    }
  }
  return out;
}

ddos_graph* TwoCliques() {
  const std::vector<uint32_t> ends = TwoCliqueEndpoints();
  ddos_graph* g = nullptr;
  EXPECT_EQ(ddos_graph_from_edges(10, ends.data(), ends.size() / 2, &g), DDOS_OK);
  return g;
}

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("ddos_capi_" + std::to_string(::getpid()) + "_" + name);
}

TEST(CApi, VersionAndStatusStrings) {
  EXPECT_STRNE(ddos_version(), "");
  EXPECT_STRNE(ddos_status_string(DDOS_ERR_PARSE), "");
  EXPECT_STRNE(ddos_status_string(DDOS_OK), ddos_status_string(DDOS_ERR_IO));
}

TEST(CApi, GraphFromEdges) {
  ddos_graph* g = TwoCliques();
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(ddos_graph_num_nodes(g), 10u);
  EXPECT_EQ(ddos_graph_num_edges(g), 20u);
  size_t nnz = 0;
  EXPECT_EQ(ddos_graph_second_order_nonzeros(g, &nnz), DDOS_OK);
  EXPECT_EQ(nnz, 40u);
  ddos_graph_destroy(g);

  const uint32_t loop[] = {1, 1};
  ddos_graph* bad = nullptr;
  EXPECT_EQ(ddos_graph_from_edges(3, loop, 1, &bad), DDOS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(bad, nullptr);
  EXPECT_STRNE(ddos_last_error(), "");
}

TEST(CApi, LoadFileReportsDrops) {
  const auto path = TempPath("edges.txt");
  {
    std::ofstream out(path);
    out << "# demo\n0 1\n1 0\n2 2\n1 2\n";
  }
  ddos_graph* g = nullptr;
  size_t loops = 9;
  size_t dups = 9;
  ASSERT_EQ(ddos_graph_load_file(path.c_str(), &g, &loops, &dups), DDOS_OK);
  EXPECT_EQ(loops, 1u);
  EXPECT_EQ(dups, 1u);
  EXPECT_EQ(ddos_graph_num_edges(g), 2u);
  ddos_graph_destroy(g);
  std::filesystem::remove(path);

  EXPECT_EQ(ddos_graph_load_file("/nonexistent/x.edges", &g, nullptr, nullptr), DDOS_ERR_IO);
  EXPECT_NE(std::string(ddos_last_error()).find("/nonexistent/x.edges"), std::string::npos);
}

TEST(CApi, ConfigSetValidateLoad) {
  ddos_train_config cfg;
  ddos_train_config_default(&cfg);
  EXPECT_EQ(cfg.dim, 8);
  EXPECT_EQ(cfg.num_bins, 64);
  EXPECT_EQ(ddos_train_config_set(&cfg, "d", "3"), DDOS_OK);
  EXPECT_EQ(cfg.dim, 3);
  EXPECT_EQ(ddos_train_config_set(&cfg, "d", "three"), DDOS_ERR_PARSE);
  EXPECT_EQ(ddos_train_config_set(&cfg, "bogus", "1"), DDOS_ERR_PARSE);
  EXPECT_EQ(ddos_train_config_validate(&cfg), DDOS_OK);
  cfg.epochs = 0;
  EXPECT_EQ(ddos_train_config_validate(&cfg), DDOS_ERR_INVALID_ARGUMENT);

  const auto path = TempPath("cfg.txt");
  {
    std::ofstream out(path);
    out << "nb = 8\nencoder = lookup\n";
  }
  ddos_train_config_default(&cfg);
  EXPECT_EQ(ddos_train_config_load(path.c_str(), &cfg), DDOS_OK);
  EXPECT_EQ(cfg.num_bins, 8);
  EXPECT_EQ(cfg.encoder, DDOS_ENCODER_LOOKUP);
  std::filesystem::remove(path);
  EXPECT_EQ(ddos_train_config_load(path.c_str(), &cfg), DDOS_ERR_IO);
}

TEST(CApi, TrainSeparatesTwoCliques) {
  ddos_graph* g = TwoCliques();
  ddos_train_config cfg;
  ddos_train_config_default(&cfg);
  cfg.dim = 2;
  ddos_model* m = nullptr;
  ASSERT_EQ(ddos_train(g, &cfg, &m), DDOS_OK);
  EXPECT_EQ(ddos_model_num_nodes(m), 10u);
  EXPECT_EQ(ddos_model_dim(m), 2);
  double gap = 0.0;
  EXPECT_EQ(ddos_model_similarity_gap(m, 1, 500, 0, &gap), DDOS_OK);
  EXPECT_GT(gap, 0.5);

  double e[2];
  EXPECT_EQ(ddos_model_embedding(m, 9, e, 2), DDOS_OK);
  EXPECT_TRUE(std::isfinite(e[0]) && std::isfinite(e[1]));
  EXPECT_EQ(ddos_model_embedding(m, 10, e, 2), DDOS_ERR_OUT_OF_RANGE);
  EXPECT_EQ(ddos_model_embedding(m, 0, e, 1), DDOS_ERR_INVALID_ARGUMENT);

  const size_t len = ddos_model_curve_length(m);
  EXPECT_EQ(len, 200u);
  std::vector<int64_t> steps(len);
  std::vector<double> losses(len);
  EXPECT_EQ(ddos_model_curve(m, steps.data(), losses.data(), len), DDOS_OK);
  EXPECT_EQ(steps.back(), 199);
  EXPECT_GE(losses.back(), -64.0);

  const auto emb = TempPath("emb.txt");
  EXPECT_EQ(ddos_model_write_embeddings(m, emb.c_str()), DDOS_OK);
  std::ifstream in(emb);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "10 2");
  std::filesystem::remove(emb);

  ddos_model_destroy(m);
  ddos_graph_destroy(g);
}

TEST(CApi, NumericalFailureStatus) {
  ddos_graph* g = TwoCliques();
  ddos_train_config cfg;
  ddos_train_config_default(&cfg);
  cfg.learning_rate = 1e308;
  cfg.init_scale = 1.0;
  ddos_model* m = nullptr;
  EXPECT_EQ(ddos_train(g, &cfg, &m), DDOS_ERR_NUMERICAL);
  EXPECT_EQ(m, nullptr);
  EXPECT_NE(std::string(ddos_last_error()).find("step"), std::string::npos);
  ddos_graph_destroy(g);
}

TEST(CApi, LinkPrediction) {
  ddos_graph* g = TwoCliques();
  ddos_train_config cfg;
  ddos_train_config_default(&cfg);
  cfg.dim = 2;
  cfg.epochs = 20;
  ddos_eval* a = nullptr;
  ddos_eval* b = nullptr;
  ASSERT_EQ(ddos_link_prediction(g, &cfg, DDOS_PAIR_CONCAT, 1, &a), DDOS_OK);
  ASSERT_EQ(ddos_link_prediction(g, &cfg, DDOS_PAIR_CONCAT, 1, &b), DDOS_OK);
  EXPECT_EQ(ddos_eval_auc(a), ddos_eval_auc(b));
  EXPECT_GE(ddos_eval_auc(a), 0.0);
  EXPECT_LE(ddos_eval_auc(a), 1.0);
  EXPECT_EQ(ddos_eval_train_edges(a) + ddos_eval_test_edges(a), 20u);
  EXPECT_EQ(ddos_eval_curve_length(a), 20u);
  ddos_eval_destroy(a);
  ddos_eval_destroy(b);

  ddos_eval* c = nullptr;
  EXPECT_EQ(ddos_link_prediction(g, &cfg, static_cast<ddos_pair_features>(7), 1, &c),
            DDOS_ERR_INVALID_ARGUMENT);
  ddos_graph_destroy(g);
}

TEST(CApi, GradCheckAndNegativeControl) {
  ddos_gradcheck_options opt;
  ddos_gradcheck_options_default(&opt);
  opt.configurations = 12;
  ddos_gradcheck_report report;
  ASSERT_EQ(ddos_gradcheck(&opt, &report), DDOS_OK);
  EXPECT_TRUE(report.passed);
  EXPECT_LT(report.max_relative_error, report.tolerance);
  EXPECT_EQ(report.configurations, 12);

  opt.flip_sign = 1;
  ASSERT_EQ(ddos_gradcheck(&opt, &report), DDOS_OK);
  EXPECT_FALSE(report.passed);
  EXPECT_STRNE(report.worst_coordinate, "");
}

TEST(CApi, RocAuc) {
  const double scores[] = {0.9, 0.1, 0.5, 0.5};
  const int32_t labels[] = {1, 0, 1, 0};
  double auc = 0.0;
  ASSERT_EQ(ddos_roc_auc(scores, labels, 4, &auc), DDOS_OK);
  EXPECT_EQ(auc, 0.875);
  const int32_t one_class[] = {1, 1, 1, 1};
  EXPECT_EQ(ddos_roc_auc(scores, one_class, 4, &auc), DDOS_ERR_INVALID_ARGUMENT);
}

TEST(CApi, NullArguments) {
  EXPECT_EQ(ddos_graph_from_edges(3, nullptr, 1, nullptr), DDOS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ddos_train(nullptr, nullptr, nullptr), DDOS_ERR_INVALID_ARGUMENT);
  ddos_graph_destroy(nullptr);
  ddos_model_destroy(nullptr);
  ddos_eval_destroy(nullptr);
}

}  // namespace

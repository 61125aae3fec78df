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

#include "config.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "errors.hpp"

namespace ddos {
namespace {

TrainConfig Load(const std::string& text, TrainConfig base = {}) {
  std::istringstream in(text);
  return LoadConfig(in, base);
}

std::string ErrorOf(const std::string& text) {
  try {
    Load(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(LoadConfig, SetsDimension) { EXPECT_EQ(Load("d = 16\n").dim, 16); }

TEST(LoadConfig, TypeMismatchNamesKeyAndLine) {
  const std::string msg = ErrorOf("# header\nnb = 8\nd = sixteen\n");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'d'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("sixteen"), std::string::npos) << msg;
}

TEST(LoadConfig, EmptyGivesDefaults) {
  const TrainConfig cfg = Load("");
  const TrainConfig defaults;
  EXPECT_EQ(cfg.dim, defaults.dim);
  EXPECT_EQ(cfg.num_bins, 64);
  EXPECT_EQ(cfg.encoder, EncoderKind::kLinear);
  EXPECT_EQ(cfg.similarity_order, 1);
  EXPECT_EQ(cfg.epochs, 200);
  EXPECT_EQ(cfg.learning_rate, defaults.learning_rate);
  EXPECT_EQ(cfg.neg_ratio, 5.0);
  EXPECT_EQ(cfg.pos_batch, 1024);
  EXPECT_EQ(cfg.seed, 0u);
  EXPECT_FALSE(cfg.freeze_intercept);
  EXPECT_EQ(cfg.init_scale, defaults.init_scale);
}

TEST(LoadConfig, EveryKey) {
  const TrainConfig cfg = Load(
      "d=4\nnb=16\nencoder=lookup\norder=2\nepochs=3\nlr=0.25\n"
      "neg-ratio=2.5\npos_batch=7\nseed=18446744073709551615\n"
      "freeze_intercept=true\ninit-scale=0.5\n");
  EXPECT_EQ(cfg.dim, 4);
  EXPECT_EQ(cfg.num_bins, 16);
  EXPECT_EQ(cfg.encoder, EncoderKind::kLookup);
  EXPECT_EQ(cfg.similarity_order, 2);
  EXPECT_EQ(cfg.epochs, 3);
  EXPECT_EQ(cfg.learning_rate, 0.25);
  EXPECT_EQ(cfg.neg_ratio, 2.5);
  EXPECT_EQ(cfg.pos_batch, 7);
  EXPECT_EQ(cfg.seed, 18446744073709551615u);
  EXPECT_TRUE(cfg.freeze_intercept);
  EXPECT_EQ(cfg.init_scale, 0.5);
}

TEST(LoadConfig, CommentsBlanksAndCrlf) {
  const TrainConfig cfg = Load("\n  # comment\r\nd = 12  # trailing\r\n\n");
  EXPECT_EQ(cfg.dim, 12);
}

TEST(LoadConfig, KeepsBaseForAbsentKeys) {
  TrainConfig base;
  base.epochs = 9;
  const TrainConfig cfg = Load("d = 3", base);
  EXPECT_EQ(cfg.epochs, 9);
  EXPECT_EQ(cfg.dim, 3);
}

TEST(LoadConfig, Rejections) {
  EXPECT_NE(ErrorOf("depth = 3").find("unknown key 'depth'"), std::string::npos);
  EXPECT_NE(ErrorOf("d 3").find("line 1"), std::string::npos);
  EXPECT_NE(ErrorOf("= 3").find("missing key"), std::string::npos);
  EXPECT_NE(ErrorOf("encoder = mlp").find("encoder"), std::string::npos);
  EXPECT_NE(ErrorOf("freeze_intercept = maybe").find("freeze_intercept"),
            std::string::npos);
  EXPECT_NE(ErrorOf("d = 3.5").find("'d'"), std::string::npos);
  EXPECT_NE(ErrorOf("seed = -1").find("'seed'"), std::string::npos);
  EXPECT_NE(ErrorOf("lr =").find("'lr'"), std::string::npos);
}

TEST(LoadConfigFile, MissingFileIsIoError) {
  EXPECT_THROW(LoadConfigFile("/nonexistent/ddos.cfg"), IoError);
}

}  // namespace
}  // namespace ddos

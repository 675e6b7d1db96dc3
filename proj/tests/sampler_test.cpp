// Copyright 2026 The worrywords-engine Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "worrywords/sampler.hpp"

namespace ww = worrywords;
namespace sm = worrywords::sampler;

namespace {

sm::LabeledCorpus corpus() {
  sm::LabeledCorpus c;
  for (int i = 0; i < 20; ++i) c.positive.push_back(ww::arcs::make_post("worried " + std::to_string(i), 1.0));
  for (int i = 0; i < 30; ++i) c.negative.push_back(ww::arcs::make_post("calm " + std::to_string(i), 0.0));
  return c;
}

double positive_share(const std::vector<ww::arcs::Post>& posts) {
  double s = 0;
  for (const auto& p : posts) s += *p.gold_label;
  return s / static_cast<double>(posts.size());
}

}  // namespace

TEST(Slope, Proportion) {
  EXPECT_DOUBLE_EQ(sm::slope_to_proportion(90), 1.0);
  EXPECT_DOUBLE_EQ(sm::slope_to_proportion(-90), 0.0);
  EXPECT_DOUBLE_EQ(sm::slope_to_proportion(0), 0.5);
  EXPECT_DOUBLE_EQ(sm::slope_to_proportion(45), 0.75);
  EXPECT_THROW(sm::slope_to_proportion(90.5), ww::RangeError);
  EXPECT_THROW(sm::slope_to_proportion(-91), ww::RangeError);
}

TEST(Burst, ExtremeSlopesAreSingleLabel) {
  const auto c = corpus();
  ww::Rng rng(3);
  const auto up = sm::sample_burst(c, {90, 300}, rng);
  const auto down = sm::sample_burst(c, {-90, 300}, rng);
  ASSERT_EQ(up.size(), 300u);
  EXPECT_DOUBLE_EQ(positive_share(up), 1.0);
  EXPECT_DOUBLE_EQ(positive_share(down), 0.0);
  for (const auto& p : up) EXPECT_EQ(p.raw_text.rfind("worried", 0), 0u);
}

TEST(Burst, FlatSlopeIsBalanced) {
  ww::Rng rng(11);
  const auto posts = sm::sample_burst(corpus(), {0, 10000}, rng);
  EXPECT_NEAR(positive_share(posts), 0.5, 0.02);
}

TEST(Burst, ExactMixingHitsProportion) {
  ww::Rng rng(8);
  for (double slope : {-60.0, 0.0, 33.0, 89.0}) {
    const auto posts = sm::sample_burst(corpus(), {slope, 237}, rng, sm::Mixing::exact);
    const double expected = std::round(sm::slope_to_proportion(slope) * 237) / 237;
    EXPECT_DOUBLE_EQ(positive_share(posts), expected) << slope;
  }
}

TEST(Burst, DrawsWithReplacement) {
  ww::Rng rng(5);
  const auto draws = sm::sample_burst_draws(corpus(), {90, 500}, rng);
  std::vector<int> seen(20, 0);
  for (const auto& d : draws) ++seen[d.index];
  EXPECT_GT(*std::max_element(seen.begin(), seen.end()), 1);
}

TEST(Corpus, FromStream) {
  ww::arcs::TextStream s{"c", {}};
  s.posts.push_back(ww::arcs::make_post("a", 1.0));
  s.posts.push_back(ww::arcs::make_post("b", 0.0));
  const auto c = sm::LabeledCorpus::from_stream(s);
  EXPECT_EQ(c.positive.size(), 1u);
  EXPECT_EQ(c.negative.size(), 1u);
  s.posts.push_back(ww::arcs::make_post("c", 0.5));
  EXPECT_THROW(sm::LabeledCorpus::from_stream(s), ww::ValidationError);
  ww::arcs::TextStream only_pos{"c", {ww::arcs::make_post("a", 1.0)}};
  EXPECT_THROW(sm::LabeledCorpus::from_stream(only_pos), ww::ValidationError);
}

TEST(Config, Validation) {
  sm::SamplerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.burst_min = 600;
  EXPECT_THROW(cfg.validate(), ww::ValidationError);
  cfg = {};
  cfg.burst_min = 0;
  EXPECT_THROW(cfg.validate(), ww::ValidationError);
  cfg = {};
  cfg.total_length = 10;
  EXPECT_THROW(cfg.validate(), ww::ValidationError);
  cfg = {};
  cfg.slope_max = 120;
  EXPECT_THROW(cfg.validate(), ww::ValidationError);
}

TEST(Stream, ExactLengthAndBurstRanges) {
  const auto c = corpus();
  sm::SamplerConfig cfg;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ww::Rng rng(seed);
    const auto g = sm::generate_stream(c, cfg, rng);
    ASSERT_EQ(g.stream.posts.size(), 10000u);
    std::size_t total = 0;
    for (std::size_t i = 0; i < g.bursts.size(); ++i) {
      const auto& b = g.bursts[i];
      total += b.length;
      EXPECT_GE(b.slope, -90.0);
      EXPECT_LT(b.slope, 90.0);
      EXPECT_LE(b.length, 500u);
      if (i + 1 < g.bursts.size()) {
        EXPECT_GE(b.length, 50u);
      }
    }
    EXPECT_EQ(total, 10000u);
  }
}

TEST(Stream, FixedBurstLength) {
  sm::SamplerConfig cfg;
  cfg.total_length = 200;
  cfg.burst_min = cfg.burst_max = 100;
  ww::Rng rng(1);
  const auto g = sm::generate_stream(corpus(), cfg, rng);
  ASSERT_EQ(g.bursts.size(), 2u);
  EXPECT_EQ(g.bursts[0].length, 100u);
  EXPECT_EQ(g.bursts[1].length, 100u);
}

TEST(Stream, TruncatesFinalBurst) {
  sm::SamplerConfig cfg;
  cfg.total_length = 250;
  cfg.burst_min = cfg.burst_max = 100;
  ww::Rng rng(1);
  const auto g = sm::generate_stream(corpus(), cfg, rng);
  ASSERT_EQ(g.bursts.size(), 3u);
  EXPECT_EQ(g.bursts[2].length, 50u);
}

TEST(Suite, Deterministic) {
  sm::SamplerConfig cfg;
  cfg.total_length = 2000;
  cfg.n_streams = 6;
  cfg.master_seed = 77;
  const auto c = corpus();
  const auto a = sm::generate_suite(c, cfg, 1);
  const auto b = sm::generate_suite(c, cfg, 3);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].stream.id, sm::stream_id(i));
    EXPECT_EQ(a[i].bursts, b[i].bursts);
    EXPECT_EQ(a[i].seed, b[i].seed);
    for (std::size_t j = 0; j < a[i].stream.posts.size(); ++j)
      ASSERT_EQ(a[i].stream.posts[j].raw_text, b[i].stream.posts[j].raw_text);
  }
}

TEST(Suite, SingleStreamUsesDerivedSeed) {
  sm::SamplerConfig cfg;
  cfg.total_length = 1000;
  cfg.n_streams = 1;
  cfg.master_seed = 9;
  const auto c = corpus();
  const auto suite = sm::generate_suite(c, cfg);
  ww::Rng rng(ww::derive_seed(9, 0));
  const auto direct = sm::generate_stream(c, cfg, rng);
  ASSERT_EQ(suite.size(), 1u);
  EXPECT_EQ(suite[0].seed, ww::derive_seed(9, 0));
  EXPECT_EQ(suite[0].bursts, direct.bursts);
}

TEST(Suite, DifferentSeedsDiffer) {
  sm::SamplerConfig cfg;
  cfg.total_length = 500;
  const auto c = corpus();
  for (std::uint64_t s = 0; s < 100; ++s) {
    ww::Rng a(s), b(s + 1000003);
    const auto pa = sm::plan_stream(c, cfg, a);
    const auto pb = sm::plan_stream(c, cfg, b);
    EXPECT_NE(pa.bursts[0], pb.bursts[0]) << "seed " << s;
  }
}

TEST(Suite, StreamIdsAndManifest) {
  EXPECT_EQ(sm::stream_id(7), "stream-00007");
  sm::SamplerConfig cfg;
  cfg.total_length = 100;
  cfg.burst_min = cfg.burst_max = 60;
  const auto g = sm::generate_suite_stream(corpus(), cfg, 2);
  const auto j = sm::manifest_entry(g);
  EXPECT_EQ(j["id"], "stream-00002");
  EXPECT_EQ(j["n_posts"], 100);
  EXPECT_EQ(j["bursts"].size(), 2u);
  EXPECT_EQ(j["bursts"][1]["length"], 40);
}

// Copyright 2026 The ECBA Workbench Authors
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

#include "ecba/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtest/gtest.h"
#include "ecba/rng.hpp"

namespace ecba {
namespace {

TEST(CouplingTest, InverseCdfExamples) {
  EXPECT_DOUBLE_EQ(coupling_from_uniform(0.37, 1.0), 0.37);
  EXPECT_DOUBLE_EQ(coupling_from_uniform(0.25, 2.0), 0.0625);
  EXPECT_DOUBLE_EQ(coupling_from_uniform(1.0, 8.0), 1.0);
}

TEST(CouplingTest, RejectsBadArguments) {
  EXPECT_THROW(sample_couplings(5, 2.0, 1), std::invalid_argument);
  EXPECT_THROW(sample_couplings(0, 2.0, 1), std::invalid_argument);
  EXPECT_THROW(sample_couplings(4, 0.5, 1), std::invalid_argument);
}

TEST(CouplingTest, SeedDeterminismAndRange) {
  const auto a = sample_couplings(64, 8.0, 1234);
  const auto b = sample_couplings(64, 8.0, 1234);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.couplings.size(), 63u);
  for (double j : a.couplings) {
    EXPECT_GT(j, 0.0);
    EXPECT_LE(j, 1.0);
  }
  EXPECT_NE(a.couplings, sample_couplings(64, 8.0, 1235).couplings);
}

std::vector<double> draw(double delta, int count, std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(count);
  for (int k = 0; out.size() < static_cast<std::size_t>(count); ++k) {
    const auto r = sample_couplings(1002, delta, derive_seed(seed, "ks", k));
    out.insert(out.end(), r.couplings.begin(), r.couplings.end());
  }
  out.resize(count);
  return out;
}

TEST(CouplingTest, MeanMatchesFirstMoment) {
  const int count = 1000000;
  const auto xs = draw(8.0, count, 77);
  double s = 0, s2 = 0;
  for (double x : xs) {
    s += x;
    s2 += x * x;
  }
  const double mean = s / count;
  const double sd = std::sqrt(s2 / count - mean * mean);
  EXPECT_NEAR(mean, 1.0 / 9.0, 3.0 * sd / std::sqrt(count));
}

class KolmogorovSmirnovTest : public ::testing::TestWithParam<double> {};

TEST_P(KolmogorovSmirnovTest, EmpiricalCdfMatchesPowerLaw) {
  const double delta = GetParam();
  auto xs = draw(delta, 1000000, 99);
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = std::pow(xs[i], 1.0 / delta);
    d = std::max({d, std::abs((i + 1) / n - f), std::abs(f - i / n)});
  }
  EXPECT_LT(d, 0.005) << "delta=" << delta;
}

INSTANTIATE_TEST_SUITE_P(Deltas, KolmogorovSmirnovTest, ::testing::Values(1.0, 2.0, 8.0));

TEST(RainbowTest, RungPairs) {
  const auto h = rainbow_terms({6, 1.0, 100.0});
  std::vector<SitePair> rungs;
  for (const auto& t : h.terms)
    if (t.weight == 100.0) rungs.push_back({t.i, t.j});
  EXPECT_EQ(rungs, (std::vector<SitePair>{{0, 5}, {1, 4}, {2, 3}}));
}

TEST(RainbowTest, TwoSites) {
  const auto h = rainbow_terms({2, 1.0, 100.0});
  ASSERT_EQ(h.terms.size(), 2u);
  for (const auto& t : h.terms) EXPECT_EQ(SitePair(t.i, t.j), SitePair(0, 1));
}

TEST(RainbowTest, FourSitesCounts) {
  const auto h = rainbow_terms({4, 1.0, 100.0});
  EXPECT_EQ(std::count_if(h.terms.begin(), h.terms.end(), [](auto& t) { return t.weight == 1.0; }), 3);
  EXPECT_EQ(std::count_if(h.terms.begin(), h.terms.end(), [](auto& t) { return t.weight == 100.0; }), 2);
}

TEST(ChainTest, Terms) {
  CouplingRealization r{2, 1.0, 0, {0.5}};
  auto h = chain_terms(r);
  ASSERT_EQ(h.terms.size(), 1u);
  EXPECT_EQ(h.terms[0], (HeisenbergTerm{0, 1, 0.5}));

  r = {4, 1.0, 0, {0.1, 0.9, 0.1}};
  h = chain_terms(r);
  EXPECT_EQ(h.terms, (std::vector<HeisenbergTerm>{{0, 1, 0.1}, {1, 2, 0.9}, {2, 3, 0.1}}));

  for (int n = 2; n <= 20; n += 2)
    EXPECT_EQ(chain_terms(sample_couplings(n, 2.0, n)).terms.size(), static_cast<std::size_t>(n - 1));
}

TEST(TermsTest, ValidateRejectsBadSites) {
  HamiltonianTerms h{3, {{0, 0, 1.0}}};
  EXPECT_THROW(h.validate(), std::invalid_argument);
  h.terms = {{0, 3, 1.0}};
  EXPECT_THROW(h.validate(), std::invalid_argument);
}

TEST(AccuracyTest, Examples) {
  EXPECT_NEAR(relative_accuracy(-10, -9).accuracy, 0.9, 1e-15);
  EXPECT_DOUBLE_EQ(relative_accuracy(-10, -10).accuracy, 1.0);
  EXPECT_NEAR(relative_accuracy(-10, -10.13).accuracy, 0.987, 1e-12);
  EXPECT_NEAR(relative_accuracy(-10, -10.13).ratio, 1.013, 1e-12);
  EXPECT_NEAR(relative_error(-10, -9), 0.1, 1e-15);
  EXPECT_THROW(relative_accuracy(0.0, 1.0), std::invalid_argument);
}

TEST(SerializationTest, RoundTripIsExact) {
  const auto r = sample_couplings(16, 3.5, 2024);
  EXPECT_EQ(parse_realization(format_realization(r)), r);
  std::istringstream bad("4 2.0 1\n0.5\n");
  EXPECT_THROW(read_realization(bad), std::runtime_error);
}

}  // namespace
}  // namespace ecba

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

#pragma once

// Rank statistics and error measures shared by the reliability, arc and
// lexicon-analysis code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "worrywords/errors.hpp"

namespace worrywords::stats {

/// Neumaier-compensated sum in extended precision.
class CompensatedSum {
 public:
  void add(long double x) noexcept {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  long double value() const noexcept { return sum_ + comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

/// Two equal-length finite series viewed without copying.
class PairedSeries {
 public:
  PairedSeries(std::span<const double> xs, std::span<const double> ys)
      : xs_(xs), ys_(ys) {
    if (xs.size() != ys.size())
      throw ValidationError("paired series have different lengths");
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
        throw ValidationError("paired series contain a non-finite value");
  }

  std::span<const double> xs() const noexcept { return xs_; }
  std::span<const double> ys() const noexcept { return ys_; }
  std::size_t size() const noexcept { return xs_.size(); }

 private:
  std::span<const double> xs_;
  std::span<const double> ys_;
};

inline long double mean(std::span<const double> v) {
  CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<long double>(v.size());
}

/// Fractional ranks starting at 1; tied values share their average rank.
inline std::vector<double> ranks(std::span<const double> values) {
  if (values.empty()) throw ValidationError("ranks of an empty series");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> out(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) out[order[t]] = mid;
    i = j;
  }
  return out;
}

/// Product-moment correlation. Throws DegenerateError on zero variance.
inline double pearson(const PairedSeries& p) {
  if (p.size() < 2) throw ValidationError("correlation needs at least 2 points");
  const long double mx = mean(p.xs());
  const long double my = mean(p.ys());
  CompensatedSum sxx, syy, sxy;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const long double dx = p.xs()[i] - mx;
    const long double dy = p.ys()[i] - my;
    sxx.add(dx * dx);
    syy.add(dy * dy);
    sxy.add(dx * dy);
  }
  if (sxx.value() <= 0.0L || syy.value() <= 0.0L)
    throw DegenerateError("correlation undefined: series has zero variance");
  const long double r = sxy.value() / std::sqrt(sxx.value() * syy.value());
  return static_cast<double>(std::clamp(r, -1.0L, 1.0L));
}

inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  return pearson(PairedSeries(xs, ys));
}

/// Pearson correlation of midranks.
inline double spearman(const PairedSeries& p) {
  if (p.size() < 2) throw ValidationError("correlation needs at least 2 points");
  const auto rx = ranks(p.xs());
  const auto ry = ranks(p.ys());
  return pearson(PairedSeries(rx, ry));
}

inline double spearman(std::span<const double> xs, std::span<const double> ys) {
  return spearman(PairedSeries(xs, ys));
}

inline double rmse(const PairedSeries& p) {
  if (p.size() == 0) throw ValidationError("rmse of an empty series");
  CompensatedSum s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const long double d = static_cast<long double>(p.xs()[i]) - p.ys()[i];
    s.add(d * d);
  }
  return static_cast<double>(
      std::sqrt(s.value() / static_cast<long double>(p.size())));
}

inline double rmse(std::span<const double> xs, std::span<const double> ys) {
  return rmse(PairedSeries(xs, ys));
}

}  // namespace worrywords::stats

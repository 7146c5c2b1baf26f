// Copyright 2026 The Weaklab Authors.
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

// Small dense-vector helpers. Models here are a few thousand parameters, so
// plain std::vector<double> keeps them simple to serialize and check.

#ifndef WEAKLAB_CORE_VEC_H_
#define WEAKLAB_CORE_VEC_H_

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace weaklab {

using Vec = std::vector<double>;

inline double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

// Zero when either vector has zero norm.
inline double Cosine(std::span<const double> a, std::span<const double> b) {
  double na = Norm(a), nb = Norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return Dot(a, b) / (na * nb);
}

inline double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// Numerically stable softmax, in place.
inline void SoftmaxInPlace(std::span<double> z) {
  if (z.empty()) return;
  double m = z[0];
  for (double v : z) m = std::max(m, v);
  double sum = 0.0;
  for (double &v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double &v : z) v /= sum;
}

// Row-major dense matrix.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  Vec data;

  Matrix() = default;
  Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double &operator()(size_t r, size_t c) { return data[r * cols + c]; }
  double operator()(size_t r, size_t c) const { return data[r * cols + c]; }
  std::span<double> Row(size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> Row(size_t r) const { return {data.data() + r * cols, cols}; }

  bool operator==(const Matrix &) const = default;
};

// 64-bit FNV-1a; stable across platforms, used for feature hashing and
// content deduplication.
inline uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace weaklab

#endif  // WEAKLAB_CORE_VEC_H_

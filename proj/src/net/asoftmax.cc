// src/net/asoftmax.cc

// Copyright 2026  The subspoof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "subspoof/net/asoftmax.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace subspoof::net {

namespace {

constexpr double kNormFloor = 1e-12;

// Unit rows of the class-weight matrix and their original norms.
template <typename T>
void NormalizeRows(const Tensor4<T> &weight, std::vector<double> *unit,
                   std::vector<double> *norms) {
  const int k = weight.n();
  const int d = weight.c() * weight.h() * weight.w();
  unit->assign(static_cast<std::size_t>(k) * d, 0.0);
  norms->assign(k, 0.0);
  for (int j = 0; j < k; ++j) {
    const T *row = weight.Sample(j);
    double sq = 0.0;
    for (int i = 0; i < d; ++i) sq += static_cast<double>(row[i]) * row[i];
    double norm = std::max(std::sqrt(sq), kNormFloor);
    (*norms)[j] = norm;
    for (int i = 0; i < d; ++i) (*unit)[static_cast<std::size_t>(j) * d + i] = row[i] / norm;
  }
}

}  // namespace

double AngularMargin(double c, int margin, double *d_dc) {
  c = std::clamp(c, -1.0, 1.0);
  const double theta = std::acos(c);
  int k = static_cast<int>(std::floor(margin * theta / std::numbers::pi));
  k = std::clamp(k, 0, margin - 1);
  // Chebyshev recurrences: T_m(cos t) = cos(m t), T_m' = m U_{m-1}.
  double t_prev = 1.0, t_cur = c;
  double u_prev = 1.0, u_cur = 2.0 * c;
  for (int i = 1; i < margin; ++i) {
    double t_next = 2.0 * c * t_cur - t_prev;
    t_prev = t_cur;
    t_cur = t_next;
  }
  double u_m_minus_1 = 1.0;
  if (margin >= 2) {
    for (int i = 1; i < margin - 1; ++i) {
      double u_next = 2.0 * c * u_cur - u_prev;
      u_prev = u_cur;
      u_cur = u_next;
    }
    u_m_minus_1 = u_cur;
  }
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  if (d_dc != nullptr) *d_dc = sign * margin * u_m_minus_1;
  return sign * t_cur - 2.0 * k;
}

template <typename T>
std::vector<double> CosineLogits(const Tensor4<T> &embedding, const Tensor4<T> &weight) {
  const int d = embedding.c() * embedding.h() * embedding.w();
  if (weight.c() * weight.h() * weight.w() != d)
    Fail("A-Softmax head expects embeddings of size ", weight.c(), ", got ", d);
  std::vector<double> unit, norms;
  NormalizeRows(weight, &unit, &norms);
  const int k = weight.n();
  std::vector<double> logits(static_cast<std::size_t>(embedding.n()) * k);
  for (int n = 0; n < embedding.n(); ++n) {
    const T *x = embedding.Sample(n);
    for (int j = 0; j < k; ++j) {
      const double *u = unit.data() + static_cast<std::size_t>(j) * d;
      double acc = 0.0;
      for (int i = 0; i < d; ++i) acc += u[i] * x[i];
      logits[static_cast<std::size_t>(n) * k + j] = acc;
    }
  }
  return logits;
}

double SoftmaxCrossEntropy(std::span<const double> logits, std::span<const int> labels,
                           int num_classes) {
  const std::size_t n = labels.size();
  if (logits.size() != n * num_classes) Fail("cross-entropy: logits/labels size mismatch");
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double *row = logits.data() + s * num_classes;
    if (labels[s] < 0 || labels[s] >= num_classes)
      Fail("label ", labels[s], " out of range for ", num_classes, " classes");
    double mx = *std::max_element(row, row + num_classes);
    double z = 0.0;
    for (int j = 0; j < num_classes; ++j) z += std::exp(row[j] - mx);
    total += mx + std::log(z) - row[labels[s]];
  }
  return total / static_cast<double>(n);
}

template <typename T>
ASoftmaxResult<T> ASoftmaxLoss(const Tensor4<T> &embedding, std::span<const int> labels,
                               const Tensor4<T> &weight, int margin, double lambda) {
  if (margin < 1) Fail("A-Softmax margin must be >= 1, got ", margin);
  if (lambda < 0.0) Fail("A-Softmax lambda must be >= 0");
  const int batch = embedding.n();
  const int d = embedding.c() * embedding.h() * embedding.w();
  const int k = weight.n();
  if (static_cast<int>(labels.size()) != batch)
    Fail("A-Softmax: ", labels.size(), " labels for a batch of ", batch);
  if (weight.c() * weight.h() * weight.w() != d)
    Fail("A-Softmax head expects embeddings of size ", weight.c(), ", got ", d);

  std::vector<double> unit, norms;
  NormalizeRows(weight, &unit, &norms);

  ASoftmaxResult<T> res;
  res.d_embedding = ZerosLike(embedding);
  res.d_weight = ZerosLike(weight);
  std::vector<double> d_unit(unit.size(), 0.0);
  std::vector<double> f(k), cosv(k);
  const double inv_batch = 1.0 / batch;

  for (int n = 0; n < batch; ++n) {
    const int y = labels[n];
    if (y < 0 || y >= k) Fail("label ", y, " out of range for ", k, " classes");
    const T *x = embedding.Sample(n);
    double sq = 0.0;
    for (int i = 0; i < d; ++i) sq += static_cast<double>(x[i]) * x[i];
    const double r = std::max(std::sqrt(sq), kNormFloor);

    for (int j = 0; j < k; ++j) {
      const double *u = unit.data() + static_cast<std::size_t>(j) * d;
      double dot = 0.0;
      for (int i = 0; i < d; ++i) dot += u[i] * x[i];
      f[j] = dot;
      cosv[j] = dot / r;
    }
    double dpsi = 0.0;
    const double c = std::clamp(cosv[y], -1.0, 1.0);
    const double psi = AngularMargin(c, margin, &dpsi);
    const double h = (lambda * c + psi) / (1.0 + lambda);
    const double dh = (lambda + dpsi) / (1.0 + lambda);
    f[y] = r * h;

    const double mx = *std::max_element(f.begin(), f.end());
    double z = 0.0;
    for (int j = 0; j < k; ++j) z += std::exp(f[j] - mx);
    res.loss += (mx + std::log(z) - f[y]) * inv_batch;

    T *dx = res.d_embedding.Sample(n);
    for (int j = 0; j < k; ++j) {
      const double g = (std::exp(f[j] - mx) / z - (j == y ? 1.0 : 0.0)) * inv_batch;
      const double *u = unit.data() + static_cast<std::size_t>(j) * d;
      double *du = d_unit.data() + static_cast<std::size_t>(j) * d;
      if (j != y) {
        for (int i = 0; i < d; ++i) {
          dx[i] += static_cast<T>(g * u[i]);
          du[i] += g * x[i];
        }
      } else {
        // f_y = r h(c):  d/dx = h x / r + h' (u - c x / r);  d/du = h' x.
        for (int i = 0; i < d; ++i) {
          double xi = x[i];
          dx[i] += static_cast<T>(g * (h * xi / r + dh * (u[i] - c * xi / r)));
          du[i] += g * dh * xi;
        }
      }
    }
  }

  // Through u = W / |W|:  dW = (du - u (u . du)) / |W|.
  for (int j = 0; j < k; ++j) {
    const double *u = unit.data() + static_cast<std::size_t>(j) * d;
    const double *du = d_unit.data() + static_cast<std::size_t>(j) * d;
    double proj = 0.0;
    for (int i = 0; i < d; ++i) proj += u[i] * du[i];
    T *dw = res.d_weight.Sample(j);
    for (int i = 0; i < d; ++i) dw[i] = static_cast<T>((du[i] - u[i] * proj) / norms[j]);
  }
  return res;
}

template std::vector<double> CosineLogits<float>(const Tensor4<float> &,
                                                 const Tensor4<float> &);
template std::vector<double> CosineLogits<double>(const Tensor4<double> &,
                                                  const Tensor4<double> &);
template ASoftmaxResult<float> ASoftmaxLoss<float>(const Tensor4<float> &,
                                                   std::span<const int>,
                                                   const Tensor4<float> &, int, double);
template ASoftmaxResult<double> ASoftmaxLoss<double>(const Tensor4<double> &,
                                                     std::span<const int>,
                                                     const Tensor4<double> &, int, double);

}  // namespace subspoof::net

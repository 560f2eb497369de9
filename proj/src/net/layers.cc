// src/net/layers.cc

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

#include "subspoof/net/layers.h"

#include <Eigen/Core>
#include <cmath>
#include <limits>

namespace subspoof::net {

namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void RequireCached(bool cached, const char *layer) {
  if (!cached) Fail(layer, ": Backward called without a preceding kTrain Forward");
}

}  // namespace

template <typename T>
void KaimingNormal(Tensor4<T> *t, int fan_in, Rng *rng) {
  std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
  for (auto &v : t->vec()) v = static_cast<T>(dist(*rng));
}

// ---------------------------------------------------------------- Conv2d

template <typename T>
Conv2d<T>::Conv2d(const std::string &name, int in_channels, int out_channels, int kernel,
                  int stride, int padding, bool bias)
    : in_(in_channels),
      out_(out_channels),
      k_(kernel),
      stride_(stride),
      pad_(padding),
      has_bias_(bias) {
  if (stride <= 0 || kernel <= 0 || padding < 0) Fail(name, ": invalid conv geometry");
  weight_.Reset(name + ".weight", Tensor4<T>(out_channels, in_channels, kernel, kernel),
                true);
  if (bias) bias_.Reset(name + ".bias", Tensor4<T>(1, out_channels, 1, 1), false);
}

template <typename T>
void Conv2d<T>::Init(Rng *rng) {
  KaimingNormal(&weight_.value, in_ * k_ * k_, rng);
  if (has_bias_) bias_.value.Fill(T(0));
}

template <typename T>
void Conv2d<T>::Im2Col(const T *x, int h, int w, int ho, int wo, T *cols) const {
  const std::size_t p = static_cast<std::size_t>(ho) * wo;
  for (int c = 0; c < in_; ++c) {
    const T *plane = x + static_cast<std::size_t>(c) * h * w;
    for (int ki = 0; ki < k_; ++ki) {
      for (int kj = 0; kj < k_; ++kj) {
        T *row = cols + ((static_cast<std::size_t>(c) * k_ + ki) * k_ + kj) * p;
        for (int oy = 0; oy < ho; ++oy) {
          int iy = oy * stride_ - pad_ + ki;
          T *dst = row + static_cast<std::size_t>(oy) * wo;
          if (iy < 0 || iy >= h) {
            std::fill(dst, dst + wo, T(0));
            continue;
          }
          const T *src = plane + static_cast<std::size_t>(iy) * w;
          for (int ox = 0; ox < wo; ++ox) {
            int ix = ox * stride_ - pad_ + kj;
            dst[ox] = (ix >= 0 && ix < w) ? src[ix] : T(0);
          }
        }
      }
    }
  }
}

template <typename T>
void Conv2d<T>::Col2Im(const T *cols, int h, int w, int ho, int wo, T *dx) const {
  const std::size_t p = static_cast<std::size_t>(ho) * wo;
  for (int c = 0; c < in_; ++c) {
    T *plane = dx + static_cast<std::size_t>(c) * h * w;
    for (int ki = 0; ki < k_; ++ki) {
      for (int kj = 0; kj < k_; ++kj) {
        const T *row = cols + ((static_cast<std::size_t>(c) * k_ + ki) * k_ + kj) * p;
        for (int oy = 0; oy < ho; ++oy) {
          int iy = oy * stride_ - pad_ + ki;
          if (iy < 0 || iy >= h) continue;
          const T *src = row + static_cast<std::size_t>(oy) * wo;
          T *dst = plane + static_cast<std::size_t>(iy) * w;
          for (int ox = 0; ox < wo; ++ox) {
            int ix = ox * stride_ - pad_ + kj;
            if (ix >= 0 && ix < w) dst[ix] += src[ox];
          }
        }
      }
    }
  }
}

template <typename T>
Tensor4<T> Conv2d<T>::Forward(const Tensor4<T> &x, Mode mode) {
  if (x.c() != in_)
    Fail("conv ", weight_.name, ": input has ", x.c(), " channels, expected ", in_);
  const int ho = PooledSize(x.h(), k_, stride_, pad_);
  const int wo = PooledSize(x.w(), k_, stride_, pad_);
  const int kk = in_ * k_ * k_;
  const int p = ho * wo;
  Tensor4<T> y(x.n(), out_, ho, wo);
  std::vector<T> cols(static_cast<std::size_t>(kk) * p);
  Eigen::Map<const RowMat<T>> wm(weight_.value.data(), out_, kk);
  Eigen::Map<const RowMat<T>> cm(cols.data(), kk, p);
  for (int n = 0; n < x.n(); ++n) {
    Im2Col(x.Sample(n), x.h(), x.w(), ho, wo, cols.data());
    Eigen::Map<RowMat<T>> ym(y.Sample(n), out_, p);
    ym.noalias() = wm * cm;
    if (has_bias_)
      for (int o = 0; o < out_; ++o) ym.row(o).array() += bias_.value[o];
  }
  cached_ = mode == Mode::kTrain;
  if (cached_) input_ = x;
  return y;
}

template <typename T>
Tensor4<T> Conv2d<T>::Backward(const Tensor4<T> &dy) {
  RequireCached(cached_, "Conv2d");
  const Tensor4<T> &x = input_;
  const int ho = dy.h(), wo = dy.w();
  const int kk = in_ * k_ * k_;
  const int p = ho * wo;
  if (dy.n() != x.n() || dy.c() != out_ || ho != PooledSize(x.h(), k_, stride_, pad_) ||
      wo != PooledSize(x.w(), k_, stride_, pad_))
    Fail("conv ", weight_.name, ": gradient shape ", dy.ShapeString(), " mismatch");
  Tensor4<T> dx = ZerosLike(x);
  std::vector<T> cols(static_cast<std::size_t>(kk) * p);
  std::vector<T> dcols(static_cast<std::size_t>(kk) * p);
  Eigen::Map<const RowMat<T>> wm(weight_.value.data(), out_, kk);
  Eigen::Map<RowMat<T>> dwm(weight_.grad.data(), out_, kk);
  Eigen::Map<const RowMat<T>> cm(cols.data(), kk, p);
  Eigen::Map<RowMat<T>> dcm(dcols.data(), kk, p);
  for (int n = 0; n < x.n(); ++n) {
    Eigen::Map<const RowMat<T>> dym(dy.Sample(n), out_, p);
    Im2Col(x.Sample(n), x.h(), x.w(), ho, wo, cols.data());
    dwm.noalias() += dym * cm.transpose();
    dcm.noalias() = wm.transpose() * dym;
    Col2Im(dcols.data(), x.h(), x.w(), ho, wo, dx.Sample(n));
    if (has_bias_)
      for (int o = 0; o < out_; ++o) bias_.grad[o] += dym.row(o).sum();
  }
  return dx;
}

template <typename T>
void Conv2d<T>::CollectParams(ParamList<T> *out) {
  out->push_back(&weight_);
  if (has_bias_) out->push_back(&bias_);
}

// ----------------------------------------------------------- BatchNorm2d

template <typename T>
BatchNorm2d<T>::BatchNorm2d(const std::string &name, int channels, double momentum,
                            double eps)
    : channels_(channels), momentum_(momentum), eps_(eps) {
  gamma_.Reset(name + ".gamma", Tensor4<T>(1, channels, 1, 1, T(1)), false);
  beta_.Reset(name + ".beta", Tensor4<T>(1, channels, 1, 1, T(0)), false);
  running_mean_ = {name + ".running_mean", Tensor4<T>(1, channels, 1, 1, T(0))};
  running_var_ = {name + ".running_var", Tensor4<T>(1, channels, 1, 1, T(1))};
}

template <typename T>
Tensor4<T> BatchNorm2d<T>::Forward(const Tensor4<T> &x, Mode mode) {
  if (x.c() != channels_)
    Fail("batchnorm ", gamma_.name, ": input has ", x.c(), " channels, expected ",
         channels_);
  Tensor4<T> y = ZerosLike(x);
  const std::size_t plane = x.plane();
  const double count = static_cast<double>(plane) * x.n();

  if (mode == Mode::kEval) {
    for (int c = 0; c < channels_; ++c) {
      double inv = 1.0 / std::sqrt(static_cast<double>(running_var_.value[c]) + eps_);
      double scale = gamma_.value[c] * inv;
      double shift = beta_.value[c] - running_mean_.value[c] * scale;
      for (int n = 0; n < x.n(); ++n) {
        const T *src = x.Plane(n, c);
        T *dst = y.Plane(n, c);
        for (std::size_t i = 0; i < plane; ++i)
          dst[i] = static_cast<T>(src[i] * scale + shift);
      }
    }
    cached_ = false;
    return y;
  }

  x_hat_ = ZerosLike(x);
  inv_std_.assign(channels_, 0.0);
  for (int c = 0; c < channels_; ++c) {
    double sum = 0.0;
    for (int n = 0; n < x.n(); ++n) {
      const T *src = x.Plane(n, c);
      for (std::size_t i = 0; i < plane; ++i) sum += src[i];
    }
    const double mean = sum / count;
    double sq = 0.0;
    for (int n = 0; n < x.n(); ++n) {
      const T *src = x.Plane(n, c);
      for (std::size_t i = 0; i < plane; ++i) {
        double d = src[i] - mean;
        sq += d * d;
      }
    }
    const double var = sq / count;
    const double inv = 1.0 / std::sqrt(var + eps_);
    inv_std_[c] = inv;
    for (int n = 0; n < x.n(); ++n) {
      const T *src = x.Plane(n, c);
      T *xh = x_hat_.Plane(n, c);
      T *dst = y.Plane(n, c);
      for (std::size_t i = 0; i < plane; ++i) {
        xh[i] = static_cast<T>((src[i] - mean) * inv);
        dst[i] = gamma_.value[c] * xh[i] + beta_.value[c];
      }
    }
    const double unbiased = count > 1.0 ? var * count / (count - 1.0) : var;
    running_mean_.value[c] =
        static_cast<T>((1.0 - momentum_) * running_mean_.value[c] + momentum_ * mean);
    running_var_.value[c] =
        static_cast<T>((1.0 - momentum_) * running_var_.value[c] + momentum_ * unbiased);
  }
  cached_ = true;
  return y;
}

template <typename T>
Tensor4<T> BatchNorm2d<T>::Backward(const Tensor4<T> &dy) {
  RequireCached(cached_, "BatchNorm2d");
  if (!dy.SameShape(x_hat_)) Fail("batchnorm ", gamma_.name, ": gradient shape mismatch");
  Tensor4<T> dx = ZerosLike(dy);
  const std::size_t plane = dy.plane();
  const double count = static_cast<double>(plane) * dy.n();
  for (int c = 0; c < channels_; ++c) {
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (int n = 0; n < dy.n(); ++n) {
      const T *g = dy.Plane(n, c);
      const T *xh = x_hat_.Plane(n, c);
      for (std::size_t i = 0; i < plane; ++i) {
        sum_dy += g[i];
        sum_dy_xhat += static_cast<double>(g[i]) * xh[i];
      }
    }
    gamma_.grad[c] += static_cast<T>(sum_dy_xhat);
    beta_.grad[c] += static_cast<T>(sum_dy);
    const double k = gamma_.value[c] * inv_std_[c] / count;
    for (int n = 0; n < dy.n(); ++n) {
      const T *g = dy.Plane(n, c);
      const T *xh = x_hat_.Plane(n, c);
      T *d = dx.Plane(n, c);
      for (std::size_t i = 0; i < plane; ++i)
        d[i] = static_cast<T>(k * (count * g[i] - sum_dy - xh[i] * sum_dy_xhat));
    }
  }
  return dx;
}

template <typename T>
void BatchNorm2d<T>::CollectParams(ParamList<T> *out) {
  out->push_back(&gamma_);
  out->push_back(&beta_);
}

template <typename T>
void BatchNorm2d<T>::CollectBuffers(BufferList<T> *out) {
  out->push_back(&running_mean_);
  out->push_back(&running_var_);
}

// ------------------------------------------------------------------ Relu

template <typename T>
Tensor4<T> Relu<T>::Forward(const Tensor4<T> &x, Mode mode) {
  Tensor4<T> y = x;
  for (auto &v : y.vec()) v = v > T(0) ? v : T(0);
  cached_ = mode == Mode::kTrain;
  if (cached_) {
    mask_.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mask_[i] = x[i] > T(0);
  }
  return y;
}

template <typename T>
Tensor4<T> Relu<T>::Backward(const Tensor4<T> &dy) {
  RequireCached(cached_, "Relu");
  if (dy.size() != mask_.size()) Fail("relu: gradient shape mismatch");
  Tensor4<T> dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i)
    if (!mask_[i]) dx[i] = T(0);
  return dx;
}

// ------------------------------------------------------------- MaxPool2d

template <typename T>
Tensor4<T> MaxPool2d<T>::Forward(const Tensor4<T> &x, Mode mode) {
  const int ho = PooledSize(x.h(), k_, stride_, pad_);
  const int wo = PooledSize(x.w(), k_, stride_, pad_);
  Tensor4<T> y(x.n(), x.c(), ho, wo);
  const bool keep = mode == Mode::kTrain;
  if (keep) argmax_.assign(y.size(), 0);
  std::size_t out_idx = 0;
  for (int n = 0; n < x.n(); ++n) {
    for (int c = 0; c < x.c(); ++c) {
      for (int oy = 0; oy < ho; ++oy) {
        for (int ox = 0; ox < wo; ++ox, ++out_idx) {
          T best = -std::numeric_limits<T>::infinity();
          std::size_t best_idx = 0;
          bool found = false;
          for (int ki = 0; ki < k_; ++ki) {
            int iy = oy * stride_ - pad_ + ki;
            if (iy < 0 || iy >= x.h()) continue;
            for (int kj = 0; kj < k_; ++kj) {
              int ix = ox * stride_ - pad_ + kj;
              if (ix < 0 || ix >= x.w()) continue;
              std::size_t idx = x.Index(n, c, iy, ix);
              if (!found || x[idx] > best) {
                best = x[idx];
                best_idx = idx;
                found = true;
              }
            }
          }
          if (!found) Fail("maxpool window lies entirely in padding");
          y[out_idx] = best;
          if (keep) argmax_[out_idx] = best_idx;
        }
      }
    }
  }
  in_n_ = x.n();
  in_c_ = x.c();
  in_h_ = x.h();
  in_w_ = x.w();
  cached_ = keep;
  return y;
}

template <typename T>
Tensor4<T> MaxPool2d<T>::Backward(const Tensor4<T> &dy) {
  RequireCached(cached_, "MaxPool2d");
  if (dy.size() != argmax_.size()) Fail("maxpool: gradient shape mismatch");
  Tensor4<T> dx(in_n_, in_c_, in_h_, in_w_);
  for (std::size_t i = 0; i < dy.size(); ++i) dx[argmax_[i]] += dy[i];
  return dx;
}

// --------------------------------------------------------- GlobalAvgPool

template <typename T>
Tensor4<T> GlobalAvgPool<T>::Forward(const Tensor4<T> &x, Mode mode) {
  Tensor4<T> y(x.n(), x.c(), 1, 1);
  const std::size_t plane = x.plane();
  for (int n = 0; n < x.n(); ++n) {
    for (int c = 0; c < x.c(); ++c) {
      const T *src = x.Plane(n, c);
      double sum = 0.0;
      for (std::size_t i = 0; i < plane; ++i) sum += src[i];
      y.at(n, c, 0, 0) = static_cast<T>(sum / static_cast<double>(plane));
    }
  }
  in_n_ = x.n();
  in_c_ = x.c();
  in_h_ = x.h();
  in_w_ = x.w();
  cached_ = mode == Mode::kTrain;
  return y;
}

template <typename T>
Tensor4<T> GlobalAvgPool<T>::Backward(const Tensor4<T> &dy) {
  RequireCached(cached_, "GlobalAvgPool");
  if (dy.n() != in_n_ || dy.c() != in_c_) Fail("global pool: gradient shape mismatch");
  Tensor4<T> dx(in_n_, in_c_, in_h_, in_w_);
  const std::size_t plane = dx.plane();
  const T scale = T(1) / static_cast<T>(plane);
  for (int n = 0; n < in_n_; ++n)
    for (int c = 0; c < in_c_; ++c) {
      T g = dy.at(n, c, 0, 0) * scale;
      T *dst = dx.Plane(n, c);
      std::fill(dst, dst + plane, g);
    }
  return dx;
}

// ---------------------------------------------------------------- Linear

template <typename T>
Linear<T>::Linear(const std::string &name, int in_features, int out_features)
    : in_(in_features), out_(out_features) {
  weight_.Reset(name + ".weight", Tensor4<T>(out_features, in_features, 1, 1), true);
  bias_.Reset(name + ".bias", Tensor4<T>(1, out_features, 1, 1), false);
}

template <typename T>
void Linear<T>::Init(Rng *rng) {
  KaimingNormal(&weight_.value, in_, rng);
  bias_.value.Fill(T(0));
}

template <typename T>
Tensor4<T> Linear<T>::Forward(const Tensor4<T> &x, Mode mode) {
  if (x.c() * x.h() * x.w() != in_)
    Fail("linear ", weight_.name, ": input has ", x.c() * x.h() * x.w(),
         " features, expected ", in_);
  Tensor4<T> y(x.n(), out_, 1, 1);
  for (int n = 0; n < x.n(); ++n) {
    const T *xi = x.Sample(n);
    for (int o = 0; o < out_; ++o) {
      const T *wr = weight_.value.Sample(o);
      double acc = bias_.value[o];
      for (int i = 0; i < in_; ++i) acc += static_cast<double>(wr[i]) * xi[i];
      y.at(n, o, 0, 0) = static_cast<T>(acc);
    }
  }
  cached_ = mode == Mode::kTrain;
  if (cached_) input_ = x;
  return y;
}

template <typename T>
Tensor4<T> Linear<T>::Backward(const Tensor4<T> &dy) {
  RequireCached(cached_, "Linear");
  if (dy.n() != input_.n() || dy.c() != out_) Fail("linear: gradient shape mismatch");
  Tensor4<T> dx = ZerosLike(input_);
  for (int n = 0; n < dy.n(); ++n) {
    const T *xi = input_.Sample(n);
    T *dxi = dx.Sample(n);
    for (int o = 0; o < out_; ++o) {
      T g = dy.at(n, o, 0, 0);
      const T *wr = weight_.value.Sample(o);
      T *dwr = weight_.grad.Sample(o);
      bias_.grad[o] += g;
      for (int i = 0; i < in_; ++i) {
        dwr[i] += g * xi[i];
        dxi[i] += g * wr[i];
      }
    }
  }
  return dx;
}

template <typename T>
void Linear<T>::CollectParams(ParamList<T> *out) {
  out->push_back(&weight_);
  out->push_back(&bias_);
}

// --------------------------------------------------------------- Sigmoid

template <typename T>
Tensor4<T> Sigmoid<T>::Forward(const Tensor4<T> &x, Mode mode) {
  Tensor4<T> y = x;
  for (auto &v : y.vec()) v = T(1) / (T(1) + std::exp(-v));
  cached_ = mode == Mode::kTrain;
  if (cached_) out_ = y;
  return y;
}

template <typename T>
Tensor4<T> Sigmoid<T>::Backward(const Tensor4<T> &dy) {
  RequireCached(cached_, "Sigmoid");
  if (!dy.SameShape(out_)) Fail("sigmoid: gradient shape mismatch");
  Tensor4<T> dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= out_[i] * (T(1) - out_[i]);
  return dx;
}

#define SUBSPOOF_INSTANTIATE(T)                                \
  template void KaimingNormal<T>(Tensor4<T> *, int, Rng *);    \
  template class Conv2d<T>;                                    \
  template class BatchNorm2d<T>;                               \
  template class Relu<T>;                                      \
  template class MaxPool2d<T>;                                 \
  template class GlobalAvgPool<T>;                             \
  template class Linear<T>;                                    \
  template class Sigmoid<T>;

SUBSPOOF_INSTANTIATE(float)
SUBSPOOF_INSTANTIATE(double)

#undef SUBSPOOF_INSTANTIATE

}  // namespace subspoof::net

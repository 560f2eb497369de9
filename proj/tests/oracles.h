// tests/oracles.h

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

// Independent reference implementations used by the unit and acceptance
// tests.  Everything here is written for clarity, not speed, and shares no
// code with the library beyond its plain data types.

#ifndef SUBSPOOF_TESTS_ORACLES_H_
#define SUBSPOOF_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "subspoof/net/tensor.h"

namespace oracle {

using subspoof::net::Tensor4;

// ---------------------------------------------------------------- spectral

/// Periodic Blackman window from its textbook definition.
inline double Blackman(int n, int len) {
  const double x = 2.0 * std::numbers::pi * n / len;
  return 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
}

/// Naive DFT of one frame: frame t covers [t*hop, t*hop + win), zero beyond
/// the signal, windowed, zero-padded to nfft.  Returns bins 0..nfft/2.
/// Twiddles come from a long double table indexed by k*n mod nfft.
inline void NaiveDftFrame(const std::vector<double> &x, int t, int win, int hop, int nfft,
                          std::vector<double> *re, std::vector<double> *im) {
  static thread_local std::vector<long double> cos_table, sin_table;
  if (static_cast<int>(cos_table.size()) != nfft) {
    cos_table.resize(nfft);
    sin_table.resize(nfft);
    for (int j = 0; j < nfft; ++j) {
      long double ang = -2.0L * std::numbers::pi_v<long double> * j / nfft;
      cos_table[j] = std::cos(ang);
      sin_table[j] = std::sin(ang);
    }
  }
  std::vector<long double> v;
  for (int n = 0; n < win; ++n) {
    std::size_t idx = static_cast<std::size_t>(t) * hop + n;
    if (idx >= x.size()) break;
    v.push_back(x[idx] * static_cast<long double>(Blackman(n, win)));
  }
  const int bins = nfft / 2 + 1;
  re->assign(bins, 0.0);
  im->assign(bins, 0.0);
  for (int k = 0; k < bins; ++k) {
    long double sr = 0.0L, si = 0.0L;
    for (std::size_t n = 0; n < v.size(); ++n) {
      const std::size_t j = (static_cast<std::size_t>(k) * n) % nfft;
      sr += v[n] * cos_table[j];
      si += v[n] * sin_table[j];
    }
    (*re)[k] = static_cast<double>(sr);
    (*im)[k] = static_cast<double>(si);
  }
}

// ---------------------------------------------------------------- metrics

struct Sweep {
  std::vector<double> far, frr;
};

/// far/frr at -inf, every midpoint of distinct pooled scores, and +inf, using
/// "accept if score >= t", computed by direct counting.
inline Sweep BruteSweep(const std::vector<double> &bona, const std::vector<double> &spoof) {
  std::set<double> uniq(bona.begin(), bona.end());
  uniq.insert(spoof.begin(), spoof.end());
  std::vector<double> s(uniq.begin(), uniq.end());
  std::vector<double> th{-std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i + 1 < s.size(); ++i) th.push_back(0.5 * (s[i] + s[i + 1]));
  th.push_back(std::numeric_limits<double>::infinity());
  Sweep out;
  for (double t : th) {
    double fa = 0, fr = 0;
    for (double v : spoof) fa += v >= t;
    for (double v : bona) fr += v < t;
    out.far.push_back(fa / spoof.size());
    out.frr.push_back(fr / bona.size());
  }
  return out;
}

/// (far + frr) / 2 at the swept point minimizing |far - frr|; no interpolation.
inline double BruteEer(const std::vector<double> &bona, const std::vector<double> &spoof) {
  Sweep s = BruteSweep(bona, spoof);
  double best = 2.0, eer = 0.0;
  for (std::size_t i = 0; i < s.far.size(); ++i) {
    double gap = std::abs(s.far[i] - s.frr[i]);
    if (gap < best) {
      best = gap;
      eer = 0.5 * (s.far[i] + s.frr[i]);
    }
  }
  return eer;
}

/// Largest deviation an interpolated EER may show from BruteEer: half the
/// combined far + frr step across the sweep segments next to the brute-force
/// point.  Without ties this is 1 / (2 * class size).
inline double BruteEerBound(const std::vector<double> &bona, const std::vector<double> &spoof) {
  Sweep s = BruteSweep(bona, spoof);
  std::size_t at = 0;
  double best = 2.0;
  for (std::size_t i = 0; i < s.far.size(); ++i)
    if (std::abs(s.far[i] - s.frr[i]) < best) {
      best = std::abs(s.far[i] - s.frr[i]);
      at = i;
    }
  double bound = 0.0;
  for (std::size_t j : {at - 1, at + 1})
    if (j < s.far.size())
      bound = std::max(bound, 0.5 * (std::abs(s.far[j] - s.far[at]) + std::abs(s.frr[j] - s.frr[at])));
  return bound;
}

struct Costs {
  double p_target, p_nontarget, p_spoof;
  double c_miss_asv, c_fa_asv, c_miss_cm, c_fa_cm;
  double p_miss_asv, p_fa_asv, p_miss_spoof_asv;
};

/// Normalized constrained t-DCF minimized over the brute sweep.
inline double BruteMinTdcf(const std::vector<double> &bona, const std::vector<double> &spoof,
                           const Costs &c) {
  const double c1 = c.p_target * (c.c_miss_cm - c.c_miss_asv * c.p_miss_asv) -
                    c.p_nontarget * c.c_fa_asv * c.p_fa_asv;
  const double c2 = c.c_fa_cm * c.p_spoof * (1.0 - c.p_miss_spoof_asv);
  Sweep s = BruteSweep(bona, spoof);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.far.size(); ++i)
    best = std::min(best, (c1 * s.frr[i] + c2 * s.far[i]) / std::min(c1, c2));
  return best;
}

// ---------------------------------------------------------------- network

/// Six nested loops of plain cross-correlation with zero padding.
inline Tensor4<double> NaiveConv(const Tensor4<double> &x, const Tensor4<double> &w,
                                 const std::vector<double> &bias, int stride, int pad) {
  const int k = w.h();
  const int ho = (x.h() + 2 * pad - k) / stride + 1;
  const int wo = (x.w() + 2 * pad - k) / stride + 1;
  Tensor4<double> y(x.n(), w.n(), ho, wo);
  for (int n = 0; n < x.n(); ++n)
    for (int o = 0; o < w.n(); ++o)
      for (int i = 0; i < ho; ++i)
        for (int j = 0; j < wo; ++j) {
          double acc = bias.empty() ? 0.0 : bias[o];
          for (int c = 0; c < x.c(); ++c)
            for (int a = 0; a < k; ++a)
              for (int b = 0; b < k; ++b) {
                int r = i * stride + a - pad, q = j * stride + b - pad;
                if (r < 0 || q < 0 || r >= x.h() || q >= x.w()) continue;
                acc += w.at(o, c, a, b) * x.at(n, c, r, q);
              }
          y.at(n, o, i, j) = acc;
        }
  return y;
}

inline Tensor4<double> RandomTensor(int n, int c, int h, int w, std::mt19937_64 &rng,
                                    double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Tensor4<double> t(n, c, h, w);
  for (auto &v : t.vec()) v = g(rng);
  return t;
}

/// Norm-wise relative error |a - b| / max(|a|, |b|, floor).
inline double RelativeError(const std::vector<double> &a, const std::vector<double> &b,
                            double floor = 1e-12) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), floor});
}

/// Central differences of loss() with respect to every entry of *t.
inline std::vector<double> NumericGradient(Tensor4<double> *t,
                                           const std::function<double()> &loss,
                                           double h = 1e-6) {
  std::vector<double> g(t->size());
  for (std::size_t i = 0; i < t->size(); ++i) {
    const double keep = (*t)[i];
    (*t)[i] = keep + h;
    const double up = loss();
    (*t)[i] = keep - h;
    const double down = loss();
    (*t)[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// <y, r>: a scalar probe whose gradient with respect to y is r.
inline double Probe(const Tensor4<double> &y, const Tensor4<double> &r) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) acc += y[i] * r[i];
  return acc;
}

// ---------------------------------------------------------------- pitch

/// Exhaustive lag search on one frame: normalized autocorrelation over the
/// overlap at every lag in [lo, hi], first-peak selection, parabolic refinement.
inline double ExhaustivePitch(const std::vector<double> &frame, int lo, int hi, int fs,
                             double peak_ratio = 0.9) {
  auto r = [&](int lag) {
    double xy = 0, xx = 0, yy = 0;
    for (std::size_t n = 0; n + lag < frame.size(); ++n) {
      xy += frame[n] * frame[n + lag];
      xx += frame[n] * frame[n];
      yy += frame[n + lag] * frame[n + lag];
    }
    return xx > 0 && yy > 0 ? xy / std::sqrt(xx * yy) : 0.0;
  };
  std::vector<double> v;
  for (int lag = lo - 1; lag <= hi + 1; ++lag) v.push_back(r(lag));
  // Local peaks; the earliest one within peak_ratio of the tallest wins.
  std::vector<int> peaks;
  double tallest = -1.0;
  for (int lag = lo; lag <= hi; ++lag) {
    const double c = v[lag - lo + 1];
    if (c >= v[lag - lo] && c > v[lag - lo + 2]) {
      peaks.push_back(lag);
      tallest = std::max(tallest, c);
    }
  }
  if (peaks.empty()) return 0.0;
  int best = peaks.front();
  for (int lag : peaks)
    if (v[lag - lo + 1] >= peak_ratio * tallest) {
      best = lag;
      break;
    }
  const double a = v[best - lo], b = v[best - lo + 1], c = v[best - lo + 2];
  const double den = a - 2 * b + c;
  const double shift = den < 0 ? std::clamp(0.5 * (a - c) / den, -0.5, 0.5) : 0.0;
  return fs / (best + shift);
}

}  // namespace oracle

#endif  // SUBSPOOF_TESTS_ORACLES_H_

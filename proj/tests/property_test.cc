// Copyright 2026 The SecAgg Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Randomized and grid-swept checks of the library's structural invariants.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "Eigen/Dense"
#include "gtest/gtest.h"
#include "secagg_audit/auditor.h"
#include "secagg_audit/gaussian_mechanism.h"
#include "secagg_audit/linalg_stats.h"
#include "secagg_audit/plrv_accounting.h"
#include "secagg_audit/special_functions.h"
#include "test_util.h"

namespace secagg_audit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd RandomSpd(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = normal(rng);
  }
  return a * a.transpose() / d + 0.05 * Eigen::MatrixXd::Identity(d, d);
}

// ===================================================== special functions

TEST(SpecialFunctionProperties, NormalCdfIsSymmetric) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> x_dist(-40.0, 40.0);
  for (int i = 0; i < 100000; ++i) {
    const double x = x_dist(rng);
    ASSERT_NEAR(StdNormalCdf(x) + StdNormalCdf(-x), 1.0, 1e-14) << x;
  }
}

TEST(SpecialFunctionProperties, QuantileInvertsCdf) {
  for (double x = -6.0; x <= 6.0; x += 0.001) {
    const double p = StdNormalCdf(x);
    ASSERT_OK_AND_ASSIGN(const double back, StdNormalQuantile(p));
    // For x > 0, p sits near 1 where doubles are spaced 2^-53 apart; one
    // rounding of p moves the exact inverse by about eps * p / phi(x), which
    // exceeds 1e-9 beyond x ~ 5.6.
    const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    const double conditioning = 2.0 * std::numeric_limits<double>::epsilon() * p / density;
    ASSERT_NEAR(back, x, std::max(1e-9, conditioning)) << x;
  }
}

TEST(SpecialFunctionProperties, IrwinHallDensityIsSymmetric) {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= kMaxIrwinHallTerms; ++n) {
    std::uniform_real_distribution<double> y_dist(-n / 2.0, n / 2.0);
    for (int i = 0; i < 200; ++i) {
      const double y = y_dist(rng);
      ASSERT_OK_AND_ASSIGN(const double left, ShiftedIrwinHallPdf(n, -y));
      ASSERT_OK_AND_ASSIGN(const double right, ShiftedIrwinHallPdf(n, y));
      ASSERT_NEAR(left, right, 1e-12) << "n=" << n << " y=" << y;
    }
  }
}

// Probability of [a, b] under the density, by composite Simpson.
double IrwinHallBinMass(int n, double a, double b) {
  const int cells = 64;
  const double h = (b - a) / cells;
  double total = 0.0;
  for (int i = 0; i <= cells; ++i) {
    const double weight = (i == 0 || i == cells) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    total += weight * *ShiftedIrwinHallPdf(n, a + i * h);
  }
  return total * h / 3.0;
}

TEST(SpecialFunctionProperties, IrwinHallDensityMatchesHistogram) {
  // Every bin of every order is held to 3 standard errors. Over 800 bins a
  // correct density still leaves about 2 bins outside by chance, so up to 8
  // (the 99.9% point of Binomial(800, 0.0027)) are tolerated, none beyond
  // 5 standard errors.
  constexpr int kSamples = 1000000;
  constexpr int kBins = 20;
  int beyond_three = 0;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  for (int n = 1; n <= kMaxIrwinHallTerms; ++n) {
    // Bins over the central +-4 sd, clipped to the support.
    const double half = std::min(n / 2.0, 4.0 * std::sqrt(n / 12.0));
    const double width = 2.0 * half / kBins;
    std::vector<int64_t> counts(kBins, 0);
    for (int s = 0; s < kSamples; ++s) {
      double y = 0.0;
      for (int k = 0; k < n; ++k) y += unit(rng);
      const int bin = static_cast<int>(std::floor((y + half) / width));
      if (bin >= 0 && bin < kBins) ++counts[static_cast<size_t>(bin)];
    }
    for (int b = 0; b < kBins; ++b) {
      const double p = IrwinHallBinMass(n, -half + b * width, -half + (b + 1) * width);
      const double observed = static_cast<double>(counts[static_cast<size_t>(b)]) / kSamples;
      const double se = std::sqrt(p * (1.0 - p) / kSamples);
      EXPECT_NEAR(observed, p, 5.0 * se + 1e-12) << "n=" << n << " bin=" << b;
      beyond_three += std::abs(observed - p) > 3.0 * se;
    }
  }
  EXPECT_LE(beyond_three, 8);
}

TEST(SpecialFunctionProperties, ClopperPearsonIsMonotoneInFailures) {
  for (int64_t trials : {1, 7, 100, 2500}) {
    double previous = 0.0;
    for (int64_t k = 0; k <= trials; k += std::max<int64_t>(1, trials / 50)) {
      ASSERT_OK_AND_ASSIGN(const double upper, ClopperPearsonUpper(k, trials, 0.05));
      EXPECT_GE(upper, previous) << "k=" << k << " N=" << trials;
      previous = upper;
    }
  }
}

// ========================================================= linear algebra

TEST(LinalgProperties, MahalanobisIsSymmetricAndSeparating) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 7;
    const Eigen::MatrixXd cov = RandomSpd(d, rng);
    ASSERT_OK_AND_ASSIGN(const NoiseModel model,
                         NoiseModel::FromMoments(Eigen::VectorXd::Zero(d), cov,
                                                 DefaultShrinkage(cov)));
    Eigen::VectorXd a(d), b(d);
    for (int i = 0; i < d; ++i) {
      a[i] = normal(rng);
      b[i] = normal(rng);
    }
    ASSERT_OK_AND_ASSIGN(const double ab, Mahalanobis(model, a, b));
    ASSERT_OK_AND_ASSIGN(const double ba, Mahalanobis(model, b, a));
    ASSERT_OK_AND_ASSIGN(const double aa, Mahalanobis(model, a, a));
    EXPECT_NEAR(ab, ba, 1e-12 * ab);
    EXPECT_EQ(aa, 0.0);
    EXPECT_GT(ab, 0.0);
  }
}

TEST(LinalgProperties, WhiteningIsLinear) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 3 + trial;
    ASSERT_OK_AND_ASSIGN(const NoiseModel model,
                         NoiseModel::FromMoments(Eigen::VectorXd::Zero(d),
                                                 RandomSpd(d, rng), 0.0));
    Eigen::VectorXd u(d), v(d);
    for (int i = 0; i < d; ++i) {
      u[i] = normal(rng);
      v[i] = normal(rng);
    }
    const double alpha = normal(rng), beta = normal(rng);
    ASSERT_OK_AND_ASSIGN(const Eigen::VectorXd lhs, Whiten(model, alpha * u + beta * v));
    ASSERT_OK_AND_ASSIGN(const Eigen::VectorXd wu, Whiten(model, u));
    ASSERT_OK_AND_ASSIGN(const Eigen::VectorXd wv, Whiten(model, v));
    EXPECT_LT((lhs - (alpha * wu + beta * wv)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(LinalgProperties, MinEigenvalueMatchesDenseSolverAndTraceBound) {
  std::mt19937_64 rng(6);
  for (int d : {1, 2, 5, 10, 25, 50}) {
    for (int trial = 0; trial < 3; ++trial) {
      const Eigen::MatrixXd cov = RandomSpd(d, rng);
      ASSERT_OK_AND_ASSIGN(const NoiseModel model,
                           NoiseModel::FromMoments(Eigen::VectorXd::Zero(d), cov, 0.0));
      ASSERT_OK_AND_ASSIGN(const double lambda, MinEigenvalue(model));
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
      const double oracle = solver.eigenvalues().minCoeff();
      EXPECT_NEAR(lambda, oracle, 1e-8 * std::max(1.0, oracle)) << "d=" << d;
      EXPECT_LE(lambda, cov.trace() / d * (1.0 + 1e-12));
    }
  }
}

TEST(LinalgProperties, ScaledEstimateMatchesCovarianceOfSums) {
  // x = A u with u uniform on [-1/2, 1/2]^3; the sum of n copies has mean 0
  // and covariance n A A^T / 12.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  Eigen::Matrix3d a;
  a << 1.0, 0.5, 0.0, -0.3, 1.0, 0.2, 0.4, 0.0, 0.8;
  const int64_t m = 200000;
  const int64_t n = 7;
  UpdateMatrix samples(m, 3);
  for (int64_t i = 0; i < m; ++i) {
    const Eigen::Vector3d u(unit(rng), unit(rng), unit(rng));
    samples.row(i) = (a * u).transpose();
  }
  ASSERT_OK_AND_ASSIGN(const NoiseModel model, EstimateNoiseModel(samples, n, 0.0));
  const Eigen::Matrix3d truth = static_cast<double>(n) * a * a.transpose() / 12.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // Standard error of the mean of x_i x_j, scaled by n.
      const Eigen::ArrayXd prod = samples.col(i).array() * samples.col(j).array();
      const double var = (prod - prod.mean()).square().sum() / static_cast<double>(m - 1);
      const double se = n * std::sqrt(var / static_cast<double>(m));
      EXPECT_NEAR(model.covariance()(i, j), truth(i, j), 3.0 * se) << i << "," << j;
    }
    const double mean_se = n * std::sqrt(truth(i, i) / n / static_cast<double>(m));
    EXPECT_NEAR(model.mean()[i], 0.0, 3.0 * mean_se);
  }
}

// ===================================================== Gaussian mechanism

TEST(GaussianProperties, DeltaIsMonotoneInEpsilonAndSensitivity) {
  for (int s = 1; s <= 200; ++s) {
    const double sens = 0.1 * s;
    double previous = kInf;
    for (int e = 0; e <= 200; ++e) {
      const double eps = 0.05 * e;
      const double delta = GaussianDelta(eps, sens);
      ASSERT_LE(delta, previous + 1e-15) << "eps=" << eps << " sens=" << sens;
      if (s > 1) {
        ASSERT_GE(delta, GaussianDelta(eps, sens - 0.1) - 1e-15)
            << "eps=" << eps << " sens=" << sens;
      }
      previous = delta;
    }
  }
}

TEST(GaussianProperties, PrivacyLossSamplesReproduceTheCurve) {
  std::mt19937_64 rng(8);
  constexpr int kDraws = 1000000;
  for (double sens : {0.5, 1.0, 2.0}) {
    const double eta = 0.5 * sens * sens;
    std::normal_distribution<double> loss(eta, std::sqrt(2.0 * eta));
    std::vector<double> l(kDraws), l_prime(kDraws);
    for (int i = 0; i < kDraws; ++i) {
      l[static_cast<size_t>(i)] = loss(rng);
      l_prime[static_cast<size_t>(i)] = loss(rng);
    }
    for (double eps : {0.0, 0.5, 1.0, 2.0}) {
      double hits = 0.0, hits_prime = 0.0;
      for (int i = 0; i < kDraws; ++i) {
        hits += l[static_cast<size_t>(i)] >= eps;
        hits_prime += l_prime[static_cast<size_t>(i)] <= -eps;
      }
      const double p1 = hits / kDraws;
      const double p2 = hits_prime / kDraws;
      const double se = std::sqrt(p1 * (1 - p1) / kDraws +
                                  std::exp(2 * eps) * p2 * (1 - p2) / kDraws);
      EXPECT_NEAR(p1 - std::exp(eps) * p2, GaussianDelta(eps, sens), 3.0 * se + 1e-12)
          << "sens=" << sens << " eps=" << eps;
    }
  }
}

TEST(GaussianProperties, TradeoffIsAnInvolution) {
  for (double sens : {0.1, 0.5, 1.0, 3.0, 6.0}) {
    for (int i = 0; i <= 1000; ++i) {
      const double alpha = i / 1000.0;
      ASSERT_NEAR(GaussianTradeoff(GaussianTradeoff(alpha, sens), sens), alpha, 1e-9)
          << "sens=" << sens << " alpha=" << alpha;
    }
  }
}

TEST(GaussianProperties, AnalyticRocTracesTheTradeoffCurve) {
  for (double sens : {0.3, 1.0, 3.0, 5.0}) {
    double gap = 0.0;
    for (double theta = -40.0; theta <= 40.0; theta += 0.01) {
      const RocPoint roc = AnalyticRoc(theta, sens);
      gap = std::max(gap, std::abs(roc.fnr - GaussianTradeoff(roc.fpr, sens)));
    }
    EXPECT_LE(gap, 1e-10) << "sens=" << sens;
  }
}

// ========================================================= PLRV accounting

// A finite pair (p, q) whose log-ratios ln(p/q) are multiples of h, with
// extra atoms absorbing any mismatch so that both sum to 1. Atoms with q = 0
// have loss +inf and atoms with p = 0 have loss -inf.
struct LatticePair {
  std::vector<double> p, q;
  std::vector<int> k;  // ln(p/q) / h, or +-1000000 for the infinite atoms
  double h = 0.0;
};

constexpr int kPosInfAtom = 1000000;
constexpr int kNegInfAtom = -1000000;

LatticePair RandomLatticePair(int atoms, double h, int max_k, std::mt19937_64& rng) {
  std::gamma_distribution<double> weight(0.7);
  std::uniform_int_distribution<int> step(-max_k, max_k);
  LatticePair pair;
  pair.h = h;
  double p_total = 0.0;
  for (int i = 0; i < atoms; ++i) {
    pair.p.push_back(weight(rng) + 1e-3);
    pair.k.push_back(step(rng));
    p_total += pair.p.back();
  }
  double q_total = 0.0;
  for (int i = 0; i < atoms; ++i) {
    pair.p[static_cast<size_t>(i)] /= p_total;
    pair.q.push_back(pair.p[static_cast<size_t>(i)] * std::exp(-pair.k[static_cast<size_t>(i)] * h));
    q_total += pair.q.back();
  }
  if (q_total <= 1.0) {
    pair.p.push_back(0.0);
    pair.q.push_back(1.0 - q_total);
    pair.k.push_back(kNegInfAtom);
  } else {
    for (double& v : pair.p) v /= q_total;
    for (double& v : pair.q) v /= q_total;
    pair.p.push_back(1.0 - 1.0 / q_total);
    pair.q.push_back(0.0);
    pair.k.push_back(kPosInfAtom);
  }
  return pair;
}

// Forward loss ln(p/q) under P and backward loss ln(q/p) under Q on a
// lattice of the given half width.
std::pair<PlrvGrid, PlrvGrid> LatticeGrids(const LatticePair& pair, int64_t half_width) {
  std::vector<double> fwd(static_cast<size_t>(2 * half_width + 1), 0.0);
  std::vector<double> bwd(fwd.size(), 0.0);
  double fwd_pos = 0.0, fwd_neg = 0.0, bwd_pos = 0.0, bwd_neg = 0.0;
  for (size_t i = 0; i < pair.p.size(); ++i) {
    if (pair.k[i] == kPosInfAtom) {
      fwd_pos += pair.p[i];
      bwd_neg += pair.q[i];
    } else if (pair.k[i] == kNegInfAtom) {
      fwd_neg += pair.p[i];
      bwd_pos += pair.q[i];
    } else {
      fwd[static_cast<size_t>(pair.k[i] + half_width)] += pair.p[i];
      bwd[static_cast<size_t>(-pair.k[i] + half_width)] += pair.q[i];
    }
  }
  return {*PlrvGrid::FromMasses(pair.h, half_width, fwd, fwd_pos, fwd_neg),
          *PlrvGrid::FromMasses(pair.h, half_width, bwd, bwd_pos, bwd_neg)};
}

double BruteHockeyStick(const std::vector<double>& p, const std::vector<double>& q,
                        double eps) {
  double total = 0.0;
  for (size_t i = 0; i < p.size(); ++i) total += std::max(0.0, p[i] - std::exp(eps) * q[i]);
  return total;
}

// Trade-off function of "P vs Q" by enumerating every deterministic
// rejection region S (alpha = P(S), beta = 1 - Q(S)) in Gray-code order and
// taking the lower convex hull, which is what randomized tests achieve.
class BruteTradeoff {
 public:
  BruteTradeoff(const std::vector<double>& p, const std::vector<double>& q) {
    const size_t m = p.size();
    std::vector<std::pair<double, double>> points;
    points.reserve(size_t{1} << m);
    double alpha = 0.0, q_in = 0.0;
    points.emplace_back(0.0, 1.0);
    std::vector<bool> in(m, false);
    for (uint64_t g = 1; g < (uint64_t{1} << m); ++g) {
      const size_t bit = static_cast<size_t>(__builtin_ctzll(g));
      in[bit] = !in[bit];
      const double sign = in[bit] ? 1.0 : -1.0;
      alpha += sign * p[bit];
      q_in += sign * q[bit];
      points.emplace_back(alpha, 1.0 - q_in);
    }
    std::sort(points.begin(), points.end());
    for (const auto& pt : points) {
      if (!hull_.empty() && pt.first == hull_.back().first) continue;
      while (hull_.size() >= 2) {
        const auto& a = hull_[hull_.size() - 2];
        const auto& b = hull_.back();
        const double cross = (b.first - a.first) * (pt.second - a.second) -
                             (b.second - a.second) * (pt.first - a.first);
        if (cross <= 0.0) {
          hull_.pop_back();
        } else {
          break;
        }
      }
      hull_.push_back(pt);
    }
    // T is nonincreasing: beyond the lowest hull point extra type-I error
    // buys nothing.
    const auto lowest = std::min_element(
        hull_.begin(), hull_.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    hull_.erase(lowest + 1, hull_.end());
  }

  double operator()(double alpha) const {
    if (alpha <= hull_.front().first) return hull_.front().second;
    for (size_t i = 1; i < hull_.size(); ++i) {
      if (alpha <= hull_[i].first) {
        const auto& a = hull_[i - 1];
        const auto& b = hull_[i];
        if (b.first == a.first) return std::min(a.second, b.second);
        return a.second + (b.second - a.second) * (alpha - a.first) / (b.first - a.first);
      }
    }
    return hull_.back().second;
  }

 private:
  std::vector<std::pair<double, double>> hull_;
};

TEST(PlrvProperties, HockeyStickViaTradeoffFunctionMatchesEnumeration) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const LatticePair pair = RandomLatticePair(3 + trial % 9, 0.1, 30, rng);
    const BruteTradeoff tradeoff(pair.p, pair.q);
    for (double eps : {0.0, 0.05, 0.3, 1.0, 2.5}) {
      // F_P(x) = P(ln(q/p) <= x); at x = -eps that is P(ln(p/q) >= eps).
      double f_p = 0.0;
      for (size_t i = 0; i < pair.p.size(); ++i) {
        const double l = pair.k[i] == kPosInfAtom ? kInf
                         : pair.k[i] == kNegInfAtom ? -kInf
                                                     : pair.k[i] * pair.h;
        if (l >= eps - 1e-12) f_p += pair.p[i];
      }
      const double via_tradeoff = f_p - std::exp(eps) * tradeoff(1.0 - f_p);
      const double brute = BruteHockeyStick(pair.p, pair.q, eps);
      EXPECT_NEAR(via_tradeoff, brute, 1e-12) << "trial " << trial << " eps " << eps;
      ASSERT_OK_AND_ASSIGN(const double library, HockeyStickDiscrete(pair.p, pair.q, eps));
      EXPECT_NEAR(library, brute, 1e-12);
    }
  }
}

TEST(PlrvProperties, GridDeltaAndTradeoffMatchEnumeration) {
  std::mt19937_64 rng(10);
  std::vector<double> alphas;
  for (int i = 0; i <= 50; ++i) alphas.push_back(i / 50.0);
  for (int trial = 0; trial < 30; ++trial) {
    const LatticePair pair = RandomLatticePair(4 + trial % 8, 0.25, 12, rng);
    const auto [forward, backward] = LatticeGrids(pair, 16);
    for (double eps : {0.0, 0.25, 0.8, 2.0}) {
      EXPECT_NEAR(DeltaFromPlrv(forward, eps), BruteHockeyStick(pair.p, pair.q, eps), 1e-12);
      EXPECT_NEAR(DeltaFromPlrv(backward, eps), BruteHockeyStick(pair.q, pair.p, eps), 1e-12);
    }
    const BruteTradeoff tradeoff(pair.p, pair.q);
    ASSERT_OK_AND_ASSIGN(const TradeoffCurve curve,
                         TradeoffFromPlrv(forward, backward, alphas));
    for (const TradeoffPoint& pt : curve.points) {
      EXPECT_NEAR(pt.fnr, tradeoff(pt.fpr), 1e-12) << "trial " << trial << " alpha " << pt.fpr;
    }
  }
}

TEST(PlrvProperties, OrderedTradeoffsGiveOrderedHockeySticks) {
  // Garbling (P2, Q2) through a random channel K yields (P1, Q1) with a
  // pointwise larger trade-off function.
  std::mt19937_64 rng(11);
  std::gamma_distribution<double> weight(0.5);
  std::vector<double> alphas;
  for (int i = 0; i <= 200; ++i) alphas.push_back(i / 200.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 3 + trial % 7;
    const int out = 2 + trial % 5;
    std::vector<double> p2(m), q2(m);
    double sp = 0.0, sq = 0.0;
    for (int i = 0; i < m; ++i) {
      p2[static_cast<size_t>(i)] = weight(rng) + 1e-4;
      q2[static_cast<size_t>(i)] = weight(rng) + 1e-4;
      sp += p2[static_cast<size_t>(i)];
      sq += q2[static_cast<size_t>(i)];
    }
    for (int i = 0; i < m; ++i) {
      p2[static_cast<size_t>(i)] /= sp;
      q2[static_cast<size_t>(i)] /= sq;
    }
    std::vector<double> p1(out, 0.0), q1(out, 0.0);
    for (int i = 0; i < m; ++i) {
      std::vector<double> row(out);
      double s = 0.0;
      for (double& v : row) s += (v = weight(rng) + 1e-4);
      for (int o = 0; o < out; ++o) {
        p1[static_cast<size_t>(o)] += p2[static_cast<size_t>(i)] * row[static_cast<size_t>(o)] / s;
        q1[static_cast<size_t>(o)] += q2[static_cast<size_t>(i)] * row[static_cast<size_t>(o)] / s;
      }
    }
    const BruteTradeoff t1(p1, q1), t2(p2, q2);
    for (double alpha : alphas) ASSERT_GE(t1(alpha), t2(alpha) - 1e-12);
    for (double eps : {0.0, 0.1, 0.5, 1.0, 3.0}) {
      ASSERT_OK_AND_ASSIGN(const double e1, HockeyStickDiscrete(p1, q1, eps));
      ASSERT_OK_AND_ASSIGN(const double e2, HockeyStickDiscrete(p2, q2, eps));
      EXPECT_LE(e1, e2 + 1e-12) << "trial " << trial << " eps " << eps;
    }
  }
}

std::vector<PlrvGrid> SamplePlrvs() {
  std::vector<PlrvGrid> grids;
  grids.push_back(*ProductPlrv(*BuildDominatingPair(CoordinateBox::Uniform(3, 0, 1),
                                                    NoiseSpec::Gaussian(1.0))));
  grids.push_back(*ProductPlrv(*ReferenceCasePair(ReferenceCase::kUniform, 8, 3)));
  grids.push_back(*ProductPlrv(*ReferenceCasePair(ReferenceCase::kExponential, 30, 3)));
  std::mt19937_64 rng(12);
  grids.push_back(LatticeGrids(RandomLatticePair(10, 0.25, 12, rng), 16).first);
  return grids;
}

TEST(PlrvProperties, DeltaIsNonincreasingInEpsilon) {
  for (const PlrvGrid& grid : SamplePlrvs()) {
    double previous = kInf;
    for (int i = 0; i <= 400; ++i) {
      const double delta = DeltaFromPlrv(grid, 0.025 * i);
      ASSERT_LE(delta, previous + 1e-14) << i;
      previous = delta;
    }
  }
}

// delta = E[(1 - e^eps e^{-L})^+] is a sum of convex functions of e^eps.
// As a function of eps itself it need not be convex: a point mass at a
// gives 1 - e^{eps - a}, which is concave on [0, a].
TEST(PlrvProperties, DeltaIsConvexInExpEpsilon) {
  for (const PlrvGrid& grid : SamplePlrvs()) {
    const int steps = 400;
    const double top = std::exp(10.0);
    std::vector<double> deltas;
    for (int i = 0; i <= steps; ++i) {
      const double gamma = 1.0 + (top - 1.0) * i / steps;
      deltas.push_back(DeltaFromPlrv(grid, std::log(gamma)));
    }
    for (size_t i = 1; i + 1 < deltas.size(); ++i) {
      ASSERT_GE(deltas[i + 1] - 2 * deltas[i] + deltas[i - 1], -1e-12) << i;
    }
  }
}

TEST(PlrvProperties, PointMassDeltaIsConcaveInEpsilon) {
  PlrvGridSpec spec;
  spec.loss_max = 8.0;
  spec.buckets = 64;
  ASSERT_OK_AND_ASSIGN(const PlrvGrid point, PlrvGrid::PointMass(3.0, spec));
  const double h = 0.25;
  for (double eps = h; eps + h < 3.0; eps += h) {
    EXPECT_LT(DeltaFromPlrv(point, eps + h) - 2 * DeltaFromPlrv(point, eps) +
                  DeltaFromPlrv(point, eps - h),
              0.0);
  }
}

TEST(PlrvProperties, EnlargingTheBoxNeverDecreasesDelta) {
  struct Case {
    NoiseSpec noise;
    double lower, upper;
  };
  const std::vector<Case> cases = {{NoiseSpec::IrwinHall(6), -0.5, 0.5},
                                   {NoiseSpec::Gamma(20), 0.0, 4.0},
                                   {NoiseSpec::Gaussian(2.0), -1.0, 1.0}};
  for (const Case& c : cases) {
    double previous_scale = 0.0;
    std::vector<double> previous(41, 0.0);
    for (double scale : {0.25, 0.5, 1.0, 1.5}) {
      CoordinateBox box = CoordinateBox::Uniform(2, c.lower * scale, c.upper * scale);
      ASSERT_OK_AND_ASSIGN(const DominatingPair pair, BuildDominatingPair(box, c.noise));
      ASSERT_OK_AND_ASSIGN(const PlrvGrid grid, ProductPlrv(pair));
      for (int i = 0; i <= 40; ++i) {
        const double delta = DeltaFromPlrv(grid, 0.25 * i);
        EXPECT_GE(delta, previous[static_cast<size_t>(i)] - 1e-9)
            << "scale " << previous_scale << " -> " << scale << " eps " << 0.25 * i;
        previous[static_cast<size_t>(i)] = delta;
      }
      previous_scale = scale;
    }
  }
}

TEST(PlrvProperties, GridAndSamplerAgreeForGammaNoise) {
  ASSERT_OK_AND_ASSIGN(const DominatingPair pair,
                       ReferenceCasePair(ReferenceCase::kExponential, 20, 4));
  ASSERT_OK_AND_ASSIGN(const PlrvGrid grid, ProductPlrv(pair));
  const PlrvSampler sampler = MakePairSampler(pair);
  for (double eps : {0.0, 0.5, 1.5, 3.0}) {
    ASSERT_OK_AND_ASSIGN(const MonteCarloEstimate mc,
                         DeltaFromPlrvSamples(sampler, eps, 400000, 21));
    EXPECT_NEAR(DeltaFromPlrv(grid, eps), mc.mean, 3.0 * mc.standard_error + 1e-4)
        << "eps=" << eps;
  }
}

// ================================================================ auditor

TEST(AuditorProperties, AuditedEpsilonNeverExceedsTheCap) {
  std::mt19937_64 rng(13);
  const std::vector<double> deltas = {0.0, 1e-3, 0.01, 0.1, 0.5, 0.9};
  for (int trial = 0; trial < 2000; ++trial) {
    const int64_t n0 = std::uniform_int_distribution<int64_t>(1, 6000)(rng);
    const int64_t n1 = std::max<int64_t>(1, n0 - (trial % 2));
    AuditCounts counts;
    counts.null_trials = n0;
    counts.alternative_trials = n1;
    for (int k = 0; k < 5; ++k) {
      counts.thresholds.push_back(k);
      counts.false_positives.push_back(
          std::uniform_int_distribution<int64_t>(0, k == 0 ? 0 : n0)(rng));
      counts.false_negatives.push_back(
          std::uniform_int_distribution<int64_t>(0, k == 1 ? 0 : n1)(rng));
    }
    ASSERT_OK_AND_ASSIGN(const TradeoffCurve curve, ConfidenceTradeoff(counts, 0.05));
    for (double delta : deltas) {
      ASSERT_OK_AND_ASSIGN(const double cap,
                           MaxAuditableEpsilon(delta, std::max(n0, n1), 0.05));
      for (const TradeoffPoint& pt : curve.points) {
        const absl::StatusOr<double> eps = AuditedEpsilon(pt.fpr, pt.fnr, delta);
        if (!eps.ok()) continue;
        ASSERT_LE(*eps, std::max(0.0, cap)) << "N=" << n0 << "/" << n1 << " delta=" << delta;
      }
    }
  }
}

// Three-sigma delta-method slack on ln((1 - delta - a) / b) for binomial
// rate estimates a and b.
double EpsilonSlack(double fpr, double fnr, double delta, int64_t n0, int64_t n1) {
  const auto slack = [&](double num_rate, int64_t num_n, double den_rate, int64_t den_n) {
    const double num = 1.0 - delta - num_rate;
    if (num <= 0.0) return 0.0;
    const double s_num = std::sqrt(num_rate * (1 - num_rate) / num_n) / num;
    const double s_den = std::sqrt(den_rate * (1 - den_rate) / den_n) / den_rate;
    return 3.0 * std::hypot(s_num, s_den);
  };
  return std::max(slack(fpr, n0, fnr, n1), slack(fnr, n1, fpr, n0));
}

TEST(AuditorProperties, KnownGaussianMechanismIsAuditedSoundly) {
  std::mt19937_64 rng(14);
  for (double sens : {1.0, 2.0}) {
    const int d = 6;
    const Eigen::MatrixXd cov = RandomSpd(d, rng);
    ASSERT_OK_AND_ASSIGN(const NoiseModel noise,
                         NoiseModel::FromMoments(Eigen::VectorXd::Zero(d), cov, 0.0));
    // Scale a random direction to Mahalanobis length `sens`.
    Eigen::VectorXd dir = Eigen::VectorXd::Random(d);
    ASSERT_OK_AND_ASSIGN(const double length,
                         Mahalanobis(noise, Eigen::VectorXd::Zero(d), dir));
    const Eigen::VectorXd x0 = Eigen::VectorXd::Random(d);
    const Eigen::VectorXd x1 = x0 + dir * (sens / length);
    AuditConfig cfg;
    cfg.trials = 6000;
    cfg.seed = 30;
    cfg.deltas = {1e-3, 1e-2, 0.1};
    ASSERT_OK_AND_ASSIGN(const AuditReport report,
                         AuditGaussianMechanism(x0, x1, noise, cfg));
    EXPECT_NEAR(report.estimated_sensitivity, sens, 1e-9);
    for (const EpsilonResult& e : report.epsilons) {
      if (e.delta >= GaussianDelta(0.0, sens)) continue;
      ASSERT_OK_AND_ASSIGN(const double truth, GaussianEpsilonForDelta(e.delta, sens));
      const auto best = std::find_if(report.thresholds.begin(), report.thresholds.end(),
                                     [&](const ThresholdResult& t) {
                                       return t.threshold == e.best_threshold;
                                     });
      ASSERT_NE(best, report.thresholds.end());
      const double slack = EpsilonSlack(best->fpr_upper, best->fnr_upper, e.delta,
                                        report.null_trials, report.alternative_trials);
      EXPECT_LE(e.epsilon_audited, truth + slack) << "sens=" << sens << " delta=" << e.delta;
    }
    // The confidence curve stays above the optimal trade-off curve.
    for (const ThresholdResult& t : report.thresholds) {
      const double sigma = std::sqrt(t.fnr_upper * (1 - t.fnr_upper) /
                                     static_cast<double>(report.alternative_trials));
      EXPECT_GE(t.fnr_upper, GaussianTradeoff(t.fpr_upper, sens) - 3.0 * sigma)
          << "sens=" << sens << " theta=" << t.threshold;
    }
  }
}

}  // namespace
}  // namespace secagg_audit

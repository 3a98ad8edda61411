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

// Privacy-loss random variables (PLRVs) for additive-noise mechanisms with a
// box-shaped input set.
//
// For a pair of output distributions (P, Q), the loss L = ln(dP/dQ)(z) with
// z ~ P determines every hockey-stick divergence:
//   E_{e^eps}(P || Q) = E[(1 - e^{eps - L})^+].
// Losses are held on a uniform lattice {k h : |k| <= K} plus explicit atoms
// at +infinity (P-mass where Q vanishes) and -infinity (window underflow).

#ifndef SECAGG_AUDIT_PLRV_ACCOUNTING_H_
#define SECAGG_AUDIT_PLRV_ACCOUNTING_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "secagg_audit/curves.h"
#include "secagg_audit/random.h"

namespace secagg_audit {

// max over events of P(E) - e^eps Q(E) for two mass vectors on the same
// finite support. Both must sum to 1 within 1e-9.
absl::StatusOr<double> HockeyStickDiscrete(const std::vector<double>& p,
                                           const std::vector<double>& q,
                                           double epsilon);

// One-dimensional noise law added to each input coordinate.
struct NoiseSpec {
  enum class Family { kGaussian, kIrwinHall, kGamma };

  Family family = Family::kGaussian;
  // Standard deviation for kGaussian.
  double sigma = 1.0;
  // Number of summed Uniform[-1/2, 1/2] terms for kIrwinHall; shape for
  // kGamma (scale 1).
  int order = 1;

  static NoiseSpec Gaussian(double sigma) {
    return {Family::kGaussian, sigma, 1};
  }
  static NoiseSpec IrwinHall(int n) { return {Family::kIrwinHall, 1.0, n}; }
  static NoiseSpec Gamma(int shape) { return {Family::kGamma, 1.0, shape}; }

  std::string Name() const;
};

absl::Status ValidateNoise(const NoiseSpec& noise);

// Log-density of the noise at y (-infinity outside the support).
double NoiseLogPdf(const NoiseSpec& noise, double y);

// Draws one noise value.
double SampleNoise(const NoiseSpec& noise, Rng& rng);

// Per-coordinate bounds lower[j] <= x_j <= upper[j].
struct CoordinateBox {
  std::vector<double> lower;
  std::vector<double> upper;

  static CoordinateBox Uniform(int dim, double lower, double upper);
  int dim() const { return static_cast<int>(lower.size()); }
};

absl::Status ValidateBox(const CoordinateBox& box);

// The product pair (P, Q) with P = lower + noise and Q = upper + noise
// coordinate-wise. For symmetric log-concave noise this pair dominates the
// mechanism x -> x + noise over the box.
struct DominatingPair {
  CoordinateBox box;
  NoiseSpec noise;
  // False for families that are not symmetric (Gamma). The domination
  // argument then does not formally apply, but the pair is still a useful
  // and commonly used stand-in.
  bool symmetric_hypothesis = true;
  // True when the box corners are feasible inputs (they lie in the declared
  // input support) and the domination argument applies, so the pair's curve
  // is the mechanism's exact optimal curve.
  bool tight = true;
};

// Builds the shifted pair. `input_support` defaults to the box itself.
absl::StatusOr<DominatingPair> BuildDominatingPair(
    const CoordinateBox& box, const NoiseSpec& noise,
    const std::optional<CoordinateBox>& input_support = std::nullopt);

enum class GridRounding {
  // Splits each mass between the two neighbouring lattice points so that the
  // mean loss is preserved. Most accurate for long compositions.
  kSplit,
  // Rounds every loss up to the next lattice point; the resulting deltas are
  // upper bounds (up to quadrature error).
  kUp,
};

struct PlrvGridSpec {
  // The finite lattice spans [-loss_max, loss_max] with `buckets` intervals.
  double loss_max = 64.0;
  int64_t buckets = int64_t{1} << 15;
  GridRounding rounding = GridRounding::kSplit;
  // Quadrature cells over the noise support; 8 Gauss-Legendre nodes each.
  int64_t quadrature_cells = int64_t{1} << 16;
};

absl::Status ValidateGridSpec(const PlrvGridSpec& spec);

// Discretized loss distribution. Index i of masses() holds the mass at loss
// (i - half_width()) * spacing().
class PlrvGrid {
 public:
  double spacing() const { return spacing_; }
  int64_t half_width() const { return half_width_; }
  double LossAt(int64_t index) const {
    return static_cast<double>(index - half_width_) * spacing_;
  }
  const std::vector<double>& masses() const { return masses_; }
  double pos_inf_mass() const { return pos_inf_mass_; }
  double neg_inf_mass() const { return neg_inf_mass_; }
  // Number of independent coordinates summed into this loss.
  int64_t dimension_count() const { return dimension_count_; }

  double FiniteMass() const;
  double TotalMass() const { return FiniteMass() + pos_inf_mass_ + neg_inf_mass_; }
  double Mean() const;  // over the finite part, +inf if pos_inf_mass() > 0

  // Returns a grid with the same lattice.
  static absl::StatusOr<PlrvGrid> FromMasses(double spacing,
                                             int64_t half_width,
                                             std::vector<double> masses,
                                             double pos_inf_mass,
                                             double neg_inf_mass,
                                             int64_t dimension_count = 1);

  // A single atom at `loss` (which may be +-infinity) on the lattice of
  // `spec`; finite losses are placed according to spec.rounding.
  static absl::StatusOr<PlrvGrid> PointMass(double loss,
                                            const PlrvGridSpec& spec);

  bool SameLattice(const PlrvGrid& other) const {
    return spacing_ == other.spacing_ && half_width_ == other.half_width_;
  }

 private:
  friend class PlrvGridBuilder;
  PlrvGrid() = default;

  double spacing_ = 1.0;
  int64_t half_width_ = 0;
  std::vector<double> masses_;
  double pos_inf_mass_ = 0.0;
  double neg_inf_mass_ = 0.0;
  int64_t dimension_count_ = 1;
};

// Accumulates (loss, mass) pairs onto a lattice.
class PlrvGridBuilder {
 public:
  explicit PlrvGridBuilder(const PlrvGridSpec& spec);
  PlrvGridBuilder(double spacing, int64_t half_width, GridRounding rounding);

  // Losses above the window go to +infinity, below it to -infinity.
  void Deposit(double loss, double mass);
  // Adds mass at lattice point k (loss k * spacing), with the same overflow
  // rule.
  void DepositAtLattice(int64_t k, double mass);
  void AddPosInf(double mass) { grid_.pos_inf_mass_ += mass; }
  void AddNegInf(double mass) { grid_.neg_inf_mass_ += mass; }
  void SetDimensionCount(int64_t count) { grid_.dimension_count_ = count; }
  double TotalMass() const { return grid_.TotalMass(); }
  PlrvGrid Build() &&;

 private:
  PlrvGrid grid_;
  GridRounding rounding_;
};

// Loss distribution of coordinate `coordinate` of the pair, by quadrature of
// P's density. Fails with FailedPrecondition if the quadrature covers less
// than 1 - 1e-10 of P's mass; the uncovered remainder is otherwise assigned
// to +infinity.
absl::StatusOr<PlrvGrid> PlrvGrid1d(const DominatingPair& pair,
                                    int coordinate,
                                    const PlrvGridSpec& spec = {});

// Same, for the reversed pair (Q, P): the loss ln(dQ/dP) under Q.
absl::StatusOr<PlrvGrid> PlrvGrid1dReversed(const DominatingPair& pair,
                                            int coordinate,
                                            const PlrvGridSpec& spec = {});

// Law of the sum of two independent losses on the same lattice. +infinity
// absorbs everything it touches; the sum is truncated back to the window.
absl::StatusOr<PlrvGrid> ConvolvePlrv(const PlrvGrid& a, const PlrvGrid& b);

// `count`-fold self-convolution by repeated squaring.
absl::StatusOr<PlrvGrid> SelfConvolvePlrv(const PlrvGrid& grid, int64_t count);

// Loss of the full product pair, convolving per-coordinate grids (identical
// coordinates are computed once and raised to a power).
absl::StatusOr<PlrvGrid> ProductPlrv(const DominatingPair& pair,
                                     const PlrvGridSpec& spec = {});

// E[(1 - e^{eps - L})^+] with the +infinity mass counted in full.
double DeltaFromPlrv(const PlrvGrid& plrv, double epsilon);

// delta(eps) over a grid of epsilons.
absl::StatusOr<LdpCurve> LdpCurveFromPlrv(
    const PlrvGrid& plrv, const std::vector<double>& epsilon_grid);

// The loss ln(dQ/dP) under Q implied by a forward loss grid: mass
// e^{-l} p(l) at -l, with any shortfall from 1 placed at +infinity
// (the part of Q where P vanishes).
PlrvGrid DualPlrv(const PlrvGrid& forward);

// Trade-off function T(alpha) of the test P vs Q, evaluated by sweeping a
// (randomized) threshold on the forward loss. `forward` is ln(dP/dQ) under P
// and `backward` is ln(dQ/dP) under Q, on the same lattice. Each returned
// point holds (threshold, alpha, T(alpha)).
absl::StatusOr<TradeoffCurve> TradeoffFromPlrv(
    const PlrvGrid& forward, const PlrvGrid& backward,
    const std::vector<double>& alpha_grid);

// A loss distribution known only through a sampler.
struct PlrvSampler {
  std::function<double(Rng&)> draw;
  int64_t dimension_count = 1;
};

// Draws z ~ P and returns ln(dP/dQ)(z) for the full product pair.
PlrvSampler MakePairSampler(const DominatingPair& pair);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int64_t samples = 0;
};

// Monte-Carlo estimate of E[(1 - e^{eps - L})^+] from `samples` draws using
// the stream (seed, kMonteCarlo, 0).
absl::StatusOr<MonteCarloEstimate> DeltaFromPlrvSamples(
    const PlrvSampler& sampler, double epsilon, int64_t samples,
    uint64_t seed);

// The two product-noise examples used for comparing the exact curve with a
// Gaussian approximation.
enum class ReferenceCase {
  // Inputs in [0, 4]^d, noise Gamma(n) per coordinate.
  kExponential,
  // Inputs in [-1/2, 1/2]^d, noise = sum of n Uniform[-1/2, 1/2] per
  // coordinate (n <= kMaxIrwinHallTerms).
  kUniform,
};

absl::StatusOr<ReferenceCase> ParseReferenceCase(const std::string& name);
std::string ReferenceCaseName(ReferenceCase which);

// The box and noise of a reference case.
absl::StatusOr<DominatingPair> ReferenceCasePair(ReferenceCase which, int n,
                                                 int d);

// Sensitivity of the Gaussian mechanism with the same input box and the
// per-coordinate noise variance: sqrt(12 d / n) (uniform) or sqrt(16 d / n)
// (exponential).
absl::StatusOr<double> ReferenceCaseGaussianSensitivity(ReferenceCase which,
                                                        int n, int d);

// Exact optimal curve of a reference case via the product loss grid.
absl::StatusOr<LdpCurve> ReferenceCaseCurve(
    ReferenceCase which, int n, int d,
    const std::vector<double>& epsilon_grid, const PlrvGridSpec& spec = {});

}  // namespace secagg_audit

#endif  // SECAGG_AUDIT_PLRV_ACCOUNTING_H_

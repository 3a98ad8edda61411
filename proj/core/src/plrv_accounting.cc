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

#include "secagg_audit/plrv_accounting.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "secagg_audit/special_functions.h"
#include "secagg_audit/status_macros.h"

namespace secagg_audit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr double kGaussNodes[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGaussWeights[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

constexpr double kCoverageTolerance = 1e-10;

// Interval of the noise variable that carries all but a negligible amount of
// its mass.
std::pair<double, double> NoiseWindow(const NoiseSpec& noise) {
  switch (noise.family) {
    case NoiseSpec::Family::kGaussian:
      return {-12.0 * noise.sigma, 12.0 * noise.sigma};
    case NoiseSpec::Family::kIrwinHall:
      return {-0.5 * noise.order, 0.5 * noise.order};
    case NoiseSpec::Family::kGamma: {
      const double n = noise.order;
      return {0.0, n + 40.0 * std::sqrt(n) + 40.0};
    }
  }
  return {0.0, 0.0};
}

// Points where the noise density is not smooth.
std::vector<double> NoiseKnots(const NoiseSpec& noise) {
  std::vector<double> knots;
  switch (noise.family) {
    case NoiseSpec::Family::kGaussian:
      break;
    case NoiseSpec::Family::kIrwinHall:
      for (int k = 0; k <= noise.order; ++k) {
        knots.push_back(-0.5 * noise.order + k);
      }
      break;
    case NoiseSpec::Family::kGamma:
      knots.push_back(0.0);
      break;
  }
  return knots;
}

// Loss grid of ln(p(y) / p(y - shift)) with y ~ noise.
absl::StatusOr<PlrvGrid> LossGridForShift(const NoiseSpec& noise,
                                          double shift,
                                          const PlrvGridSpec& spec) {
  RETURN_IF_ERROR(ValidateNoise(noise));
  RETURN_IF_ERROR(ValidateGridSpec(spec));
  if (shift == 0.0) return PlrvGrid::PointMass(0.0, spec);

  const auto [lo, hi] = NoiseWindow(noise);
  std::vector<double> breaks = {lo, hi};
  for (double knot : NoiseKnots(noise)) {
    for (double candidate : {knot, knot + shift}) {
      if (candidate > lo && candidate < hi) breaks.push_back(candidate);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  PlrvGridBuilder builder(spec);
  const double width = hi - lo;
  double covered = 0.0;
  for (size_t piece = 0; piece + 1 < breaks.size(); ++piece) {
    const double a = breaks[piece];
    const double b = breaks[piece + 1];
    const int64_t cells = std::max<int64_t>(
        1, static_cast<int64_t>(std::ceil(spec.quadrature_cells * (b - a) /
                                          width)));
    const double cell_width = (b - a) / static_cast<double>(cells);
    const double half = 0.5 * cell_width;
    for (int64_t c = 0; c < cells; ++c) {
      const double mid = a + (static_cast<double>(c) + 0.5) * cell_width;
      for (int k = 0; k < 8; ++k) {
        const double y = mid + half * kGaussNodes[k];
        const double log_p = NoiseLogPdf(noise, y);
        if (log_p == -kInf) continue;
        const double mass = kGaussWeights[k] * half * std::exp(log_p);
        covered += mass;
        const double log_q = NoiseLogPdf(noise, y - shift);
        builder.Deposit(log_q == -kInf ? kInf : log_p - log_q, mass);
      }
    }
  }
  if (covered < 1.0 - kCoverageTolerance) {
    return absl::FailedPreconditionError(absl::StrCat(
        "quadrature for ", noise.Name(), " covers only ", covered,
        " of the probability mass"));
  }
  if (covered < 1.0) builder.AddPosInf(1.0 - covered);
  return std::move(builder).Build();
}

}  // namespace

absl::StatusOr<double> HockeyStickDiscrete(const std::vector<double>& p,
                                           const std::vector<double>& q,
                                           double epsilon) {
  if (p.size() != q.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "mass vectors differ in length: ", p.size(), " vs ", q.size()));
  }
  if (std::isnan(epsilon)) return absl::InvalidArgumentError("epsilon is NaN");
  double sum_p = 0.0;
  double sum_q = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0) || !(q[i] >= 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("negative or NaN mass at index ", i));
    }
    sum_p += p[i];
    sum_q += q[i];
  }
  if (std::abs(sum_p - 1.0) > 1e-9 || std::abs(sum_q - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(absl::StrCat(
        "mass vectors must each sum to 1, got ", sum_p, " and ", sum_q));
  }
  const double scale = std::exp(epsilon);
  double total = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (q[i] == 0.0) {
      total += p[i];
    } else {
      total += std::max(0.0, p[i] - scale * q[i]);
    }
  }
  return total;
}

std::string NoiseSpec::Name() const {
  switch (family) {
    case Family::kGaussian:
      return absl::StrCat("gaussian(sigma=", sigma, ")");
    case Family::kIrwinHall:
      return absl::StrCat("irwin-hall(", order, ")");
    case Family::kGamma:
      return absl::StrCat("gamma(", order, ")");
  }
  return "unknown";
}

absl::Status ValidateNoise(const NoiseSpec& noise) {
  switch (noise.family) {
    case NoiseSpec::Family::kGaussian:
      if (!(noise.sigma > 0.0) || !std::isfinite(noise.sigma)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "gaussian noise needs sigma > 0, got ", noise.sigma));
      }
      return absl::OkStatus();
    case NoiseSpec::Family::kIrwinHall:
      if (noise.order < 1 || noise.order > kMaxIrwinHallTerms) {
        return absl::InvalidArgumentError(absl::StrCat(
            "irwin-hall order must be in [1, ", kMaxIrwinHallTerms,
            "], got ", noise.order, "; use a Gaussian approximation beyond"));
      }
      return absl::OkStatus();
    case NoiseSpec::Family::kGamma:
      if (noise.order < 1) {
        return absl::InvalidArgumentError(
            absl::StrCat("gamma shape must be >= 1, got ", noise.order));
      }
      return absl::OkStatus();
  }
  return absl::InvalidArgumentError("unsupported noise family");
}

double NoiseLogPdf(const NoiseSpec& noise, double y) {
  switch (noise.family) {
    case NoiseSpec::Family::kGaussian: {
      const double u = y / noise.sigma;
      return -0.5 * u * u - std::log(noise.sigma) - 0.91893853320467274178;
    }
    case NoiseSpec::Family::kIrwinHall: {
      absl::StatusOr<double> pdf = ShiftedIrwinHallPdf(noise.order, y);
      if (!pdf.ok() || *pdf <= 0.0) return -kInf;
      return std::log(*pdf);
    }
    case NoiseSpec::Family::kGamma:
      return GammaLogPdf(noise.order, y);
  }
  return -kInf;
}

double SampleNoise(const NoiseSpec& noise, Rng& rng) {
  switch (noise.family) {
    case NoiseSpec::Family::kGaussian:
      return std::normal_distribution<double>(0.0, noise.sigma)(rng);
    case NoiseSpec::Family::kIrwinHall: {
      std::uniform_real_distribution<double> uniform(-0.5, 0.5);
      double sum = 0.0;
      for (int k = 0; k < noise.order; ++k) sum += uniform(rng);
      return sum;
    }
    case NoiseSpec::Family::kGamma:
      return std::gamma_distribution<double>(noise.order, 1.0)(rng);
  }
  return 0.0;
}

CoordinateBox CoordinateBox::Uniform(int dim, double lower, double upper) {
  CoordinateBox box;
  box.lower.assign(dim, lower);
  box.upper.assign(dim, upper);
  return box;
}

absl::Status ValidateBox(const CoordinateBox& box) {
  if (box.lower.empty()) {
    return absl::InvalidArgumentError("box has dimension 0");
  }
  if (box.lower.size() != box.upper.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("box bounds differ in length: ", box.lower.size(), " vs ",
                     box.upper.size()));
  }
  for (size_t j = 0; j < box.lower.size(); ++j) {
    if (!std::isfinite(box.lower[j]) || !std::isfinite(box.upper[j]) ||
        box.lower[j] > box.upper[j]) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid box bounds at coordinate ", j, ": [",
                       box.lower[j], ", ", box.upper[j], "]"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<DominatingPair> BuildDominatingPair(
    const CoordinateBox& box, const NoiseSpec& noise,
    const std::optional<CoordinateBox>& input_support) {
  RETURN_IF_ERROR(ValidateBox(box));
  RETURN_IF_ERROR(ValidateNoise(noise));
  DominatingPair pair;
  pair.box = box;
  pair.noise = noise;
  pair.symmetric_hypothesis = noise.family != NoiseSpec::Family::kGamma;
  bool corners_feasible = true;
  if (input_support.has_value()) {
    RETURN_IF_ERROR(ValidateBox(*input_support));
    if (input_support->dim() != box.dim()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "input support has dimension ", input_support->dim(),
          " but the box has ", box.dim()));
    }
    for (int j = 0; j < box.dim(); ++j) {
      for (double corner : {box.lower[j], box.upper[j]}) {
        if (corner < input_support->lower[j] ||
            corner > input_support->upper[j]) {
          corners_feasible = false;
        }
      }
    }
  }
  pair.tight = corners_feasible && pair.symmetric_hypothesis;
  return pair;
}

absl::Status ValidateGridSpec(const PlrvGridSpec& spec) {
  if (!(spec.loss_max > 0.0) || !std::isfinite(spec.loss_max)) {
    return absl::InvalidArgumentError(
        absl::StrCat("loss_max must be positive, got ", spec.loss_max));
  }
  if (spec.buckets < 2 || spec.buckets % 2 != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bucket count must be even and >= 2, got ", spec.buckets));
  }
  if (spec.quadrature_cells < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "quadrature cell count must be positive, got ", spec.quadrature_cells));
  }
  return absl::OkStatus();
}

double PlrvGrid::FiniteMass() const {
  double total = 0.0;
  for (double m : masses_) total += m;
  return total;
}

double PlrvGrid::Mean() const {
  if (pos_inf_mass_ > 0.0) return kInf;
  double weighted = 0.0;
  double total = 0.0;
  for (size_t i = 0; i < masses_.size(); ++i) {
    weighted += masses_[i] * LossAt(static_cast<int64_t>(i));
    total += masses_[i];
  }
  return total > 0.0 ? weighted / total : 0.0;
}

absl::StatusOr<PlrvGrid> PlrvGrid::FromMasses(double spacing,
                                              int64_t half_width,
                                              std::vector<double> masses,
                                              double pos_inf_mass,
                                              double neg_inf_mass,
                                              int64_t dimension_count) {
  if (!(spacing > 0.0) || half_width < 1 ||
      masses.size() != static_cast<size_t>(2 * half_width + 1)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "inconsistent lattice: spacing ", spacing, ", half width ",
        half_width, ", ", masses.size(), " masses"));
  }
  double total = pos_inf_mass + neg_inf_mass;
  for (double m : masses) {
    if (!(m >= 0.0)) {
      return absl::InvalidArgumentError("grid masses must be nonnegative");
    }
    total += m;
  }
  if (!(pos_inf_mass >= 0.0) || !(neg_inf_mass >= 0.0) ||
      std::abs(total - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid masses must sum to 1, got ", total));
  }
  PlrvGrid grid;
  grid.spacing_ = spacing;
  grid.half_width_ = half_width;
  grid.masses_ = std::move(masses);
  grid.pos_inf_mass_ = pos_inf_mass;
  grid.neg_inf_mass_ = neg_inf_mass;
  grid.dimension_count_ = dimension_count;
  return grid;
}

absl::StatusOr<PlrvGrid> PlrvGrid::PointMass(double loss,
                                             const PlrvGridSpec& spec) {
  RETURN_IF_ERROR(ValidateGridSpec(spec));
  if (std::isnan(loss)) return absl::InvalidArgumentError("loss is NaN");
  PlrvGridBuilder builder(spec);
  builder.Deposit(loss, 1.0);
  return std::move(builder).Build();
}

PlrvGridBuilder::PlrvGridBuilder(const PlrvGridSpec& spec)
    : PlrvGridBuilder(2.0 * spec.loss_max / static_cast<double>(spec.buckets),
                      spec.buckets / 2, spec.rounding) {}

PlrvGridBuilder::PlrvGridBuilder(double spacing, int64_t half_width,
                                 GridRounding rounding)
    : rounding_(rounding) {
  grid_.spacing_ = spacing;
  grid_.half_width_ = half_width;
  grid_.masses_.assign(2 * half_width + 1, 0.0);
}

void PlrvGridBuilder::Deposit(double loss, double mass) {
  const double x = loss / grid_.spacing_;
  const double k_max = static_cast<double>(grid_.half_width_);
  if (x > k_max) {
    grid_.pos_inf_mass_ += mass;
    return;
  }
  if (x < -k_max) {
    grid_.neg_inf_mass_ += mass;
    return;
  }
  if (rounding_ == GridRounding::kUp) {
    const int64_t k = static_cast<int64_t>(std::ceil(x));
    grid_.masses_[k + grid_.half_width_] += mass;
    return;
  }
  const double k = std::floor(x);
  const double t = x - k;
  const int64_t index = static_cast<int64_t>(k) + grid_.half_width_;
  grid_.masses_[index] += mass * (1.0 - t);
  if (t > 0.0) grid_.masses_[index + 1] += mass * t;
}

void PlrvGridBuilder::DepositAtLattice(int64_t k, double mass) {
  if (k > grid_.half_width_) {
    grid_.pos_inf_mass_ += mass;
  } else if (k < -grid_.half_width_) {
    grid_.neg_inf_mass_ += mass;
  } else {
    grid_.masses_[k + grid_.half_width_] += mass;
  }
}

PlrvGrid PlrvGridBuilder::Build() && { return std::move(grid_); }

absl::StatusOr<PlrvGrid> PlrvGrid1d(const DominatingPair& pair,
                                    int coordinate,
                                    const PlrvGridSpec& spec) {
  if (coordinate < 0 || coordinate >= pair.box.dim()) {
    return absl::OutOfRangeError(absl::StrCat(
        "coordinate ", coordinate, " outside [0, ", pair.box.dim(), ")"));
  }
  return LossGridForShift(
      pair.noise, pair.box.upper[coordinate] - pair.box.lower[coordinate],
      spec);
}

absl::StatusOr<PlrvGrid> PlrvGrid1dReversed(const DominatingPair& pair,
                                            int coordinate,
                                            const PlrvGridSpec& spec) {
  if (coordinate < 0 || coordinate >= pair.box.dim()) {
    return absl::OutOfRangeError(absl::StrCat(
        "coordinate ", coordinate, " outside [0, ", pair.box.dim(), ")"));
  }
  return LossGridForShift(
      pair.noise, pair.box.lower[coordinate] - pair.box.upper[coordinate],
      spec);
}

absl::StatusOr<PlrvGrid> ProductPlrv(const DominatingPair& pair,
                                     const PlrvGridSpec& spec) {
  RETURN_IF_ERROR(ValidateBox(pair.box));
  // Coordinates with equal width have identical loss laws.
  std::map<double, int64_t> widths;
  for (int j = 0; j < pair.box.dim(); ++j) {
    ++widths[pair.box.upper[j] - pair.box.lower[j]];
  }
  std::optional<PlrvGrid> result;
  for (const auto& [width, count] : widths) {
    ASSIGN_OR_RETURN(PlrvGrid one, LossGridForShift(pair.noise, width, spec));
    ASSIGN_OR_RETURN(PlrvGrid power, SelfConvolvePlrv(one, count));
    if (result.has_value()) {
      ASSIGN_OR_RETURN(result, ConvolvePlrv(*result, power));
    } else {
      result = std::move(power);
    }
  }
  return *std::move(result);
}

double DeltaFromPlrv(const PlrvGrid& plrv, double epsilon) {
  long double total = plrv.pos_inf_mass();
  const std::vector<double>& masses = plrv.masses();
  for (size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] == 0.0) continue;
    const double loss = plrv.LossAt(static_cast<int64_t>(i));
    if (loss > epsilon) total += masses[i] * -std::expm1(epsilon - loss);
  }
  return std::clamp(static_cast<double>(total), 0.0, 1.0);
}

absl::StatusOr<LdpCurve> LdpCurveFromPlrv(
    const PlrvGrid& plrv, const std::vector<double>& epsilon_grid) {
  LdpCurve curve;
  curve.points.reserve(epsilon_grid.size());
  for (double eps : epsilon_grid) {
    curve.points.push_back({eps, DeltaFromPlrv(plrv, eps)});
  }
  RETURN_IF_ERROR(ValidateLdpCurve(curve, 1e-12));
  return curve;
}

PlrvGrid DualPlrv(const PlrvGrid& forward) {
  // Negated lattice points are lattice points, so deposits land exactly.
  PlrvGridBuilder builder(forward.spacing(), forward.half_width(),
                          GridRounding::kSplit);
  const std::vector<double>& masses = forward.masses();
  double total = 0.0;
  for (size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] == 0.0) continue;
    const double loss = forward.LossAt(static_cast<int64_t>(i));
    const double q = masses[i] * std::exp(-loss);
    builder.DepositAtLattice(forward.half_width() - static_cast<int64_t>(i), q);
    total += q;
  }
  builder.AddPosInf(std::max(0.0, 1.0 - total));
  builder.SetDimensionCount(forward.dimension_count());
  return std::move(builder).Build();
}

absl::StatusOr<TradeoffCurve> TradeoffFromPlrv(
    const PlrvGrid& forward, const PlrvGrid& backward,
    const std::vector<double>& alpha_grid) {
  if (!forward.SameLattice(backward)) {
    return absl::InvalidArgumentError(
        "forward and backward losses must share a lattice");
  }
  // Atoms of the forward loss in increasing order: -inf, the lattice, +inf.
  // q holds the Q-probability of each forward loss value, which is the
  // backward mass at the negated loss.
  const std::vector<double>& fwd = forward.masses();
  const std::vector<double>& bwd = backward.masses();
  const size_t lattice = fwd.size();
  const size_t atoms = lattice + 2;
  std::vector<double> p(atoms);
  std::vector<double> q(atoms);
  std::vector<double> loss(atoms);
  p[0] = forward.neg_inf_mass();
  q[0] = backward.pos_inf_mass();
  loss[0] = -kInf;
  for (size_t i = 0; i < lattice; ++i) {
    p[i + 1] = fwd[i];
    q[i + 1] = bwd[lattice - 1 - i];
    loss[i + 1] = forward.LossAt(static_cast<int64_t>(i));
  }
  p[atoms - 1] = forward.pos_inf_mass();
  q[atoms - 1] = backward.neg_inf_mass();
  loss[atoms - 1] = kInf;

  // p_below[t] = P(L < loss[t]); q_above[t] = Q(L > loss[t]).
  std::vector<double> p_below(atoms + 1, 0.0);
  for (size_t t = 0; t < atoms; ++t) p_below[t + 1] = p_below[t] + p[t];
  std::vector<double> q_above(atoms, 0.0);
  for (size_t t = atoms - 1; t > 0; --t) q_above[t - 1] = q_above[t] + q[t];

  TradeoffCurve curve;
  curve.points.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("alpha must lie in [0, 1], got ", alpha));
    }
    // First atom t with P(L <= loss[t]) > alpha; reject (declare "not P")
    // every atom below it, and t itself with probability gamma. Atoms with
    // no P-mass below t are rejected for free.
    const auto it =
        std::upper_bound(p_below.begin() + 1, p_below.end(), alpha);
    size_t t;
    double gamma;
    if (it == p_below.end()) {
      t = atoms - 1;
      gamma = 1.0;
    } else {
      t = static_cast<size_t>(it - p_below.begin()) - 1;
      gamma = std::clamp((alpha - p_below[t]) / p[t], 0.0, 1.0);
    }
    const double fnr = std::clamp(q_above[t] + (1.0 - gamma) * q[t], 0.0, 1.0);
    curve.points.push_back({loss[t], alpha, fnr});
  }
  return curve;
}

PlrvSampler MakePairSampler(const DominatingPair& pair) {
  PlrvSampler sampler;
  sampler.dimension_count = pair.box.dim();
  sampler.draw = [pair](Rng& rng) {
    double total = 0.0;
    for (int j = 0; j < pair.box.dim(); ++j) {
      const double y = SampleNoise(pair.noise, rng);
      const double shift = pair.box.upper[j] - pair.box.lower[j];
      const double log_q = NoiseLogPdf(pair.noise, y - shift);
      if (log_q == -kInf) return kInf;
      total += NoiseLogPdf(pair.noise, y) - log_q;
    }
    return total;
  };
  return sampler;
}

absl::StatusOr<MonteCarloEstimate> DeltaFromPlrvSamples(
    const PlrvSampler& sampler, double epsilon, int64_t samples,
    uint64_t seed) {
  if (samples < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 samples, got ", samples));
  }
  if (!sampler.draw) return absl::InvalidArgumentError("sampler is empty");
  Rng rng = MakeRng(seed, Stream::kMonteCarlo, 0);
  // Welford running moments.
  double mean = 0.0;
  double m2 = 0.0;
  for (int64_t i = 0; i < samples; ++i) {
    const double loss = sampler.draw(rng);
    const double value = loss > epsilon ? -std::expm1(epsilon - loss) : 0.0;
    const double delta = value - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (value - mean);
  }
  MonteCarloEstimate estimate;
  estimate.mean = mean;
  estimate.samples = samples;
  estimate.standard_error =
      std::sqrt(m2 / static_cast<double>(samples - 1) /
                static_cast<double>(samples));
  return estimate;
}

absl::StatusOr<ReferenceCase> ParseReferenceCase(const std::string& name) {
  if (name == "uniform") return ReferenceCase::kUniform;
  if (name == "exponential") return ReferenceCase::kExponential;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown case '", name, "'; expected 'uniform' or 'exponential'"));
}

std::string ReferenceCaseName(ReferenceCase which) {
  return which == ReferenceCase::kUniform ? "uniform" : "exponential";
}

absl::StatusOr<DominatingPair> ReferenceCasePair(ReferenceCase which, int n,
                                                 int d) {
  if (n < 1 || d < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("n and d must be positive, got n=", n, ", d=", d));
  }
  if (which == ReferenceCase::kUniform) {
    return BuildDominatingPair(CoordinateBox::Uniform(d, -0.5, 0.5),
                               NoiseSpec::IrwinHall(n));
  }
  return BuildDominatingPair(CoordinateBox::Uniform(d, 0.0, 4.0),
                             NoiseSpec::Gamma(n));
}

absl::StatusOr<double> ReferenceCaseGaussianSensitivity(ReferenceCase which,
                                                        int n, int d) {
  if (n < 1 || d < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("n and d must be positive, got n=", n, ", d=", d));
  }
  // Box width w per coordinate and per-coordinate noise variance v give
  // sqrt(d w^2 / v): w = 1, v = n / 12 (uniform); w = 4, v = n (exponential).
  const double ratio = static_cast<double>(d) / static_cast<double>(n);
  return which == ReferenceCase::kUniform ? std::sqrt(12.0 * ratio)
                                          : std::sqrt(16.0 * ratio);
}

absl::StatusOr<LdpCurve> ReferenceCaseCurve(
    ReferenceCase which, int n, int d,
    const std::vector<double>& epsilon_grid, const PlrvGridSpec& spec) {
  ASSIGN_OR_RETURN(DominatingPair pair, ReferenceCasePair(which, n, d));
  ASSIGN_OR_RETURN(PlrvGrid plrv, ProductPlrv(pair, spec));
  return LdpCurveFromPlrv(plrv, epsilon_grid);
}

}  // namespace secagg_audit

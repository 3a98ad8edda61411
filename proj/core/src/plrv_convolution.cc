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

// Convolution of loss grids. Small supports are convolved directly; larger
// ones go through a real-to-complex FFT.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstring>
#include <mutex>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "secagg_audit/plrv_accounting.h"
#include "secagg_audit/status_macros.h"

namespace secagg_audit {
namespace {

// Direct summation is used while len(a) * len(b) stays below this.
constexpr int64_t kDirectWorkLimit = int64_t{1} << 22;

// FFTW's planner is not reentrant.
std::mutex& FftwPlannerMutex() {
  static std::mutex mu;
  return mu;
}

struct Support {
  int64_t first = 0;
  int64_t last = -1;  // empty when last < first
  int64_t size() const { return last - first + 1; }
};

Support NonzeroSupport(const std::vector<double>& masses) {
  Support s;
  int64_t n = static_cast<int64_t>(masses.size());
  while (s.first < n && masses[s.first] == 0.0) ++s.first;
  s.last = n - 1;
  while (s.last >= s.first && masses[s.last] == 0.0) --s.last;
  return s;
}

std::vector<double> DirectConvolution(const double* a, int64_t na,
                                      const double* b, int64_t nb) {
  std::vector<double> out(na + nb - 1, 0.0);
  for (int64_t i = 0; i < na; ++i) {
    if (a[i] == 0.0) continue;
    const double ai = a[i];
    double* row = out.data() + i;
    for (int64_t j = 0; j < nb; ++j) row[j] += ai * b[j];
  }
  return out;
}

std::vector<double> FftConvolution(const double* a, int64_t na,
                                   const double* b, int64_t nb) {
  const int64_t out_size = na + nb - 1;
  int64_t n = 1;
  while (n < out_size) n <<= 1;
  const int64_t bins = n / 2 + 1;

  double* buf_a = fftw_alloc_real(n);
  double* buf_b = fftw_alloc_real(n);
  fftw_complex* spec_a = fftw_alloc_complex(bins);
  fftw_complex* spec_b = fftw_alloc_complex(bins);
  fftw_plan forward_a;
  fftw_plan forward_b;
  fftw_plan inverse;
  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    forward_a = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf_a, spec_a,
                                     FFTW_ESTIMATE);
    forward_b = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf_b, spec_b,
                                     FFTW_ESTIMATE);
    inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_a, buf_a,
                                   FFTW_ESTIMATE);
  }
  std::fill(buf_a, buf_a + n, 0.0);
  std::fill(buf_b, buf_b + n, 0.0);
  std::memcpy(buf_a, a, sizeof(double) * na);
  std::memcpy(buf_b, b, sizeof(double) * nb);
  fftw_execute(forward_a);
  fftw_execute(forward_b);
  for (int64_t k = 0; k < bins; ++k) {
    const double re = spec_a[k][0] * spec_b[k][0] - spec_a[k][1] * spec_b[k][1];
    const double im = spec_a[k][0] * spec_b[k][1] + spec_a[k][1] * spec_b[k][0];
    spec_a[k][0] = re;
    spec_a[k][1] = im;
  }
  fftw_execute(inverse);
  std::vector<double> out(out_size);
  const double scale = 1.0 / static_cast<double>(n);
  for (int64_t i = 0; i < out_size; ++i) {
    // Round-off can leave tiny negative values where the true mass is 0.
    out[i] = std::max(0.0, buf_a[i] * scale);
  }
  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    fftw_destroy_plan(forward_a);
    fftw_destroy_plan(forward_b);
    fftw_destroy_plan(inverse);
  }
  fftw_free(buf_a);
  fftw_free(buf_b);
  fftw_free(spec_a);
  fftw_free(spec_b);
  return out;
}

}  // namespace

absl::StatusOr<PlrvGrid> ConvolvePlrv(const PlrvGrid& a, const PlrvGrid& b) {
  if (!a.SameLattice(b)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cannot convolve grids on different lattices (spacing ", a.spacing(),
        " vs ", b.spacing(), ", half width ", a.half_width(), " vs ",
        b.half_width(), ")"));
  }
  const int64_t half = a.half_width();
  const double a_fin = a.FiniteMass();
  const double b_fin = b.FiniteMass();
  const double a_total = a_fin + a.pos_inf_mass() + a.neg_inf_mass();
  const double b_total = b_fin + b.pos_inf_mass() + b.neg_inf_mass();

  PlrvGridBuilder builder(a.spacing(), half, GridRounding::kSplit);
  // Any +inf summand makes the sum +inf.
  builder.AddPosInf(a.pos_inf_mass() * b_total + b.pos_inf_mass() * a_total -
                    a.pos_inf_mass() * b.pos_inf_mass());
  // -inf with anything finite or -inf stays -inf.
  builder.AddNegInf(a.neg_inf_mass() * (b_fin + b.neg_inf_mass()) +
                    a_fin * b.neg_inf_mass());

  const Support sa = NonzeroSupport(a.masses());
  const Support sb = NonzeroSupport(b.masses());
  if (sa.size() > 0 && sb.size() > 0) {
    const double* pa = a.masses().data() + sa.first;
    const double* pb = b.masses().data() + sb.first;
    const std::vector<double> sum =
        sa.size() * sb.size() <= kDirectWorkLimit
            ? DirectConvolution(pa, sa.size(), pb, sb.size())
            : FftConvolution(pa, sa.size(), pb, sb.size());
    // Entry r of `sum` sits at lattice offset (sa.first + sb.first + r - 2K),
    // which is grid index (sa.first + sb.first + r - K).
    const int64_t base = sa.first + sb.first - half;
    for (size_t r = 0; r < sum.size(); ++r) {
      if (sum[r] == 0.0) continue;
      builder.DepositAtLattice(base + static_cast<int64_t>(r) - half, sum[r]);
    }
  }
  builder.SetDimensionCount(a.dimension_count() + b.dimension_count());
  return std::move(builder).Build();
}

absl::StatusOr<PlrvGrid> SelfConvolvePlrv(const PlrvGrid& grid,
                                          int64_t count) {
  if (count < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("self-convolution count must be >= 1, got ", count));
  }
  std::optional<PlrvGrid> result;
  PlrvGrid base = grid;
  while (true) {
    if (count & 1) {
      if (result.has_value()) {
        ASSIGN_OR_RETURN(result, ConvolvePlrv(*result, base));
      } else {
        result = base;
      }
    }
    count >>= 1;
    if (count == 0) break;
    ASSIGN_OR_RETURN(base, ConvolvePlrv(base, base));
  }
  return *std::move(result);
}

}  // namespace secagg_audit

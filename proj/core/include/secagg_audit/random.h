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

// Seed derivation for reproducible, schedule-independent randomness.
//
// A run owns one 64-bit master seed. Every stochastic consumer asks for its
// own stream with DeriveSeed(master, stream, index), so draw k of a stream
// depends only on (master, stream, k) and never on evaluation order.

#ifndef SECAGG_AUDIT_RANDOM_H_
#define SECAGG_AUDIT_RANDOM_H_

#include <cstdint>
#include <random>

namespace secagg_audit {

using Rng = std::mt19937_64;

// Stream tags. New consumers append new values; existing values must not
// change or previously recorded runs stop replaying.
enum class Stream : uint64_t {
  kPopulation = 1,
  kPairSearch = 2,
  kTrials = 3,
  kPilot = 4,
  kModelInit = 5,
  kSynthData = 6,
  kDiagnostics = 7,
  kMonteCarlo = 8,
  kTraining = 9,
  kPartition = 10,
};

// SplitMix64 finalizer.
uint64_t MixBits(uint64_t x);

// Seed for item `index` of `stream` under `master`.
uint64_t DeriveSeed(uint64_t master, Stream stream, uint64_t index);

// Generator seeded from DeriveSeed(master, stream, index).
Rng MakeRng(uint64_t master, Stream stream, uint64_t index);

}  // namespace secagg_audit

#endif  // SECAGG_AUDIT_RANDOM_H_

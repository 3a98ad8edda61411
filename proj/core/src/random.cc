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

#include "secagg_audit/random.h"

namespace secagg_audit {

uint64_t MixBits(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t master, Stream stream, uint64_t index) {
  // Chain the three inputs through the mixer so that nearby (stream, index)
  // pairs land on unrelated seeds.
  uint64_t h = MixBits(master);
  h = MixBits(h ^ static_cast<uint64_t>(stream));
  return MixBits(h ^ index);
}

Rng MakeRng(uint64_t master, Stream stream, uint64_t index) {
  std::seed_seq seq{DeriveSeed(master, stream, index),
                    DeriveSeed(master, stream, index) >> 32};
  return Rng(seq);
}

}  // namespace secagg_audit

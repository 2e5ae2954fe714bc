// Copyright 2026 The heis-hsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace heis {

/// All randomness is injected by callers through this engine type.
using Rng = std::mt19937_64;

/// Independent deterministic stream for (seed, stream index); used to give every trial
/// its own generator so that results do not depend on execution order.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0, 1) built from the top 53 bits of one engine draw. Unlike
/// std::uniform_real_distribution this is identical across standard libraries.
double uniform01(Rng& rng);

bool bernoulli(Rng& rng, double probability);

/// Draws an index with probability proportional to weights[k].
std::size_t sample_index(std::span<const double> weights, Rng& rng);

}  // namespace heis

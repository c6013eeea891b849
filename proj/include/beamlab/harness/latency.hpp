// SPDX-License-Identifier: Apache-2.0
//
// beamlab - phased-array beam synthesis and benchmarking toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMLAB_HARNESS_LATENCY_HPP
#define BEAMLAB_HARNESS_LATENCY_HPP

#include "beamlab/harness/evaluate.hpp"
#include "beamlab/neural/trainer.hpp"

#include <cstdint>
#include <string>

namespace beamlab
{
    // CPU model, logical core count and compiler
    std::string hardware_descriptor();

    // Wall-clock time of single-BPA predictions (one forward pass each, after warm-up).
    // Queries are drawn from the default sector. Throws std::invalid_argument for trials == 0.
    LatencyStats measure_inference_latency(const nn::PhaseRegressor &regressor, std::size_t trials,
                                           std::uint64_t seed = 0, std::size_t warmup = 100);
}

#endif

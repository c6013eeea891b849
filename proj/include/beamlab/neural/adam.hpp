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

#ifndef BEAMLAB_NEURAL_ADAM_HPP
#define BEAMLAB_NEURAL_ADAM_HPP

#include "beamlab/neural/mlp.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace beamlab::nn
{
    struct AdamConfig
    {
        double learning_rate = 0.0005;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double epsilon = 1e-8;
    };

    // First and second moment estimates, one block per parameter block
    struct AdamState
    {
        std::vector<Eigen::VectorXd> m, v;

        static AdamState zeros(const std::vector<std::size_t> &block_sizes);
    };

    // Bias-corrected Adam update for step t (1-based):
    //   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
    //   p <- p - lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
    // Throws std::invalid_argument when the block layouts disagree or t < 1.
    void adam_step(std::span<const std::span<double>> params, const Gradients &grads, AdamState &state, long t,
                   const AdamConfig &cfg);
}

#endif

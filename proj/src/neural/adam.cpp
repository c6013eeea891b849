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

#include "beamlab/neural/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace beamlab::nn
{
    AdamState AdamState::zeros(const std::vector<std::size_t> &block_sizes)
    {
        AdamState s;
        for (auto n : block_sizes)
        {
            s.m.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
            s.v.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
        }
        return s;
    }

    void adam_step(std::span<const std::span<double>> params, const Gradients &grads, AdamState &state, long t,
                   const AdamConfig &cfg)
    {
        if (t < 1)
            throw std::invalid_argument("Adam step index starts at 1.");
        if (grads.blocks.size() != params.size() || state.m.size() != params.size() ||
            state.v.size() != params.size())
            throw std::invalid_argument("Adam parameter, gradient and state blocks differ in count.");

        const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));

        for (std::size_t b = 0; b < params.size(); ++b)
        {
            const auto n = static_cast<Eigen::Index>(params[b].size());
            if (grads.blocks[b].size() != n || state.m[b].size() != n || state.v[b].size() != n)
                throw std::invalid_argument("Adam block " + std::to_string(b) + " has mismatched dimensions.");

            Eigen::Map<Eigen::VectorXd> p(params[b].data(), n);
            const auto &g = grads.blocks[b];
            state.m[b] = cfg.beta1 * state.m[b] + (1.0 - cfg.beta1) * g;
            state.v[b] = cfg.beta2 * state.v[b] + (1.0 - cfg.beta2) * g.cwiseAbs2();
            p.array() -= cfg.learning_rate * (state.m[b].array() / c1) / ((state.v[b].array() / c2).sqrt() + cfg.epsilon);
        }
    }
}

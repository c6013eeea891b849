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

#ifndef BEAMLAB_NEURAL_ACTIVATIONS_HPP
#define BEAMLAB_NEURAL_ACTIVATIONS_HPP

#include <string_view>

namespace beamlab::nn
{
    enum class Activation
    {
        snake,    // x + sin^2(a x) / a
        tsigmoid, // tanh(x)
        linear
    };

    std::string_view to_string(Activation act);
    Activation parse_activation(std::string_view name);

    struct ActivationValue
    {
        double y;
        double dy_dx;
        double dy_da; // zero for activations without a frequency parameter
    };

    // Throws std::invalid_argument for a <= 0
    ActivationValue snake(double x, double a);

    ActivationValue tsigmoid(double x);
}

#endif

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

#include "beamlab/neural/activations.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace beamlab::nn
{
    std::string_view to_string(Activation act)
    {
        switch (act)
        {
        case Activation::snake:
            return "snake";
        case Activation::tsigmoid:
            return "tsigmoid";
        case Activation::linear:
            return "linear";
        }
        return "unknown";
    }

    Activation parse_activation(std::string_view name)
    {
        if (name == "snake")
            return Activation::snake;
        if (name == "tsigmoid")
            return Activation::tsigmoid;
        if (name == "linear")
            return Activation::linear;
        throw std::invalid_argument("Unknown activation '" + std::string(name) + "'.");
    }

    ActivationValue snake(double x, double a)
    {
        if (!(a > 0.0))
            throw std::invalid_argument("Snake frequency must be positive.");
        const double s = std::sin(a * x);
        const double s2 = std::sin(2.0 * a * x);
        return {x + s * s / a, 1.0 + s2, x * s2 / a - s * s / (a * a)};
    }

    ActivationValue tsigmoid(double x)
    {
        const double y = std::tanh(x);
        return {y, 1.0 - y * y, 0.0};
    }
}

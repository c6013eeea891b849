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

#ifndef BEAMLAB_METRICS_HPP
#define BEAMLAB_METRICS_HPP

#include "beamlab/angles.hpp"
#include "beamlab/array.hpp"

#include <span>
#include <utility>
#include <vector>

namespace beamlab
{
    struct MetricSample
    {
        BeamPointingAngle target;
        BeamPointingAngle achieved;
        double central_angle_deg = 0.0;
        double cosine_similarity = 0.0;
    };

    // Great-circle angle between two pointing directions, degrees in [0, 180].
    // Haversine form, so equal directions give exactly 0.
    double central_angle(const BeamPointingAngle &a, const BeamPointingAngle &b);

    // Normalized inner product of two magnitude vectors.
    // Throws if the lengths differ or either vector is all zero.
    double cosine_similarity(std::span<const double> f1, std::span<const double> f2);

    // Patterns must share a grid layout
    double cosine_similarity(const RadiationPattern &f1, const RadiationPattern &f2);

    // Linear-interpolation quantiles on the sorted values (h = (n - 1) p).
    // `percentiles` are in [0, 100]. Throws on empty input.
    std::vector<double> quantiles(std::span<const double> values, std::span<const double> percentiles);

    // Sorted (value, fraction <= value) steps, one per distinct value; the last fraction is 1
    std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> values);
}

#endif

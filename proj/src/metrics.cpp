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

#include "beamlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beamlab
{
    double central_angle(const BeamPointingAngle &a, const BeamPointingAngle &b)
    {
        const double ta = deg_to_rad(a.el_deg()), tb = deg_to_rad(b.el_deg());
        const double dphi = deg_to_rad(a.az_deg() - b.az_deg());
        // haversine form, exact zero for equal inputs where acos loses ~1e-8 rad
        const double s1 = std::sin((ta - tb) / 2.0), s2 = std::sin(dphi / 2.0);
        const double h = std::clamp(s1 * s1 + std::sin(ta) * std::sin(tb) * s2 * s2, 0.0, 1.0);
        return rad_to_deg(2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h)));
    }

    double cosine_similarity(std::span<const double> f1, std::span<const double> f2)
    {
        if (f1.size() != f2.size())
            throw std::invalid_argument("Cosine similarity needs vectors of equal length.");
        double dot = 0.0, n1 = 0.0, n2 = 0.0;
        for (std::size_t i = 0; i < f1.size(); ++i)
        {
            dot += f1[i] * f2[i];
            n1 += f1[i] * f1[i];
            n2 += f2[i] * f2[i];
        }
        if (!(n1 > 0.0) || !(n2 > 0.0))
            throw std::invalid_argument("Cosine similarity is undefined for an all-zero pattern.");
        return dot / (std::sqrt(n1) * std::sqrt(n2));
    }

    double cosine_similarity(const RadiationPattern &f1, const RadiationPattern &f2)
    {
        if (!f1.grid->same_layout(*f2.grid))
            throw std::invalid_argument("Patterns are sampled on different grids.");
        return cosine_similarity(std::span<const double>(f1.magnitude), std::span<const double>(f2.magnitude));
    }

    std::vector<double> quantiles(std::span<const double> values, std::span<const double> percentiles)
    {
        if (values.empty())
            throw std::invalid_argument("Quantiles of an empty sample are undefined.");
        std::vector<double> sorted(values.begin(), values.end());
        std::sort(sorted.begin(), sorted.end());

        std::vector<double> out;
        out.reserve(percentiles.size());
        const double last = static_cast<double>(sorted.size() - 1);
        for (double p : percentiles)
        {
            if (!(p >= 0.0 && p <= 100.0))
                throw std::invalid_argument("Percentiles must lie in [0, 100].");
            const double h = last * p / 100.0;
            const auto lo = static_cast<std::size_t>(std::floor(h));
            const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
            const double frac = h - static_cast<double>(lo);
            out.push_back(sorted[lo] + frac * (sorted[hi] - sorted[lo]));
        }
        return out;
    }

    std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> values)
    {
        if (values.empty())
            throw std::invalid_argument("CDF of an empty sample is undefined.");
        std::vector<double> sorted(values.begin(), values.end());
        std::sort(sorted.begin(), sorted.end());

        std::vector<std::pair<double, double>> cdf;
        const double n = static_cast<double>(sorted.size());
        for (std::size_t i = 0; i < sorted.size(); ++i)
        {
            if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i])
                continue;
            cdf.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
        }
        cdf.back().second = 1.0;
        return cdf;
    }
}

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

#include "beamlab/codebook.hpp"
#include "beamlab/metrics.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace beamlab
{
    bool is_power_of_two(long long v)
    {
        return v > 0 && (v & (v - 1)) == 0;
    }

    double linear_codeword_phase(int n, int k, int K, int bits)
    {
        if (!is_power_of_two(K))
            throw std::invalid_argument("Codebook size must be a power of two, got " + std::to_string(K) + ".");
        if (bits < 1 || bits > 16)
            throw std::invalid_argument("Codebook resolution must be between 1 and 16 bits.");
        if (n < 0)
            throw std::invalid_argument("Element index must be non-negative.");
        if (k < 0 || k >= K)
            throw std::invalid_argument("Beam index must lie in [0, K).");

        // mod(k - 1 + K/2, K), normalized into [0, K)
        std::int64_t m = (static_cast<std::int64_t>(k) - 1 + K / 2) % K;
        if (m < 0)
            m += K;

        // ceil(n * m / (K / 2^b)) == ceil(n * m * 2^b / K), exact in integers
        const std::int64_t levels = std::int64_t{1} << bits;
        const std::int64_t num = static_cast<std::int64_t>(n) * m * levels;
        const std::int64_t q = (num + K - 1) / K;

        return wrap_phase_deg(360.0 / static_cast<double>(levels) * static_cast<double>(q % levels));
    }

    Codebook build_planar_codebook(const ArrayGeometry &geom, int K, int bits)
    {
        if (!geom.layout())
            throw std::invalid_argument("Planar codebooks need a planar array geometry.");
        const auto side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(K))));
        if (K < 1 || side * side != K || !is_power_of_two(side))
            throw std::invalid_argument("Codebook size must be the square of a power of two, got " +
                                        std::to_string(K) + ".");

        const PlanarLayout &layout = *geom.layout();
        Codebook cb;
        cb.size = K;
        cb.bits = bits;
        cb.layout = layout;
        cb.codewords.reserve(static_cast<std::size_t>(K));

        std::vector<double> phases(geom.size());
        for (int kx = 0; kx < side; ++kx)
            for (int ky = 0; ky < side; ++ky)
            {
                for (int r = 0; r < layout.rows; ++r)
                    for (int c = 0; c < layout.cols; ++c)
                        phases[static_cast<std::size_t>(r * layout.cols + c)] =
                            linear_codeword_phase(c, kx, side, bits) + linear_codeword_phase(r, ky, side, bits);
                cb.codewords.emplace_back(phases);
            }
        return cb;
    }

    Codebook calibrate_codebook(Codebook cb, const ArrayGeometry &geom, double coarse_step)
    {
        for (const auto &cw : cb.codewords)
            if (cw.size() != geom.size())
                throw std::invalid_argument("Codeword length does not match the array size.");
        const PeakFinder finder(geom, coarse_step);
        cb.calibrated_bpas = finder.find(cb.codewords);
        return cb;
    }

    std::size_t nearest_codeword(const Codebook &cb, const BeamPointingAngle &target)
    {
        if (!cb.calibrated())
            throw std::logic_error("Codebook has not been calibrated.");
        std::size_t best = 0;
        double best_ca = central_angle(cb.calibrated_bpas[0], target);
        for (std::size_t k = 1; k < cb.calibrated_bpas.size(); ++k)
        {
            const double ca = central_angle(cb.calibrated_bpas[k], target);
            if (ca < best_ca)
            {
                best_ca = ca;
                best = k;
            }
        }
        return best;
    }
}

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

#ifndef BEAMLAB_CODEBOOK_HPP
#define BEAMLAB_CODEBOOK_HPP

#include "beamlab/array.hpp"

#include <cstddef>
#include <vector>

namespace beamlab
{
    // 802.15.3c-style beam-steering codebook for a uniform planar array.
    // Codeword (kx, ky) is stored at index kx * sqrt(K) + ky.
    struct Codebook
    {
        int size = 0; // K
        int bits = 0; // phase shifter resolution used to generate the codewords
        PlanarLayout layout;
        std::vector<PhaseVector> codewords;
        std::vector<BeamPointingAngle> calibrated_bpas; // empty until calibrated

        bool calibrated() const { return !codewords.empty() && calibrated_bpas.size() == codewords.size(); }
    };

    bool is_power_of_two(long long v);

    // Phase in degrees of element n for beam k of a K-beam linear codebook:
    //   (360 / 2^b) * ceil(n * mod(k - 1 + K/2, K) / (K / 2^b)), wrapped into (-180, 180]
    double linear_codeword_phase(int n, int k, int K, int bits);

    // Separable 2-D codebook: phase(r, c) = linear(c, kx) + linear(r, ky) with sqrt(K) beams per axis.
    // K must be the square of a power of two.
    Codebook build_planar_codebook(const ArrayGeometry &geom, int K, int bits);

    // Fills calibrated_bpas with the main-lobe direction of every codeword
    Codebook calibrate_codebook(Codebook cb, const ArrayGeometry &geom, double coarse_step = 1.0);

    // Index of the calibrated beam closest to the target in central angle (lowest index on ties)
    std::size_t nearest_codeword(const Codebook &cb, const BeamPointingAngle &target);
}

#endif

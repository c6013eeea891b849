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

#include <catch2/catch_amalgamated.hpp>
#include "oracles.hpp"
#include "beamlab/codebook.hpp"
#include "beamlab/io.hpp"
#include "beamlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace beamlab;
using Catch::Approx;

namespace
{
    const ArrayGeometry &array8x8()
    {
        static const ArrayGeometry g = ArrayGeometry::planar({});
        return g;
    }

    const Codebook &calibrated(int K)
    {
        static std::map<int, Codebook> cache;
        auto it = cache.find(K);
        if (it == cache.end())
            it = cache.emplace(K, calibrate_codebook(build_planar_codebook(array8x8(), K, 16), array8x8())).first;
        return it->second;
    }
}

TEST_CASE("Codebook - linear codeword phase")
{
    for (int K : {2, 4, 16, 32})
        for (int k = 0; k < K; ++k)
            for (int b : {1, 2, 5, 16})
                CHECK(linear_codeword_phase(0, k, K, b) == 0.0);

    CHECK(linear_codeword_phase(1, 1, 4, 2) == 180.0);
    CHECK(linear_codeword_phase(1, 3, 4, 2) == 0.0);
    // k = 0: mod(-1 + 2, 4) = 1; n = 3 gives ceil(3) = 3 states of 90 degrees = 270 -> -90
    CHECK(linear_codeword_phase(3, 0, 4, 2) == -90.0);
    // Ceiling: K = 8, b = 2, n = 1, k = 0 -> mod(3, 8) = 3, 3 / 2 = 1.5 -> 2 states -> 180
    CHECK(linear_codeword_phase(1, 0, 8, 2) == 180.0);

    CHECK_THROWS_AS(linear_codeword_phase(1, 0, 6, 2), std::invalid_argument);
    CHECK_THROWS_AS(linear_codeword_phase(1, 0, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(linear_codeword_phase(1, 4, 4, 2), std::invalid_argument);
    CHECK_THROWS_AS(linear_codeword_phase(1, -1, 4, 2), std::invalid_argument);
    CHECK_THROWS_AS(linear_codeword_phase(1, 0, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(linear_codeword_phase(-1, 0, 4, 2), std::invalid_argument);
}

TEST_CASE("Codebook - fine-lattice limit")
{
    // b >= 15: within one lattice step of 360 n m / K
    for (int b : {15, 16})
        for (int K : {4, 8, 32})
            for (int k = 0; k < K; ++k)
                for (int n = 0; n < 8; ++n)
                {
                    const int m = ((k - 1 + K / 2) % K + K) % K;
                    const double exact = 360.0 * n * m / K;
                    const double step = 360.0 / std::ldexp(1.0, b);
                    CHECK(std::abs(wrap_phase_deg(linear_codeword_phase(n, k, K, b) - exact)) <= step + 1e-9);
                }
}

TEST_CASE("Codebook - planar construction")
{
    const auto &g = array8x8();
    const auto cb = build_planar_codebook(g, 16, 3);
    REQUIRE(cb.codewords.size() == 16);
    CHECK(cb.size == 16);
    CHECK(cb.bits == 3);
    CHECK_FALSE(cb.calibrated());
    for (const auto &cw : cb.codewords)
    {
        CHECK(cw.size() == 64);
        CHECK(quantize_phases(cw, 3) == cw);
    }

    // Codeword (0, 0) on row 0 is the 1-D k = 0 codeword
    for (int c = 0; c < 8; ++c)
        CHECK(cb.codewords[0][static_cast<std::size_t>(c)] ==
              Approx(linear_codeword_phase(c, 0, 4, 3)).margin(1e-12));

    // Separability with row-major (kx, ky) order
    for (int kx = 0; kx < 4; ++kx)
        for (int ky = 0; ky < 4; ++ky)
            for (int r = 0; r < 8; ++r)
                for (int c = 0; c < 8; ++c)
                {
                    const double expect =
                        wrap_phase_deg(linear_codeword_phase(c, kx, 4, 3) + linear_codeword_phase(r, ky, 4, 3));
                    CHECK(cb.codewords[static_cast<std::size_t>(kx * 4 + ky)][static_cast<std::size_t>(r * 8 + c)] ==
                          Approx(expect).margin(1e-12));
                }

    for (int K : {64, 256, 1024})
    {
        const auto big = build_planar_codebook(g, K, 6);
        CHECK(big.codewords.size() == static_cast<std::size_t>(K));
        for (const auto &cw : big.codewords)
            CHECK(quantize_phases(cw, 6) == cw);
    }

    CHECK_THROWS_AS(build_planar_codebook(g, 8, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_planar_codebook(g, 36, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_planar_codebook(g, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_planar_codebook(ArrayGeometry({Eigen::Vector3d::Zero()}), 16, 3), std::invalid_argument);
}

TEST_CASE("Codebook - calibration")
{
    const auto &g = array8x8();
    const auto &cb = calibrated(16);
    REQUIRE(cb.calibrated());
    for (const auto &b : cb.calibrated_bpas)
    {
        CHECK(b.el_deg() >= 0.0);
        CHECK(b.el_deg() <= 180.0);
    }

    // Recalibrating is a no-op
    CHECK(calibrate_codebook(cb, g).calibrated_bpas == cb.calibrated_bpas);

    // 1024 beams against a peak search refined to 0.025 degrees
    const auto &big = calibrated(1024);
    const PeakFinder fine(g, 1.0, 40);
    const auto refound = fine.find(big.codewords);
    std::vector<double> ca;
    for (std::size_t k = 0; k < refound.size(); ++k)
        ca.push_back(central_angle(refound[k], big.calibrated_bpas[k]));
    const std::array<double, 1> p50{50.0};
    CHECK(quantiles(ca, p50)[0] <= 0.1);
}

TEST_CASE("Codebook - nearest codeword")
{
    const auto &cb = calibrated(64);
    for (std::size_t j = 0; j < cb.calibrated_bpas.size(); ++j)
    {
        const auto k = nearest_codeword(cb, cb.calibrated_bpas[j]);
        // Duplicated beam directions resolve to the first copy
        CHECK(central_angle(cb.calibrated_bpas[k], cb.calibrated_bpas[j]) == 0.0);
        CHECK(k <= j);
    }

    // Exhaustive argmin oracle
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> az(0.0, 120.0), el(30.0, 150.0);
    for (int K : {16, 256})
    {
        const auto &c = calibrated(K);
        for (int i = 0; i < 1000; ++i)
        {
            const BeamPointingAngle t(az(rng), el(rng));
            CHECK(nearest_codeword(c, t) == oracle::exhaustive_nearest(c, t));
        }
    }

    Codebook raw = build_planar_codebook(array8x8(), 16, 4);
    CHECK_THROWS_AS(nearest_codeword(raw, BeamPointingAngle(10.0, 90.0)), std::logic_error);
}

TEST_CASE("Codebook - monotone coverage")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> az(0.0, 120.0), el(30.0, 150.0);
    std::vector<BeamPointingAngle> targets;
    for (int i = 0; i < 2000; ++i)
        targets.emplace_back(az(rng), el(rng));

    const std::array<double, 1> p50{50.0};
    double previous = 180.0;
    for (int K : {16, 64, 256, 1024})
    {
        const auto &cb = calibrated(K);
        std::vector<double> ca;
        for (const auto &t : targets)
            ca.push_back(central_angle(cb.calibrated_bpas[nearest_codeword(cb, t)], t));
        const double median = quantiles(ca, p50)[0];
        CHECK(median <= previous);
        previous = median;
    }
}

TEST_CASE("Codebook - JSON round trip")
{
    const auto &cb = calibrated(16);
    const auto back = io::codebook_from_json(io::codebook_to_json(cb));
    CHECK(back.size == cb.size);
    CHECK(back.bits == cb.bits);
    CHECK(back.layout == cb.layout);
    CHECK(back.codewords == cb.codewords);
    CHECK(back.calibrated_bpas == cb.calibrated_bpas);

    auto raw = build_planar_codebook(array8x8(), 64, 16);
    const auto raw_back = io::codebook_from_json(io::codebook_to_json(raw));
    CHECK(raw_back.codewords == raw.codewords);
    CHECK_FALSE(raw_back.calibrated());

    CHECK_THROWS_AS(io::codebook_from_json("{\"format\":\"other\",\"version\":1}"), std::runtime_error);
    CHECK_THROWS_AS(io::codebook_from_json("{\"format\":\"beamlab-codebook\",\"version\":99}"), std::runtime_error);
    CHECK_THROWS_AS(io::codebook_from_json("not json"), std::runtime_error);
    CHECK_THROWS_AS(io::codebook_from_json("{\"format\":\"beamlab-codebook\",\"version\":1}"), std::runtime_error);
}

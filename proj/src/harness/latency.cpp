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

#include "beamlab/harness/latency.hpp"
#include "beamlab/harness/dataset.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace beamlab
{
    std::string hardware_descriptor()
    {
        std::string cpu = "unknown cpu";
        std::ifstream is("/proc/cpuinfo");
        for (std::string line; std::getline(is, line);)
            if (line.rfind("model name", 0) == 0)
            {
                const auto colon = line.find(':');
                if (colon != std::string::npos && colon + 2 <= line.size())
                    cpu = line.substr(colon + 2);
                break;
            }
        std::string s = cpu + "; " + std::to_string(std::thread::hardware_concurrency()) + " logical cores";
#if defined(__clang__)
        s += "; clang " __clang_version__;
#elif defined(__GNUC__)
        s += "; gcc " __VERSION__;
#endif
        return s;
    }

    LatencyStats measure_inference_latency(const nn::PhaseRegressor &regressor, std::size_t trials,
                                           std::uint64_t seed, std::size_t warmup)
    {
        if (trials == 0)
            throw std::invalid_argument("Latency measurement needs at least one trial.");
        if (!regressor.fitted())
            throw std::logic_error("Regressor is not fitted.");

        SectorSpec spec;
        spec.count = std::max(trials, warmup);
        spec.seed = seed;
        const auto queries = sample_targets(spec);

        double sink = 0.0;
        for (std::size_t i = 0; i < warmup; ++i)
            sink += nn::predict_phases(regressor.model, regressor.scalers, queries[i % queries.size()])[0];

        std::vector<double> ns(trials);
        for (std::size_t i = 0; i < trials; ++i)
        {
            const auto t0 = std::chrono::steady_clock::now();
            const PhaseVector pv = nn::predict_phases(regressor.model, regressor.scalers, queries[i % queries.size()]);
            const auto t1 = std::chrono::steady_clock::now();
            sink += pv[pv.size() - 1];
            ns[i] = std::chrono::duration<double, std::nano>(t1 - t0).count();
        }
        if (!std::isfinite(sink))
            throw std::runtime_error("Regressor produced non-finite phases.");

        const std::array<double, 2> p{50.0, 95.0};
        const auto q = quantiles(ns, p);
        return {trials, q[0], q[1], hardware_descriptor()};
    }
}

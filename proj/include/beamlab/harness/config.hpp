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

#ifndef BEAMLAB_HARNESS_CONFIG_HPP
#define BEAMLAB_HARNESS_CONFIG_HPP

#include "beamlab/array.hpp"
#include "beamlab/harness/dataset.hpp"
#include "beamlab/neural/trainer.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace beamlab
{
    // Everything a pipeline run depends on. Desk-scale defaults.
    struct RunConfig
    {
        std::uint64_t seed = 1; // master seed
        PlanarLayout layout;
        SectorSpec sector{0.0, 120.0, 30.0, 150.0, 100000, 0}; // seed comes from the master seed
        std::array<double, 3> split{0.70, 0.15, 0.15};
        nn::TrainConfig train{0.0005, 1024, 200, 0.9, 0.999, 1e-8, 0};
        nn::ScalerKind scaler = nn::ScalerKind::standard;
        std::vector<bool> batch_norm{false, true, true}; // per hidden layer
        std::vector<int> codebook_sizes{16, 64, 256, 1024};
        int codebook_bits = 16;
        double grid_step = 2.0;
        double peak_step = 1.0;
        std::size_t test_count = 1000; // evaluated test BPAs (at most the test split)
        std::vector<int> sweep_bits{2, 3, 4, 5, 6};

        void validate() const;
    };

    // 1.5e6 samples, 1200 epochs, whole test split
    RunConfig full_scale(RunConfig cfg);

    // Flat "key = value" text; '#' starts a comment; unknown keys and malformed values throw
    // std::invalid_argument. Lists are comma separated. Keys not given keep their defaults.
    RunConfig parse_config(std::string_view text, RunConfig base = {});
    RunConfig load_config(const std::filesystem::path &path, RunConfig base = {});

    // Canonical form: every key once, fixed order, shortest round-trip numbers
    std::string to_config_text(const RunConfig &cfg);

    // 64-bit FNV-1a of the canonical text, 16 hex digits
    std::string config_hash(const RunConfig &cfg);

    // Per-stage seeds derived from the master seed
    struct StageSeeds
    {
        std::uint64_t dataset, split, train, evaluation, latency;
    };
    StageSeeds derive_seeds(std::uint64_t master);
}

#endif

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

#ifndef BEAMLAB_IO_HPP
#define BEAMLAB_IO_HPP

#include "beamlab/array.hpp"
#include "beamlab/codebook.hpp"
#include "beamlab/neural/trainer.hpp"

#include <filesystem>
#include <string>
#include <string_view>

// JSON persistence. Documents carry a "format" tag and an integer "version";
// readers reject anything else with std::runtime_error.
namespace beamlab::io
{
    // e.g. "planar 8x8 d=0.5wl isotropic boresight=(60,90)"; "custom N=..." for free-form arrays
    std::string geometry_descriptor(const ArrayGeometry &geom);

    std::string layout_to_json(const PlanarLayout &layout);
    PlanarLayout layout_from_json(std::string_view text);

    // Doubles are written in shortest round-trip form, so save/load is lossless
    std::string codebook_to_json(const Codebook &cb);
    Codebook codebook_from_json(std::string_view text);
    void save_codebook(const std::filesystem::path &path, const Codebook &cb);
    Codebook load_codebook(const std::filesystem::path &path);

    // Architecture, parameters, running statistics, scalers, training config, seed and loss history
    std::string regressor_to_json(const nn::PhaseRegressor &reg);
    nn::PhaseRegressor regressor_from_json(std::string_view text);
    void save_regressor(const std::filesystem::path &path, const nn::PhaseRegressor &reg);
    nn::PhaseRegressor load_regressor(const std::filesystem::path &path);

    // Columns phi_deg,theta_deg,magnitude in grid order
    std::string pattern_csv(const RadiationPattern &pattern);

    std::string read_text(const std::filesystem::path &path);
    void write_text(const std::filesystem::path &path, std::string_view text);
}

#endif

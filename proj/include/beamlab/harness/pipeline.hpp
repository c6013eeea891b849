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

#ifndef BEAMLAB_HARNESS_PIPELINE_HPP
#define BEAMLAB_HARNESS_PIPELINE_HPP

#include "beamlab/codebook.hpp"
#include "beamlab/harness/config.hpp"
#include "beamlab/harness/dataset.hpp"
#include "beamlab/harness/evaluate.hpp"
#include "beamlab/neural/trainer.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace beamlab
{
    // Fits the scalers on the training split (a constant phase column is centered only), trains,
    // and keeps the best-validation parameters. The output width of `spec` is set to the element
    // count of the data.
    nn::PhaseRegressor train_regressor(const Dataset &train, const Dataset &validation, nn::MlpSpec spec,
                                       const nn::TrainConfig &cfg, nn::ScalerKind scaler = nn::ScalerKind::standard,
                                       const nn::EpochCallback &on_epoch = {});

    nn::MlpSpec model_spec(const RunConfig &cfg);

    Codebook make_codebook(const ArrayGeometry &geom, int size, int bits, double peak_step);

    struct PipelineResult
    {
        std::shared_ptr<const nn::PhaseRegressor> regressor;
        std::vector<std::shared_ptr<const Codebook>> codebooks;
        std::vector<BeamPointingAngle> test_targets;
        std::vector<EvalReport> reports; // MGB, NN, CB-K..., then the sweep (NN and largest codebook)
        std::string summary_json;
    };

    using ProgressCallback = std::function<void(const std::string &)>;

    // generate -> split -> train -> evaluate -> sweep. With an output directory the model,
    // codebooks, per-sample CSVs, CDF CSV and summary JSON are written there.
    PipelineResult run_pipeline(const RunConfig &cfg, const std::optional<std::filesystem::path> &out_dir = {},
                                const ProgressCallback &progress = {});
}

#endif

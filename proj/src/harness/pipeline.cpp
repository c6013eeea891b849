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

#include "beamlab/harness/pipeline.hpp"
#include "beamlab/harness/report.hpp"
#include "beamlab/io.hpp"

#include <algorithm>
#include <stdexcept>

namespace beamlab
{
    nn::PhaseRegressor train_regressor(const Dataset &train, const Dataset &validation, nn::MlpSpec spec,
                                       const nn::TrainConfig &cfg, nn::ScalerKind scaler,
                                       const nn::EpochCallback &on_epoch)
    {
        if (train.empty() || validation.empty())
            throw std::invalid_argument("Training and validation sets must be non-empty.");
        if (train.elements() != validation.elements())
            throw std::invalid_argument("Training and validation element counts differ.");
        spec.layer_dims.back() = static_cast<int>(train.elements());

        nn::PhaseRegressor reg;
        reg.spec = spec;
        reg.config = cfg;
        const Eigen::MatrixXd x_train = train.feature_matrix(), y_train = train.phase_matrix();
        reg.scalers.input = nn::FeatureScaler::fit(x_train, scaler);
        reg.scalers.output = nn::FeatureScaler::fit(y_train, scaler, nn::ConstantFeature::unit_scale);

        auto fitted = nn::fit(reg.scalers.input.transform(x_train), reg.scalers.output.transform(y_train),
                              reg.scalers.input.transform(validation.feature_matrix()),
                              reg.scalers.output.transform(validation.phase_matrix()), spec, cfg, on_epoch);
        reg.model = std::move(fitted.model);
        reg.train_loss = std::move(fitted.train_loss);
        reg.val_loss = std::move(fitted.val_loss);
        reg.best_epoch = fitted.best_epoch;
        return reg;
    }

    nn::MlpSpec model_spec(const RunConfig &cfg)
    {
        nn::MlpSpec spec;
        spec.batch_norm = cfg.batch_norm;
        spec.layer_dims.back() = cfg.layout.rows * cfg.layout.cols;
        return spec;
    }

    Codebook make_codebook(const ArrayGeometry &geom, int size, int bits, double peak_step)
    {
        return calibrate_codebook(build_planar_codebook(geom, size, bits), geom, peak_step);
    }

    PipelineResult run_pipeline(const RunConfig &cfg, const std::optional<std::filesystem::path> &out_dir,
                                const ProgressCallback &progress)
    {
        cfg.validate();
        auto say = [&](const std::string &msg) {
            if (progress)
                progress(msg);
        };
        const StageSeeds seeds = derive_seeds(cfg.seed);
        const std::string hash = config_hash(cfg);
        const ArrayGeometry geom = ArrayGeometry::planar(cfg.layout);

        SectorSpec sector = cfg.sector;
        sector.seed = seeds.dataset;
        say("generating " + std::to_string(sector.count) + " samples");
        const Dataset ds = generate_dataset(sector, geom);
        const DatasetSplit parts = split_dataset(ds, cfg.split, seeds.split);
        if (parts.test.empty())
            throw std::invalid_argument("The test split is empty.");

        nn::TrainConfig tc = cfg.train;
        tc.seed = seeds.train;
        say("training");
        PipelineResult out;
        out.regressor = std::make_shared<const nn::PhaseRegressor>(
            train_regressor(parts.train, parts.validation, model_spec(cfg), tc, cfg.scaler, [&](const nn::EpochStats &e) {
                say("epoch " + std::to_string(e.epoch) + " train " + std::to_string(e.train_loss) + " val " +
                    std::to_string(e.val_loss));
            }));

        const std::size_t n_test = std::min(cfg.test_count, parts.test.size());
        out.test_targets.assign(parts.test.bpas().begin(), parts.test.bpas().begin() + static_cast<long>(n_test));

        for (int k : cfg.codebook_sizes)
        {
            say("codebook " + std::to_string(k));
            out.codebooks.push_back(std::make_shared<const Codebook>(make_codebook(geom, k, cfg.codebook_bits, cfg.peak_step)));
        }

        const Evaluator evaluator(geom, {cfg.grid_step, cfg.peak_step, cfg.seed, hash});
        std::vector<WeightSource> sources{WeightSource::mgb(), WeightSource::neural(out.regressor)};
        for (const auto &cb : out.codebooks)
            sources.push_back(WeightSource::codebook(cb));
        for (const auto &src : sources)
        {
            say("evaluating " + src.label());
            out.reports.push_back(evaluator.evaluate(src, out.test_targets));
        }

        std::vector<WeightSource> swept{WeightSource::neural(out.regressor)};
        if (!out.codebooks.empty())
        {
            const auto largest = std::max_element(out.codebooks.begin(), out.codebooks.end(),
                                                  [](const auto &a, const auto &b) { return a->size < b->size; });
            swept.push_back(WeightSource::codebook(*largest));
        }
        say("quantization sweep");
        for (auto &r : quantization_sweep(evaluator, swept, cfg.sweep_bits, out.test_targets))
            out.reports.push_back(std::move(r));

        out.summary_json = report::summary_json(out.reports);

        if (out_dir)
        {
            std::filesystem::create_directories(*out_dir);
            io::write_text(*out_dir / "config.txt", to_config_text(cfg));
            io::save_regressor(*out_dir / "model.json", *out.regressor);
            for (const auto &cb : out.codebooks)
                io::save_codebook(*out_dir / ("codebook-" + std::to_string(cb->size) + ".json"), *cb);
            for (const auto &r : out.reports)
            {
                std::string name = r.approach;
                std::replace(name.begin(), name.end(), '/', '-');
                report::write_samples_csv(*out_dir / ("samples-" + name + ".csv"), r);
            }
            report::write_cdf_csv(*out_dir / "cdf.csv", out.reports);
            io::write_text(*out_dir / "summary.json", out.summary_json);
        }
        return out;
    }
}

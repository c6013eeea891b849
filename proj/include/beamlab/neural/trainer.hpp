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

#ifndef BEAMLAB_NEURAL_TRAINER_HPP
#define BEAMLAB_NEURAL_TRAINER_HPP

#include "beamlab/angles.hpp"
#include "beamlab/array.hpp"
#include "beamlab/neural/adam.hpp"
#include "beamlab/neural/mlp.hpp"
#include "beamlab/neural/scaler.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace beamlab::nn
{
    struct TrainConfig
    {
        double learning_rate = 0.0005;
        int batch_size = 1024;
        int epochs = 1200;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double epsilon = 1e-8;
        std::uint64_t seed = 0;

        void validate() const;
        AdamConfig adam() const { return {learning_rate, beta1, beta2, epsilon}; }
    };

    struct EpochStats
    {
        int epoch = 0; // 1-based
        double train_loss = 0.0;
        double val_loss = 0.0;
    };

    struct FitResult
    {
        MlpModel model; // parameters of the epoch with the lowest validation loss
        std::vector<double> train_loss;
        std::vector<double> val_loss;
        int best_epoch = 0; // 1-based
    };

    using EpochCallback = std::function<void(const EpochStats &)>;

    // Mini-batch Adam on the mean squared error. Data is normalized, features x samples.
    // Batches are drawn from a seeded shuffle each epoch; the run is reproducible for a fixed seed.
    FitResult fit(const Eigen::MatrixXd &x_train, const Eigen::MatrixXd &y_train, const Eigen::MatrixXd &x_val,
                  const Eigen::MatrixXd &y_val, const MlpSpec &spec, const TrainConfig &cfg,
                  const EpochCallback &on_epoch = {});

    // Infer-mode MSE evaluated in fixed-size chunks
    double evaluate_loss(const MlpModel &model, const Eigen::MatrixXd &x, const Eigen::MatrixXd &y);

    // Trained regressor with its normalization and provenance
    struct PhaseRegressor
    {
        MlpModel model;
        ScalerParams scalers;
        MlpSpec spec;
        TrainConfig config;
        std::vector<double> train_loss, val_loss;
        int best_epoch = 0;

        bool fitted() const;
    };

    // Column (azimuth, polar angle) per pointing angle
    Eigen::MatrixXd bpa_features(std::span<const BeamPointingAngle> bpas);

    // Normalize, infer-mode forward, de-normalize, wrap into (-180, 180].
    // Throws std::logic_error for an unfitted regressor.
    PhaseVector predict_phases(const MlpModel &model, const ScalerParams &scalers, const BeamPointingAngle &bpa);
    std::vector<PhaseVector> predict_phases(const MlpModel &model, const ScalerParams &scalers,
                                            std::span<const BeamPointingAngle> bpas);
}

#endif

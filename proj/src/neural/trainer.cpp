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

#include "beamlab/neural/trainer.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace beamlab::nn
{
    namespace
    {
        constexpr Eigen::Index eval_chunk = 4096;
        constexpr double min_snake_a = 1e-3;
    }

    void TrainConfig::validate() const
    {
        if (!(learning_rate > 0.0))
            throw std::invalid_argument("Learning rate must be positive.");
        if (batch_size < 1)
            throw std::invalid_argument("Batch size must be at least 1.");
        if (epochs < 1)
            throw std::invalid_argument("Epoch count must be at least 1.");
        if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0))
            throw std::invalid_argument("Invalid Adam moment coefficients.");
    }

    double evaluate_loss(const MlpModel &model, const Eigen::MatrixXd &x, const Eigen::MatrixXd &y)
    {
        if (x.cols() != y.cols() || x.cols() == 0)
            throw std::invalid_argument("Evaluation data is empty or misaligned.");
        double sse = 0.0;
        for (Eigen::Index start = 0; start < x.cols(); start += eval_chunk)
        {
            const Eigen::Index n = std::min(eval_chunk, x.cols() - start);
            const Eigen::MatrixXd pred = forward(model, x.middleCols(start, n), Mode::infer);
            sse += (pred - y.middleCols(start, n)).squaredNorm();
        }
        return sse / static_cast<double>(y.size());
    }

    FitResult fit(const Eigen::MatrixXd &x_train, const Eigen::MatrixXd &y_train, const Eigen::MatrixXd &x_val,
                  const Eigen::MatrixXd &y_val, const MlpSpec &spec, const TrainConfig &cfg,
                  const EpochCallback &on_epoch)
    {
        cfg.validate();
        spec.validate();
        if (x_train.cols() == 0 || x_val.cols() == 0)
            throw std::invalid_argument("Training and validation splits must be non-empty.");
        if (x_train.cols() != y_train.cols() || x_val.cols() != y_val.cols())
            throw std::invalid_argument("Feature and target sample counts differ.");
        if (x_train.rows() != spec.layer_dims.front() || y_train.rows() != spec.layer_dims.back() ||
            x_val.rows() != x_train.rows() || y_val.rows() != y_train.rows())
            throw std::invalid_argument("Data widths do not match the architecture.");

        // Independent streams for initialization and shuffling
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32), 0x5eedu};
        std::array<std::uint64_t, 2> seeds{};
        seq.generate(seeds.begin(), seeds.end());
        std::mt19937_64 shuffle_rng(seeds[1]);

        MlpModel model = MlpModel::create(spec, seeds[0]);
        AdamState state = AdamState::zeros(model.parameter_sizes());
        const AdamConfig adam = cfg.adam();

        FitResult result;
        result.model = model;
        double best_val = std::numeric_limits<double>::infinity();

        std::vector<Eigen::Index> order(static_cast<std::size_t>(x_train.cols()));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        long step = 0;
        ForwardCache cache;

        for (int epoch = 1; epoch <= cfg.epochs; ++epoch)
        {
            std::shuffle(order.begin(), order.end(), shuffle_rng);
            double sse = 0.0;
            for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size))
            {
                const std::size_t n = std::min(static_cast<std::size_t>(cfg.batch_size), order.size() - start);
                const std::span<const Eigen::Index> idx(order.data() + start, n);
                const Eigen::MatrixXd xb = x_train(Eigen::all, idx);
                const Eigen::MatrixXd yb = y_train(Eigen::all, idx);

                forward(model, xb, Mode::train, &cache);
                sse += (cache.prediction - yb).squaredNorm();
                const Gradients g = backward(model, cache, yb);
                update_running_stats(model, cache);

                const auto params = model.parameters();
                adam_step(params, g, state, ++step, adam);
                for (auto &h : model.hidden())
                    if (h.activation == Activation::snake)
                        h.snake_a = std::max(h.snake_a, min_snake_a);
            }

            const double train_loss = sse / static_cast<double>(y_train.size());
            const double val_loss = evaluate_loss(model, x_val, y_val);
            result.train_loss.push_back(train_loss);
            result.val_loss.push_back(val_loss);
            if (val_loss < best_val)
            {
                best_val = val_loss;
                result.model = model;
                result.best_epoch = epoch;
            }
            if (on_epoch)
                on_epoch({epoch, train_loss, val_loss});
        }
        if (result.best_epoch == 0) // every validation loss was NaN
            throw std::runtime_error("Training diverged: validation loss never finite.");
        return result;
    }

    bool PhaseRegressor::fitted() const
    {
        return model.output_dim() > 0 && scalers.input.features() == model.input_dim() &&
               scalers.output.features() == model.output_dim();
    }

    Eigen::MatrixXd bpa_features(std::span<const BeamPointingAngle> bpas)
    {
        Eigen::MatrixXd x(2, static_cast<Eigen::Index>(bpas.size()));
        for (std::size_t i = 0; i < bpas.size(); ++i)
        {
            x(0, static_cast<Eigen::Index>(i)) = bpas[i].az_deg();
            x(1, static_cast<Eigen::Index>(i)) = bpas[i].el_deg();
        }
        return x;
    }

    std::vector<PhaseVector> predict_phases(const MlpModel &model, const ScalerParams &scalers,
                                            std::span<const BeamPointingAngle> bpas)
    {
        if (model.output_dim() == 0 || scalers.input.features() != model.input_dim() ||
            scalers.output.features() != model.output_dim())
            throw std::logic_error("Regressor is not fitted.");

        std::vector<PhaseVector> out;
        out.reserve(bpas.size());
        for (std::size_t start = 0; start < bpas.size(); start += static_cast<std::size_t>(eval_chunk))
        {
            const std::size_t n = std::min(static_cast<std::size_t>(eval_chunk), bpas.size() - start);
            const Eigen::MatrixXd x = scalers.input.transform(bpa_features(bpas.subspan(start, n)));
            const Eigen::MatrixXd y = scalers.output.inverse(forward(model, x, Mode::infer));
            for (Eigen::Index c = 0; c < y.cols(); ++c)
                out.emplace_back(std::vector<double>(y.col(c).data(), y.col(c).data() + y.rows()));
        }
        return out;
    }

    PhaseVector predict_phases(const MlpModel &model, const ScalerParams &scalers, const BeamPointingAngle &bpa)
    {
        return predict_phases(model, scalers, std::span<const BeamPointingAngle>(&bpa, 1)).front();
    }
}

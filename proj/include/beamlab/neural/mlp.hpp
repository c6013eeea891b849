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

#ifndef BEAMLAB_NEURAL_MLP_HPP
#define BEAMLAB_NEURAL_MLP_HPP

#include "beamlab/neural/activations.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace beamlab::nn
{
    // Architecture of a fully connected regressor. Hidden layer i maps
    // layer_dims[i] -> layer_dims[i + 1], optionally batch-normalized between the
    // dense transform and the activation. The output layer is linear.
    struct MlpSpec
    {
        std::vector<int> layer_dims{2, 32, 300, 600, 64};
        std::vector<Activation> activations{Activation::snake, Activation::snake, Activation::tsigmoid};
        std::vector<bool> batch_norm{false, true, true};
        double snake_init = 1.0;
        double bn_momentum = 0.99;
        double bn_epsilon = 1e-3;

        // Throws std::invalid_argument on an inconsistent description
        void validate() const;
    };

    struct DenseLayer
    {
        Eigen::MatrixXd weight; // out x in
        Eigen::VectorXd bias;
    };

    struct BatchNorm
    {
        Eigen::VectorXd gamma, beta;
        Eigen::VectorXd running_mean, running_var;
        double momentum = 0.99;
        double epsilon = 1e-3;
    };

    struct HiddenLayer
    {
        DenseLayer dense;
        Activation activation = Activation::linear;
        std::optional<BatchNorm> bn;
        double snake_a = 1.0; // trainable for snake layers only
    };

    class MlpModel
    {
    public:
        MlpModel() = default;
        MlpModel(std::vector<HiddenLayer> hidden, DenseLayer output);

        // Fan-in scaled uniform weights U(-sqrt(3 / fan_in), sqrt(3 / fan_in)), zero biases
        static MlpModel create(const MlpSpec &spec, std::uint64_t seed);

        std::vector<int> layer_dims() const;
        int input_dim() const;
        int output_dim() const;

        std::vector<HiddenLayer> &hidden() { return hidden_; }
        const std::vector<HiddenLayer> &hidden() const { return hidden_; }
        DenseLayer &output() { return output_; }
        const DenseLayer &output() const { return output_; }

        // Trainable parameters in a fixed order: per hidden layer W, b, [gamma, beta], [a];
        // then the output W, b. Matrices are exposed in Eigen's storage order.
        std::vector<std::span<double>> parameters();
        std::vector<std::size_t> parameter_sizes() const;

        // Every parameter and running statistic finite, running variances positive
        bool is_valid() const;

    private:
        std::vector<HiddenLayer> hidden_;
        DenseLayer output_;
    };

    enum class Mode
    {
        train, // batch statistics in batch-norm layers
        infer  // running statistics
    };

    struct LayerCache
    {
        Eigen::MatrixXd input;   // in x B
        Eigen::MatrixXd normed;  // batch-normalized pre-activation before gamma/beta (train mode)
        Eigen::VectorXd inv_std; // per-feature 1 / sqrt(var + eps)
        Eigen::VectorXd batch_mean, batch_var;
        Eigen::MatrixXd preact;  // activation input
        Eigen::MatrixXd sin_as, cos_as; // snake layers: sin(a s), cos(a s)
        Eigen::MatrixXd output;  // activation output (tsigmoid layers)
    };

    struct ForwardCache
    {
        Mode mode = Mode::infer;
        std::vector<LayerCache> layers;
        Eigen::MatrixXd last_hidden; // input of the output layer
        Eigen::MatrixXd prediction;
    };

    // Inputs are normalized features x samples. Infer mode is column independent.
    // With a cache pointer in train mode the intermediates needed by backward() are kept.
    Eigen::MatrixXd forward(const MlpModel &model, const Eigen::MatrixXd &x, Mode mode,
                            ForwardCache *cache = nullptr);

    // Moves the running statistics toward the batch statistics recorded in a train-mode cache
    void update_running_stats(MlpModel &model, const ForwardCache &cache);

    // Mean over all samples and outputs of the squared error
    double mse_loss(const Eigen::MatrixXd &prediction, const Eigen::MatrixXd &target);

    // Gradient blocks aligned with MlpModel::parameters()
    struct Gradients
    {
        std::vector<Eigen::VectorXd> blocks;
    };

    // Gradients of mse_loss(prediction, target) with respect to every trainable parameter.
    // Throws std::logic_error when the cache does not hold a train-mode forward pass.
    Gradients backward(const MlpModel &model, const ForwardCache &cache, const Eigen::MatrixXd &target);
}

#endif

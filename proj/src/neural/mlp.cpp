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

#include "beamlab/neural/mlp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace beamlab::nn
{
    namespace
    {
        // tanh(x) = 1 - 2 / (exp(2x) + 1); Eigen vectorizes exp but not tanh for doubles
        Eigen::ArrayXXd fast_tanh(const Eigen::ArrayXXd &x)
        {
            return 1.0 - 2.0 / ((2.0 * x).exp() + 1.0);
        }

        Eigen::MatrixXd activate(const Eigen::MatrixXd &s, Activation act, double a, LayerCache *lc)
        {
            switch (act)
            {
            case Activation::snake:
            {
                Eigen::ArrayXXd sn = (a * s.array()).sin();
                Eigen::MatrixXd y = (s.array() + sn.square() / a).matrix();
                if (lc)
                {
                    lc->cos_as = (a * s.array()).cos().matrix();
                    lc->sin_as = std::move(sn).matrix();
                }
                return y;
            }
            case Activation::tsigmoid:
            {
                Eigen::MatrixXd y = fast_tanh(s.array()).matrix();
                if (lc)
                    lc->output = y;
                return y;
            }
            case Activation::linear:
                break;
            }
            return s;
        }

        Eigen::VectorXd flatten(const Eigen::MatrixXd &m)
        {
            return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
        }
    }

    void MlpSpec::validate() const
    {
        if (layer_dims.size() < 2)
            throw std::invalid_argument("An MLP needs at least input and output dimensions.");
        for (int d : layer_dims)
            if (d < 1)
                throw std::invalid_argument("Layer dimensions must be positive.");
        const std::size_t n_hidden = layer_dims.size() - 2;
        if (activations.size() != n_hidden || batch_norm.size() != n_hidden)
            throw std::invalid_argument("Need one activation and one batch-norm flag per hidden layer.");
        if (!(snake_init > 0.0))
            throw std::invalid_argument("Snake frequency must be positive.");
        if (!(bn_momentum >= 0.0 && bn_momentum < 1.0) || !(bn_epsilon > 0.0))
            throw std::invalid_argument("Invalid batch-norm momentum or epsilon.");
    }

    MlpModel::MlpModel(std::vector<HiddenLayer> hidden, DenseLayer output)
        : hidden_(std::move(hidden)), output_(std::move(output))
    {
        Eigen::Index in = hidden_.empty() ? output_.weight.cols() : hidden_.front().dense.weight.cols();
        auto check_dense = [&](const DenseLayer &d) {
            if (d.weight.cols() != in || d.bias.size() != d.weight.rows() || d.weight.rows() < 1)
                throw std::invalid_argument("Inconsistent layer dimensions.");
            in = d.weight.rows();
        };
        for (const auto &h : hidden_)
        {
            check_dense(h.dense);
            if (h.bn)
            {
                const Eigen::Index n = h.dense.weight.rows();
                if (h.bn->gamma.size() != n || h.bn->beta.size() != n || h.bn->running_mean.size() != n ||
                    h.bn->running_var.size() != n)
                    throw std::invalid_argument("Batch-norm parameters do not match the layer width.");
            }
            if (h.activation == Activation::snake && !(h.snake_a > 0.0))
                throw std::invalid_argument("Snake frequency must be positive.");
        }
        check_dense(output_);
    }

    MlpModel MlpModel::create(const MlpSpec &spec, std::uint64_t seed)
    {
        spec.validate();
        std::mt19937_64 rng(seed);

        auto make_dense = [&](int in, int out) {
            DenseLayer d{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
            const double limit = std::sqrt(3.0 / in);
            std::uniform_real_distribution<double> dist(-limit, limit);
            // Row-major fill keeps the draw order independent of the storage order
            for (int r = 0; r < out; ++r)
                for (int c = 0; c < in; ++c)
                    d.weight(r, c) = dist(rng);
            return d;
        };

        std::vector<HiddenLayer> hidden;
        for (std::size_t i = 0; i + 2 < spec.layer_dims.size(); ++i)
        {
            HiddenLayer h;
            h.dense = make_dense(spec.layer_dims[i], spec.layer_dims[i + 1]);
            h.activation = spec.activations[i];
            h.snake_a = spec.snake_init;
            if (spec.batch_norm[i])
            {
                const int n = spec.layer_dims[i + 1];
                h.bn = BatchNorm{Eigen::VectorXd::Ones(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n),
                                 Eigen::VectorXd::Ones(n), spec.bn_momentum, spec.bn_epsilon};
            }
            hidden.push_back(std::move(h));
        }
        const auto n = spec.layer_dims.size();
        DenseLayer out = make_dense(spec.layer_dims[n - 2], spec.layer_dims[n - 1]);
        return {std::move(hidden), std::move(out)};
    }

    std::vector<int> MlpModel::layer_dims() const
    {
        std::vector<int> dims{input_dim()};
        for (const auto &h : hidden_)
            dims.push_back(static_cast<int>(h.dense.weight.rows()));
        dims.push_back(output_dim());
        return dims;
    }

    int MlpModel::input_dim() const
    {
        return static_cast<int>(hidden_.empty() ? output_.weight.cols() : hidden_.front().dense.weight.cols());
    }

    int MlpModel::output_dim() const
    {
        return static_cast<int>(output_.weight.rows());
    }

    std::vector<std::span<double>> MlpModel::parameters()
    {
        std::vector<std::span<double>> p;
        auto add = [&p](auto &m) { p.emplace_back(m.data(), static_cast<std::size_t>(m.size())); };
        for (auto &h : hidden_)
        {
            add(h.dense.weight);
            add(h.dense.bias);
            if (h.bn)
            {
                add(h.bn->gamma);
                add(h.bn->beta);
            }
            if (h.activation == Activation::snake)
                p.emplace_back(&h.snake_a, 1);
        }
        add(output_.weight);
        add(output_.bias);
        return p;
    }

    std::vector<std::size_t> MlpModel::parameter_sizes() const
    {
        std::vector<std::size_t> sizes;
        auto add = [&sizes](const auto &m) { sizes.push_back(static_cast<std::size_t>(m.size())); };
        for (const auto &h : hidden_)
        {
            add(h.dense.weight);
            add(h.dense.bias);
            if (h.bn)
            {
                add(h.bn->gamma);
                add(h.bn->beta);
            }
            if (h.activation == Activation::snake)
                sizes.push_back(1);
        }
        add(output_.weight);
        add(output_.bias);
        return sizes;
    }

    bool MlpModel::is_valid() const
    {
        for (const auto &h : hidden_)
        {
            if (!h.dense.weight.allFinite() || !h.dense.bias.allFinite() || !std::isfinite(h.snake_a))
                return false;
            if (h.bn && (!h.bn->gamma.allFinite() || !h.bn->beta.allFinite() || !h.bn->running_mean.allFinite() ||
                         !h.bn->running_var.allFinite() || (h.bn->running_var.array() <= 0.0).any()))
                return false;
        }
        return output_.weight.allFinite() && output_.bias.allFinite();
    }

    Eigen::MatrixXd forward(const MlpModel &model, const Eigen::MatrixXd &x, Mode mode, ForwardCache *cache)
    {
        if (x.rows() != model.input_dim())
            throw std::invalid_argument("Input width " + std::to_string(x.rows()) + " does not match the model (" +
                                        std::to_string(model.input_dim()) + ").");
        if (cache)
        {
            cache->mode = mode;
            cache->layers.clear();
            cache->layers.reserve(model.hidden().size());
        }

        Eigen::MatrixXd h = x;
        for (const auto &layer : model.hidden())
        {
            LayerCache lc;
            Eigen::MatrixXd z = (layer.dense.weight * h).colwise() + layer.dense.bias;
            if (layer.bn)
            {
                const BatchNorm &bn = *layer.bn;
                Eigen::VectorXd mean, var;
                if (mode == Mode::train)
                {
                    mean = z.rowwise().mean();
                    var = (z.colwise() - mean).array().square().rowwise().mean();
                }
                else
                {
                    mean = bn.running_mean;
                    var = bn.running_var;
                }
                const Eigen::VectorXd inv_std = (var.array() + bn.epsilon).rsqrt();
                Eigen::MatrixXd normed = (z.colwise() - mean).array().colwise() * inv_std.array();
                z = ((normed.array().colwise() * bn.gamma.array()).colwise() + bn.beta.array()).matrix();
                if (cache)
                {
                    lc.normed = std::move(normed);
                    lc.inv_std = inv_std;
                    lc.batch_mean = std::move(mean);
                    lc.batch_var = std::move(var);
                }
            }
            Eigen::MatrixXd next = activate(z, layer.activation, layer.snake_a, cache ? &lc : nullptr);
            if (cache)
            {
                lc.input = std::move(h);
                lc.preact = std::move(z);
                cache->layers.push_back(std::move(lc));
            }
            h = std::move(next);
        }

        Eigen::MatrixXd y = (model.output().weight * h).colwise() + model.output().bias;
        if (cache)
        {
            cache->last_hidden = std::move(h);
            cache->prediction = y;
        }
        return y;
    }

    void update_running_stats(MlpModel &model, const ForwardCache &cache)
    {
        if (cache.mode != Mode::train || cache.layers.size() != model.hidden().size())
            throw std::logic_error("Running statistics need a train-mode forward cache.");
        for (std::size_t i = 0; i < model.hidden().size(); ++i)
        {
            auto &bn = model.hidden()[i].bn;
            if (!bn)
                continue;
            const auto &lc = cache.layers[i];
            bn->running_mean = bn->momentum * bn->running_mean + (1.0 - bn->momentum) * lc.batch_mean;
            bn->running_var = bn->momentum * bn->running_var + (1.0 - bn->momentum) * lc.batch_var;
        }
    }

    double mse_loss(const Eigen::MatrixXd &prediction, const Eigen::MatrixXd &target)
    {
        if (prediction.rows() != target.rows() || prediction.cols() != target.cols())
            throw std::invalid_argument("Prediction and target shapes differ.");
        if (prediction.size() == 0)
            throw std::invalid_argument("MSE of an empty batch is undefined.");
        return (prediction - target).squaredNorm() / static_cast<double>(prediction.size());
    }

    Gradients backward(const MlpModel &model, const ForwardCache &cache, const Eigen::MatrixXd &target)
    {
        if (cache.mode != Mode::train || cache.layers.size() != model.hidden().size() || cache.prediction.size() == 0)
            throw std::logic_error("Backward pass needs a train-mode forward cache.");
        if (target.rows() != cache.prediction.rows() || target.cols() != cache.prediction.cols())
            throw std::invalid_argument("Target shape does not match the cached prediction.");

        const double batch = static_cast<double>(target.cols());
        Eigen::MatrixXd grad = 2.0 * (cache.prediction - target) / static_cast<double>(target.size());

        // Collected back to front, reversed per layer at the end
        std::vector<std::vector<Eigen::VectorXd>> per_layer(model.hidden().size() + 1);

        const auto &out = model.output();
        per_layer.back().push_back(flatten(grad * cache.last_hidden.transpose()));
        per_layer.back().push_back(grad.rowwise().sum());
        Eigen::MatrixXd d_h = out.weight.transpose() * grad;

        for (std::size_t li = model.hidden().size(); li-- > 0;)
        {
            const HiddenLayer &layer = model.hidden()[li];
            const LayerCache &lc = cache.layers[li];
            auto &blocks = per_layer[li];

            Eigen::MatrixXd d_s;
            double d_a = 0.0;
            switch (layer.activation)
            {
            case Activation::snake:
            {
                const double a = layer.snake_a;
                const Eigen::ArrayXXd sn = lc.sin_as.array();
                const Eigen::ArrayXXd sin2 = 2.0 * sn * lc.cos_as.array();
                d_s = (d_h.array() * (1.0 + sin2)).matrix();
                d_a = (d_h.array() * (lc.preact.array() * sin2 / a - sn.square() / (a * a))).sum();
                break;
            }
            case Activation::tsigmoid:
                d_s = (d_h.array() * (1.0 - lc.output.array().square())).matrix();
                break;
            case Activation::linear:
                d_s = d_h;
                break;
            }

            Eigen::MatrixXd d_z;
            Eigen::VectorXd d_gamma, d_beta;
            if (layer.bn)
            {
                const Eigen::ArrayXXd xh = lc.normed.array();
                d_gamma = (d_s.array() * xh).rowwise().sum();
                d_beta = d_s.rowwise().sum();
                const Eigen::ArrayXXd d_xh = d_s.array().colwise() * layer.bn->gamma.array();
                const Eigen::ArrayXd sum_dxh = d_xh.rowwise().sum();
                const Eigen::ArrayXd sum_dxh_xh = (d_xh * xh).rowwise().sum();
                d_z = (((batch * d_xh).colwise() - sum_dxh - xh.colwise() * sum_dxh_xh).colwise() *
                       (lc.inv_std.array() / batch))
                          .matrix();
            }
            else
                d_z = std::move(d_s);

            // Pushed in reverse parameter order: [a], [beta, gamma], b, W
            if (layer.activation == Activation::snake)
                blocks.push_back(Eigen::VectorXd::Constant(1, d_a));
            if (layer.bn)
            {
                blocks.push_back(d_beta);
                blocks.push_back(d_gamma);
            }
            blocks.push_back(d_z.rowwise().sum());
            blocks.push_back(flatten(d_z * lc.input.transpose()));

            if (li > 0)
                d_h = layer.dense.weight.transpose() * d_z;
        }

        Gradients g;
        for (std::size_t li = 0; li < model.hidden().size(); ++li)
            for (auto it = per_layer[li].rbegin(); it != per_layer[li].rend(); ++it)
                g.blocks.push_back(std::move(*it));
        g.blocks.push_back(std::move(per_layer.back()[0]));
        g.blocks.push_back(std::move(per_layer.back()[1]));
        return g;
    }
}

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
#include "beamlab/io.hpp"
#include "beamlab/neural/adam.hpp"
#include "beamlab/neural/mlp.hpp"
#include "beamlab/neural/scaler.hpp"
#include "beamlab/neural/trainer.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace beamlab;
using namespace beamlab::nn;
using Catch::Approx;

namespace
{
    using oracle::perturbed_model;
    using oracle::random_matrix;
    using oracle::worst_gradient_error;

    MlpSpec tiny_spec()
    {
        MlpSpec s;
        s.layer_dims = {2, 3, 4, 3, 2};
        return s;
    }

    double naive_snake(double x, double a)
    {
        const double s = std::sin(a * x);
        return x + s * s / a;
    }
}

TEST_CASE("Neural - snake activation")
{
    const auto z = snake(0.0, 1.0);
    CHECK(z.y == 0.0);
    CHECK(z.dy_dx == 1.0);
    CHECK(snake(pi / 2, 1.0).y == Approx(pi / 2 + 1.0).epsilon(1e-14));
    CHECK(snake(pi / 2, 1.0).y == Approx(2.5708).margin(1e-4));
    CHECK_THROWS_AS(snake(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(snake(1.0, -2.0), std::invalid_argument);

    const double h = 1e-6;
    for (double a : {0.3, 1.0, 2.5})
        for (double x = -3.0; x <= 3.0; x += 0.05)
        {
            const auto v = snake(x, a);
            const double dx = (snake(x + h, a).y - snake(x - h, a).y) / (2 * h);
            const double da = (snake(x, a + h).y - snake(x, a - h).y) / (2 * h);
            CHECK(v.dy_dx == Approx(dx).epsilon(1e-6).margin(1e-9));
            CHECK(v.dy_da == Approx(da).epsilon(1e-6).margin(1e-9));
        }
}

TEST_CASE("Neural - tsigmoid activation")
{
    CHECK(tsigmoid(0.0).y == 0.0);
    CHECK(tsigmoid(50.0).y == Approx(1.0));
    CHECK(tsigmoid(-50.0).y == Approx(-1.0));
    const double h = 1e-6;
    for (double x = -6.0; x <= 6.0; x += 0.1)
    {
        const auto v = tsigmoid(x);
        CHECK(std::abs(v.y) < 1.0);
        CHECK(v.dy_dx == Approx(1.0 - v.y * v.y));
        CHECK(v.dy_dx == Approx((tsigmoid(x + h).y - tsigmoid(x - h).y) / (2 * h)).epsilon(1e-6).margin(1e-10));
        CHECK(v.dy_da == 0.0);
    }
    CHECK(parse_activation("tsigmoid") == Activation::tsigmoid);
    CHECK_THROWS_AS(parse_activation("relu6"), std::invalid_argument);
}

TEST_CASE("Neural - feature scaler")
{
    Eigen::MatrixXd data = random_matrix(3, 1000, 4, 5.0);
    data.row(1).array() += 40.0;
    const auto s = FeatureScaler::fit(data);
    const Eigen::MatrixXd z = s.transform(data);
    for (Eigen::Index f = 0; f < 3; ++f)
    {
        const double mean = z.row(f).mean();
        const double var = (z.row(f).array() - mean).square().mean();
        CHECK(std::abs(mean) < 1e-10);
        CHECK(std::abs(var - 1.0) < 1e-10);
    }
    CHECK((s.inverse(z) - data).cwiseAbs().maxCoeff() < 1e-12 * 50.0);
    CHECK(s.transform(s.offset()).isZero(0.0));

    const auto mm = FeatureScaler::fit(data, ScalerKind::minmax);
    const Eigen::MatrixXd zm = mm.transform(data);
    for (Eigen::Index f = 0; f < 3; ++f)
    {
        CHECK(zm.row(f).minCoeff() == Approx(-1.0));
        CHECK(zm.row(f).maxCoeff() == Approx(1.0));
    }
    CHECK((mm.inverse(zm) - data).cwiseAbs().maxCoeff() < 1e-12 * 50.0);

    Eigen::MatrixXd constant = data;
    constant.row(2).setConstant(7.0);
    CHECK_THROWS_AS(FeatureScaler::fit(constant), std::invalid_argument);
    const auto unit = FeatureScaler::fit(constant, ScalerKind::standard, ConstantFeature::unit_scale);
    CHECK(unit.scale()(2) == 1.0);
    CHECK(unit.offset()(2) == 7.0);
    CHECK(unit.transform(constant).row(2).isZero(0.0));

    CHECK_THROWS_AS(FeatureScaler::fit(Eigen::MatrixXd(2, 0)), std::invalid_argument);
    CHECK_THROWS_AS(s.transform(Eigen::MatrixXd::Zero(2, 4)), std::invalid_argument);
    CHECK_THROWS_AS(FeatureScaler(ScalerKind::standard, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)),
                    std::invalid_argument);
}

TEST_CASE("Neural - architecture and initialization")
{
    const MlpSpec spec;
    CHECK(spec.layer_dims == std::vector<int>{2, 32, 300, 600, 64});
    const auto m = MlpModel::create(spec, 1);
    CHECK(m.layer_dims() == spec.layer_dims);
    CHECK(m.is_valid());
    REQUIRE(m.hidden().size() == 3);
    CHECK_FALSE(m.hidden()[0].bn.has_value());
    CHECK(m.hidden()[1].bn.has_value());
    CHECK(m.hidden()[2].bn.has_value());
    CHECK(m.hidden()[0].activation == Activation::snake);
    CHECK(m.hidden()[2].activation == Activation::tsigmoid);
    CHECK(m.hidden()[0].snake_a == 1.0);
    const double limit = std::sqrt(3.0 / 300.0);
    CHECK(m.hidden()[2].dense.weight.cwiseAbs().maxCoeff() <= limit);

    // Parameter blocks: W, b, a | W, b, gamma, beta, a | W, b, gamma, beta | W, b
    CHECK(m.parameter_sizes() ==
          std::vector<std::size_t>{64, 32, 1, 9600, 300, 300, 300, 1, 180000, 600, 600, 600, 38400, 64});

    MlpSpec bad = spec;
    bad.activations.pop_back();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = spec;
    bad.layer_dims[2] = 0;
    CHECK_THROWS_AS(MlpModel::create(bad, 1), std::invalid_argument);
}

TEST_CASE("Neural - forward pass")
{
    // All-zero parameters give a zero output
    MlpModel zero = MlpModel::create(MlpSpec{}, 2);
    for (auto p : zero.parameters())
        std::fill(p.begin(), p.end(), 0.0);
    for (auto &h : zero.hidden())
        if (h.activation == Activation::snake)
            h.snake_a = 1.0;
    CHECK(forward(zero, random_matrix(2, 7, 1), Mode::infer).isZero(0.0));

    // Infer mode is column independent
    const MlpModel m = perturbed_model(MlpSpec{}, 3);
    const Eigen::MatrixXd x = random_matrix(2, 33, 5);
    const Eigen::MatrixXd batched = forward(m, x, Mode::infer);
    for (Eigen::Index c = 0; c < x.cols(); ++c)
    {
        const Eigen::MatrixXd one = forward(m, x.col(c), Mode::infer);
        CHECK((one - batched.col(c)).cwiseAbs().maxCoeff() < 1e-12);
    }

    // Naive per-neuron oracle, infer and train mode
    for (Mode mode : {Mode::infer, Mode::train})
    {
        std::vector<std::vector<double>> h(static_cast<std::size_t>(x.cols()));
        for (Eigen::Index c = 0; c < x.cols(); ++c)
            h[static_cast<std::size_t>(c)] = {x(0, c), x(1, c)};
        for (const auto &layer : m.hidden())
        {
            const auto out = static_cast<std::size_t>(layer.dense.weight.rows());
            std::vector<std::vector<double>> z(h.size(), std::vector<double>(out));
            for (std::size_t s = 0; s < h.size(); ++s)
                for (std::size_t o = 0; o < out; ++o)
                {
                    double acc = layer.dense.bias(static_cast<Eigen::Index>(o));
                    for (std::size_t i = 0; i < h[s].size(); ++i)
                        acc += layer.dense.weight(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) * h[s][i];
                    z[s][o] = acc;
                }
            if (layer.bn)
                for (std::size_t o = 0; o < out; ++o)
                {
                    const auto oi = static_cast<Eigen::Index>(o);
                    double mean = layer.bn->running_mean(oi), var = layer.bn->running_var(oi);
                    if (mode == Mode::train)
                    {
                        mean = 0.0;
                        for (const auto &row : z)
                            mean += row[o];
                        mean /= static_cast<double>(z.size());
                        var = 0.0;
                        for (const auto &row : z)
                            var += (row[o] - mean) * (row[o] - mean);
                        var /= static_cast<double>(z.size());
                    }
                    for (auto &row : z)
                        row[o] = layer.bn->gamma(oi) * (row[o] - mean) / std::sqrt(var + layer.bn->epsilon) +
                                 layer.bn->beta(oi);
                }
            for (auto &row : z)
                for (auto &v : row)
                    v = layer.activation == Activation::snake ? naive_snake(v, layer.snake_a) : std::tanh(v);
            h = std::move(z);
        }
        const Eigen::MatrixXd y = forward(m, x, mode);
        double worst = 0.0;
        for (std::size_t s = 0; s < h.size(); ++s)
            for (Eigen::Index o = 0; o < y.rows(); ++o)
            {
                double acc = m.output().bias(o);
                for (std::size_t i = 0; i < h[s].size(); ++i)
                    acc += m.output().weight(o, static_cast<Eigen::Index>(i)) * h[s][i];
                worst = std::max(worst, std::abs(acc - y(o, static_cast<Eigen::Index>(s))));
            }
        CHECK(worst < 1e-10);
    }

    CHECK_THROWS_AS(forward(m, random_matrix(3, 4, 1), Mode::infer), std::invalid_argument);
}

TEST_CASE("Neural - gradients match central differences")
{
    const MlpSpec spec = tiny_spec();
    const Eigen::MatrixXd x = random_matrix(2, 6, 11), y = random_matrix(2, 6, 12);
    CHECK(worst_gradient_error(perturbed_model(spec, 21), x, y) < 1e-5);

    MlpSpec plain = spec;
    plain.batch_norm = {false, false, false};
    CHECK(worst_gradient_error(perturbed_model(plain, 22), x, y) < 1e-5);
    CHECK(worst_gradient_error(perturbed_model(plain, 24), x.col(0), y.col(0)) < 1e-5);

    CHECK(oracle::gradient_suite() < 1e-5);
}

TEST_CASE("Neural - backward properties")
{
    const MlpModel m = perturbed_model(tiny_spec(), 31);
    const Eigen::MatrixXd x = random_matrix(2, 8, 32);

    ForwardCache cache;
    const Eigen::MatrixXd pred = forward(m, x, Mode::train, &cache);
    for (const auto &b : backward(m, cache, pred).blocks)
        CHECK(b.isZero(0.0));

    // Duplicating the batch leaves the mean-reduced gradient unchanged
    const Eigen::MatrixXd y = random_matrix(2, 8, 33);
    const Gradients g1 = backward(m, cache, y);
    Eigen::MatrixXd x2(2, 16), y2(2, 16);
    x2 << x, x;
    y2 << y, y;
    ForwardCache cache2;
    forward(m, x2, Mode::train, &cache2);
    const Gradients g2 = backward(m, cache2, y2);
    for (std::size_t b = 0; b < g1.blocks.size(); ++b)
        CHECK((g1.blocks[b] - g2.blocks[b]).cwiseAbs().maxCoeff() < 1e-12);

    ForwardCache infer;
    forward(m, x, Mode::infer, &infer);
    CHECK_THROWS_AS(backward(m, infer, y), std::logic_error);
    CHECK_THROWS_AS(backward(m, ForwardCache{}, y), std::logic_error);
    CHECK_THROWS_AS(backward(m, cache, random_matrix(3, 8, 1)), std::invalid_argument);
    CHECK_THROWS_AS(mse_loss(Eigen::MatrixXd(0, 0), Eigen::MatrixXd(0, 0)), std::invalid_argument);
}

TEST_CASE("Neural - Adam")
{
    std::vector<double> p{1.0, -2.0};
    std::vector<std::span<double>> params{std::span<double>(p)};
    AdamState st = AdamState::zeros({2});
    Gradients zero{{Eigen::VectorXd::Zero(2)}};
    adam_step(params, zero, st, 1, {});
    CHECK(p == std::vector<double>{1.0, -2.0});

    std::vector<double> q{0.0};
    std::vector<std::span<double>> qp{std::span<double>(q)};
    AdamState sq = AdamState::zeros({1});
    adam_step(qp, Gradients{{Eigen::VectorXd::Constant(1, 1.0)}}, sq, 1, {});
    CHECK(q[0] == Approx(-0.0005).epsilon(1e-6));

    // Constant gradient: each step moves by about -lr * sign(g)
    std::vector<double> r{0.3, 0.3};
    std::vector<std::span<double>> rp{std::span<double>(r)};
    AdamState sr = AdamState::zeros({2});
    Eigen::VectorXd gr(2);
    gr << 4.0, -0.01;
    adam_step(rp, Gradients{{gr}}, sr, 1, {});
    CHECK(r[0] == Approx(0.3 - 0.0005).epsilon(1e-6));
    CHECK(r[1] == Approx(0.3 + 0.0005).epsilon(1e-5));

    // Pure state transition
    std::vector<double> a{0.1}, b{0.1};
    std::vector<std::span<double>> ap{std::span<double>(a)}, bp{std::span<double>(b)};
    AdamState sa = AdamState::zeros({1}), sb = AdamState::zeros({1});
    for (long t = 1; t <= 5; ++t)
    {
        const Gradients g{{Eigen::VectorXd::Constant(1, 0.3 * static_cast<double>(t))}};
        adam_step(ap, g, sa, t, {});
        adam_step(bp, g, sb, t, {});
    }
    CHECK(a == b);
    CHECK(sa.m[0] == sb.m[0]);

    CHECK_THROWS_AS(adam_step(params, Gradients{{Eigen::VectorXd::Zero(3)}}, st, 2, {}), std::invalid_argument);
    CHECK_THROWS_AS(adam_step(params, Gradients{}, st, 2, {}), std::invalid_argument);
    CHECK_THROWS_AS(adam_step(params, zero, st, 0, {}), std::invalid_argument);
}

TEST_CASE("Neural - training")
{
    // Constant target, one full batch per epoch. The running batch-norm statistics lag the
    // batch statistics over 200 updates, so the infer-mode loss is only required to drop.
    const Eigen::MatrixXd x = random_matrix(2, 100, 41);
    const Eigen::MatrixXd y = Eigen::MatrixXd::Constant(64, 100, 0.7);
    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.batch_size = 100;
    cfg.learning_rate = 5e-3;
    cfg.seed = 5;
    const auto r = fit(x, y, x, y, MlpSpec{}, cfg);
    CHECK(r.train_loss.size() == 200);
    CHECK(r.val_loss.size() == 200);
    CHECK(*std::min_element(r.train_loss.begin(), r.train_loss.end()) < 1e-4);
    CHECK(r.val_loss[static_cast<std::size_t>(r.best_epoch - 1)] < 0.1 * r.val_loss.front());
    CHECK(r.model.is_valid());

    // Reproducible trace, best validation not worse than epoch 1
    MlpSpec small = tiny_spec();
    small.layer_dims = {2, 8, 16, 8, 3};
    const Eigen::MatrixXd xt = random_matrix(2, 300, 42), yt = random_matrix(3, 300, 43);
    const Eigen::MatrixXd xv = random_matrix(2, 60, 44), yv = random_matrix(3, 60, 45);
    TrainConfig c2;
    c2.epochs = 15;
    c2.batch_size = 32;
    c2.seed = 9;
    const auto a = fit(xt, yt, xv, yv, small, c2);
    const auto b = fit(xt, yt, xv, yv, small, c2);
    CHECK(a.train_loss == b.train_loss);
    CHECK(a.val_loss == b.val_loss);
    CHECK(a.val_loss[static_cast<std::size_t>(a.best_epoch - 1)] <= a.val_loss.front());
    CHECK(evaluate_loss(a.model, xv, yv) == a.val_loss[static_cast<std::size_t>(a.best_epoch - 1)]);
    c2.seed = 10;
    CHECK(fit(xt, yt, xv, yv, small, c2).train_loss != a.train_loss);

    // Running statistics stay positive; inference is batch independent after training
    CHECK(a.model.is_valid());
    const Eigen::MatrixXd all = forward(a.model, xv, Mode::infer);
    const Eigen::MatrixXd part = forward(a.model, xv.leftCols(7), Mode::infer);
    CHECK((all.leftCols(7) - part).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(fit(Eigen::MatrixXd(2, 0), Eigen::MatrixXd(3, 0), xv, yv, small, c2), std::invalid_argument);
    CHECK_THROWS_AS(fit(xt, yt, xv, yv.topRows(2), small, c2), std::invalid_argument);
    TrainConfig bad = c2;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(fit(xt, yt, xv, yv, small, bad), std::invalid_argument);
}

TEST_CASE("Neural - prediction and serialization")
{
    PhaseRegressor reg;
    CHECK_FALSE(reg.fitted());
    CHECK_THROWS_AS(predict_phases(reg.model, reg.scalers, BeamPointingAngle(10.0, 90.0)), std::logic_error);
    CHECK_THROWS_AS(io::regressor_to_json(reg), std::logic_error);

    reg.spec = MlpSpec{};
    reg.model = perturbed_model(reg.spec, 51);
    Eigen::MatrixXd feats(2, 50), phases = random_matrix(64, 50, 52, 90.0);
    feats.row(0) = random_matrix(1, 50, 53, 30.0).array() + 60.0;
    feats.row(1) = random_matrix(1, 50, 54, 30.0).array() + 90.0;
    reg.scalers = {FeatureScaler::fit(feats), FeatureScaler::fit(phases)};
    reg.config.seed = 77;
    reg.train_loss = {0.5, 0.25};
    reg.val_loss = {0.6, 0.3};
    reg.best_epoch = 2;
    REQUIRE(reg.fitted());

    std::vector<BeamPointingAngle> bpas;
    for (int i = 0; i < 20; ++i)
        bpas.emplace_back(6.0 * i, 30.0 + 6.0 * i);
    const auto pred = predict_phases(reg.model, reg.scalers, bpas);
    REQUIRE(pred.size() == bpas.size());
    for (std::size_t i = 0; i < bpas.size(); ++i)
    {
        CHECK(pred[i].size() == 64);
        for (double p : pred[i].degrees())
        {
            CHECK(p > -180.0);
            CHECK(p <= 180.0);
        }
        const auto one = predict_phases(reg.model, reg.scalers, bpas[i]);
        for (std::size_t n = 0; n < 64; ++n)
            CHECK(std::abs(one[n] - pred[i][n]) < 1e-9);
    }

    const auto back = io::regressor_from_json(io::regressor_to_json(reg));
    CHECK(back.spec.layer_dims == reg.spec.layer_dims);
    CHECK(back.config.seed == 77);
    CHECK(back.best_epoch == 2);
    CHECK(back.val_loss == reg.val_loss);
    CHECK(predict_phases(back.model, back.scalers, bpas) == pred);
    CHECK(io::regressor_to_json(back) == io::regressor_to_json(reg));

    CHECK_THROWS_AS(io::regressor_from_json("{\"format\":\"beamlab-model\",\"version\":2}"), std::runtime_error);
    CHECK_THROWS_AS(io::regressor_from_json("{\"format\":\"beamlab-model\",\"version\":1}"), std::runtime_error);
}

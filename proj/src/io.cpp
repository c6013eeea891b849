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

#include "beamlab/io.hpp"
#include "beamlab/harness/csv.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace beamlab::io
{
    using nlohmann::json;

    namespace
    {
        constexpr int codebook_version = 1;
        constexpr int model_version = 1;

        void check_format(const json &j, std::string_view format, int version)
        {
            if (!j.is_object() || j.value("format", "") != format)
                throw std::runtime_error("Not a " + std::string(format) + " document.");
            if (j.value("version", -1) != version)
                throw std::runtime_error("Unsupported " + std::string(format) + " version.");
        }

        json parse(std::string_view text)
        {
            try
            {
                return json::parse(text);
            }
            catch (const json::exception &e)
            {
                throw std::runtime_error(std::string("Malformed JSON: ") + e.what());
            }
        }

        // Everything below throws json::exception on missing keys or wrong types; callers convert
        template <class F>
        auto guarded(F &&f) -> decltype(f())
        {
            try
            {
                return f();
            }
            catch (const json::exception &e)
            {
                throw std::runtime_error(std::string("Invalid document: ") + e.what());
            }
        }

        json layout_json(const PlanarLayout &l)
        {
            return {{"rows", l.rows},
                    {"cols", l.cols},
                    {"spacing_wl", l.spacing_wl},
                    {"element", std::string(to_string(l.element))},
                    {"boresight_az_deg", l.boresight_az_deg},
                    {"boresight_el_deg", l.boresight_el_deg}};
        }

        PlanarLayout layout_of(const json &j)
        {
            PlanarLayout l;
            l.rows = j.at("rows").get<int>();
            l.cols = j.at("cols").get<int>();
            l.spacing_wl = j.at("spacing_wl").get<double>();
            l.element = parse_element_model(j.at("element").get<std::string>());
            l.boresight_az_deg = j.at("boresight_az_deg").get<double>();
            l.boresight_el_deg = j.at("boresight_el_deg").get<double>();
            return l;
        }

        json vec_json(const Eigen::VectorXd &v)
        {
            return std::vector<double>(v.data(), v.data() + v.size());
        }

        Eigen::VectorXd vec_of(const json &j)
        {
            const auto v = j.get<std::vector<double>>();
            return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
        }

        // Row-major flattened
        json mat_json(const Eigen::MatrixXd &m)
        {
            std::vector<double> flat;
            flat.reserve(static_cast<std::size_t>(m.size()));
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                for (Eigen::Index c = 0; c < m.cols(); ++c)
                    flat.push_back(m(r, c));
            return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(flat)}};
        }

        Eigen::MatrixXd mat_of(const json &j)
        {
            const auto rows = j.at("rows").get<Eigen::Index>();
            const auto cols = j.at("cols").get<Eigen::Index>();
            const auto flat = j.at("data").get<std::vector<double>>();
            if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(flat.size()) != rows * cols)
                throw std::runtime_error("Matrix data does not match its shape.");
            Eigen::MatrixXd m(rows, cols);
            for (Eigen::Index r = 0; r < rows; ++r)
                for (Eigen::Index c = 0; c < cols; ++c)
                    m(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
            return m;
        }

        json dense_json(const nn::DenseLayer &d)
        {
            return {{"weight", mat_json(d.weight)}, {"bias", vec_json(d.bias)}};
        }

        nn::DenseLayer dense_of(const json &j)
        {
            return {mat_of(j.at("weight")), vec_of(j.at("bias"))};
        }

        json scaler_json(const nn::FeatureScaler &s)
        {
            return {{"kind", std::string(nn::to_string(s.kind()))}, {"offset", vec_json(s.offset())},
                    {"scale", vec_json(s.scale())}};
        }

        nn::FeatureScaler scaler_of(const json &j)
        {
            return {nn::parse_scaler_kind(j.at("kind").get<std::string>()), vec_of(j.at("offset")),
                    vec_of(j.at("scale"))};
        }
    }


    std::string geometry_descriptor(const ArrayGeometry &geom)
    {
        std::string s;
        if (const auto &l = geom.layout())
        {
            s = "planar " + std::to_string(l->rows) + "x" + std::to_string(l->cols) + " d=";
            csv::append_number(s, l->spacing_wl);
            s += "wl " + std::string(to_string(l->element)) + " boresight=(";
            csv::append_number(s, l->boresight_az_deg);
            s += ",";
            csv::append_number(s, l->boresight_el_deg);
            s += ")";
        }
        else
            s = "custom N=" + std::to_string(geom.size()) + " " + std::string(to_string(geom.element_model()));
        return s;
    }

    std::string layout_to_json(const PlanarLayout &layout)
    {
        return layout_json(layout).dump();
    }

    PlanarLayout layout_from_json(std::string_view text)
    {
        const json j = parse(text);
        return guarded([&] { return layout_of(j); });
    }

    std::string codebook_to_json(const Codebook &cb)
    {
        json words = json::array();
        for (const auto &w : cb.codewords)
            words.push_back(w.degrees());
        json beams = json::array();
        for (const auto &b : cb.calibrated_bpas)
            beams.push_back({b.az_deg(), b.el_deg()});
        const json j = {{"format", "beamlab-codebook"},
                        {"version", codebook_version},
                        {"size", cb.size},
                        {"bits", cb.bits},
                        {"layout", layout_json(cb.layout)},
                        {"codewords", std::move(words)},
                        {"calibrated_bpas", std::move(beams)}};
        return j.dump();
    }

    Codebook codebook_from_json(std::string_view text)
    {
        const json j = parse(text);
        check_format(j, "beamlab-codebook", codebook_version);
        return guarded([&] {
            Codebook cb;
            cb.size = j.at("size").get<int>();
            cb.bits = j.at("bits").get<int>();
            cb.layout = layout_of(j.at("layout"));
            const std::size_t n = static_cast<std::size_t>(cb.layout.rows) * static_cast<std::size_t>(cb.layout.cols);
            for (const auto &w : j.at("codewords"))
            {
                auto phases = w.get<std::vector<double>>();
                if (phases.size() != n)
                    throw std::runtime_error("Codeword length does not match the layout.");
                cb.codewords.emplace_back(std::move(phases));
            }
            if (static_cast<int>(cb.codewords.size()) != cb.size)
                throw std::runtime_error("Codeword count does not match the codebook size.");
            for (const auto &b : j.at("calibrated_bpas"))
                cb.calibrated_bpas.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
            if (!cb.calibrated_bpas.empty() && cb.calibrated_bpas.size() != cb.codewords.size())
                throw std::runtime_error("Calibration table does not match the codeword count.");
            return cb;
        });
    }

    void save_codebook(const std::filesystem::path &path, const Codebook &cb)
    {
        write_text(path, codebook_to_json(cb));
    }

    Codebook load_codebook(const std::filesystem::path &path)
    {
        return codebook_from_json(read_text(path));
    }

    std::string regressor_to_json(const nn::PhaseRegressor &reg)
    {
        if (!reg.fitted())
            throw std::logic_error("Regressor is not fitted.");
        json spec = {{"layer_dims", reg.spec.layer_dims},
                     {"activations", json::array()},
                     {"batch_norm", json::array()},
                     {"snake_init", reg.spec.snake_init},
                     {"bn_momentum", reg.spec.bn_momentum},
                     {"bn_epsilon", reg.spec.bn_epsilon}};
        for (auto a : reg.spec.activations)
            spec["activations"].push_back(std::string(nn::to_string(a)));
        for (bool b : reg.spec.batch_norm)
            spec["batch_norm"].push_back(b);

        json hidden = json::array();
        for (const auto &h : reg.model.hidden())
        {
            json l = {{"dense", dense_json(h.dense)},
                      {"activation", std::string(nn::to_string(h.activation))},
                      {"snake_a", h.snake_a}};
            if (h.bn)
                l["batch_norm"] = {{"gamma", vec_json(h.bn->gamma)},
                                   {"beta", vec_json(h.bn->beta)},
                                   {"running_mean", vec_json(h.bn->running_mean)},
                                   {"running_var", vec_json(h.bn->running_var)},
                                   {"momentum", h.bn->momentum},
                                   {"epsilon", h.bn->epsilon}};
            hidden.push_back(std::move(l));
        }

        const auto &c = reg.config;
        const json j = {{"format", "beamlab-model"},
                        {"version", model_version},
                        {"spec", std::move(spec)},
                        {"hidden", std::move(hidden)},
                        {"output", dense_json(reg.model.output())},
                        {"scalers", {{"input", scaler_json(reg.scalers.input)}, {"output", scaler_json(reg.scalers.output)}}},
                        {"train_config",
                         {{"learning_rate", c.learning_rate},
                          {"batch_size", c.batch_size},
                          {"epochs", c.epochs},
                          {"beta1", c.beta1},
                          {"beta2", c.beta2},
                          {"epsilon", c.epsilon},
                          {"seed", c.seed}}},
                        {"train_loss", reg.train_loss},
                        {"val_loss", reg.val_loss},
                        {"best_epoch", reg.best_epoch}};
        return j.dump();
    }

    nn::PhaseRegressor regressor_from_json(std::string_view text)
    {
        const json j = parse(text);
        check_format(j, "beamlab-model", model_version);
        return guarded([&] {
            nn::PhaseRegressor reg;
            const json &s = j.at("spec");
            reg.spec.layer_dims = s.at("layer_dims").get<std::vector<int>>();
            reg.spec.activations.clear();
            for (const auto &a : s.at("activations"))
                reg.spec.activations.push_back(nn::parse_activation(a.get<std::string>()));
            reg.spec.batch_norm = s.at("batch_norm").get<std::vector<bool>>();
            reg.spec.snake_init = s.at("snake_init").get<double>();
            reg.spec.bn_momentum = s.at("bn_momentum").get<double>();
            reg.spec.bn_epsilon = s.at("bn_epsilon").get<double>();
            reg.spec.validate();

            const json &hj = j.at("hidden");
            if (hj.size() + 2 != reg.spec.layer_dims.size())
                throw std::runtime_error("Hidden layer count does not match the architecture.");
            std::vector<nn::HiddenLayer> hidden;
            for (std::size_t i = 0; i < hj.size(); ++i)
            {
                nn::HiddenLayer h;
                h.dense = dense_of(hj[i].at("dense"));
                h.activation = nn::parse_activation(hj[i].at("activation").get<std::string>());
                h.snake_a = hj[i].at("snake_a").get<double>();
                if (hj[i].contains("batch_norm"))
                {
                    const json &b = hj[i]["batch_norm"];
                    h.bn = nn::BatchNorm{vec_of(b.at("gamma")),        vec_of(b.at("beta")),
                                         vec_of(b.at("running_mean")), vec_of(b.at("running_var")),
                                         b.at("momentum").get<double>(), b.at("epsilon").get<double>()};
                }
                hidden.push_back(std::move(h));
            }
            nn::DenseLayer out = dense_of(j.at("output"));
            try
            {
                reg.model = nn::MlpModel(std::move(hidden), std::move(out));
            }
            catch (const std::invalid_argument &e)
            {
                throw std::runtime_error(std::string("Invalid model: ") + e.what());
            }
            if (reg.model.layer_dims() != reg.spec.layer_dims)
                throw std::runtime_error("Model parameters do not match the architecture.");

            reg.scalers.input = scaler_of(j.at("scalers").at("input"));
            reg.scalers.output = scaler_of(j.at("scalers").at("output"));

            const json &c = j.at("train_config");
            reg.config.learning_rate = c.at("learning_rate").get<double>();
            reg.config.batch_size = c.at("batch_size").get<int>();
            reg.config.epochs = c.at("epochs").get<int>();
            reg.config.beta1 = c.at("beta1").get<double>();
            reg.config.beta2 = c.at("beta2").get<double>();
            reg.config.epsilon = c.at("epsilon").get<double>();
            reg.config.seed = c.at("seed").get<std::uint64_t>();
            reg.train_loss = j.at("train_loss").get<std::vector<double>>();
            reg.val_loss = j.at("val_loss").get<std::vector<double>>();
            reg.best_epoch = j.at("best_epoch").get<int>();
            if (!reg.fitted())
                throw std::runtime_error("Scalers do not match the model.");
            return reg;
        });
    }

    void save_regressor(const std::filesystem::path &path, const nn::PhaseRegressor &reg)
    {
        write_text(path, regressor_to_json(reg));
    }

    nn::PhaseRegressor load_regressor(const std::filesystem::path &path)
    {
        return regressor_from_json(read_text(path));
    }

    std::string pattern_csv(const RadiationPattern &pattern)
    {
        std::string text = "phi_deg,theta_deg,magnitude\n";
        const auto &dirs = pattern.grid->directions();
        for (std::size_t i = 0; i < dirs.size(); ++i)
        {
            csv::append_number(text, dirs[i].az_deg());
            text += ',';
            csv::append_number(text, dirs[i].el_deg());
            text += ',';
            csv::append_number(text, pattern.magnitude[i]);
            text += '\n';
        }
        return text;
    }

    std::string read_text(const std::filesystem::path &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw std::runtime_error("Cannot open '" + path.string() + "'.");
        std::ostringstream ss;
        ss << is.rdbuf();
        return ss.str();
    }

    void write_text(const std::filesystem::path &path, std::string_view text)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw std::runtime_error("Cannot open '" + path.string() + "' for writing.");
        os.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!os)
            throw std::runtime_error("Failed writing '" + path.string() + "'.");
    }
}

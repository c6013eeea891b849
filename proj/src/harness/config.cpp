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

#include "beamlab/harness/config.hpp"
#include "beamlab/codebook.hpp"
#include "beamlab/harness/csv.hpp"
#include "beamlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>

namespace beamlab
{
    namespace
    {
        std::string_view trim(std::string_view s)
        {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
                s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.remove_suffix(1);
            return s;
        }

        template <class T>
        T parse_int(std::string_view v)
        {
            T out{};
            const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
            if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || v.empty())
                throw std::invalid_argument("Expected an integer, got '" + std::string(v) + "'.");
            return out;
        }

        double parse_real(std::string_view v)
        {
            try
            {
                return csv::parse_number(v);
            }
            catch (const std::runtime_error &)
            {
                throw std::invalid_argument("Expected a number, got '" + std::string(v) + "'.");
            }
        }

        std::string num(double v)
        {
            return csv::format_number(v);
        }

        template <class T>
        std::string join(const std::vector<T> &v)
        {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                if (i)
                    s += ',';
                if constexpr (std::is_floating_point_v<T>)
                    s += num(v[i]);
                else
                    s += std::to_string(v[i]);
            }
            return s;
        }

        std::vector<std::string_view> items(std::string_view v)
        {
            std::vector<std::string_view> out;
            for (auto f : csv::split(v))
                out.push_back(trim(f));
            return out;
        }

        struct Field
        {
            std::string_view key;
            std::function<void(RunConfig &, std::string_view)> set;
            std::function<std::string(const RunConfig &)> get;
        };

        const std::vector<Field> &fields()
        {
            static const std::vector<Field> f{
                {"seed", [](RunConfig &c, std::string_view v) { c.seed = parse_int<std::uint64_t>(v); },
                 [](const RunConfig &c) { return std::to_string(c.seed); }},
                {"geometry.rows", [](RunConfig &c, std::string_view v) { c.layout.rows = parse_int<int>(v); },
                 [](const RunConfig &c) { return std::to_string(c.layout.rows); }},
                {"geometry.cols", [](RunConfig &c, std::string_view v) { c.layout.cols = parse_int<int>(v); },
                 [](const RunConfig &c) { return std::to_string(c.layout.cols); }},
                {"geometry.spacing_wl", [](RunConfig &c, std::string_view v) { c.layout.spacing_wl = parse_real(v); },
                 [](const RunConfig &c) { return num(c.layout.spacing_wl); }},
                {"geometry.element",
                 [](RunConfig &c, std::string_view v) { c.layout.element = parse_element_model(v); },
                 [](const RunConfig &c) { return std::string(to_string(c.layout.element)); }},
                {"geometry.boresight_az_deg",
                 [](RunConfig &c, std::string_view v) { c.layout.boresight_az_deg = parse_real(v); },
                 [](const RunConfig &c) { return num(c.layout.boresight_az_deg); }},
                {"geometry.boresight_el_deg",
                 [](RunConfig &c, std::string_view v) { c.layout.boresight_el_deg = parse_real(v); },
                 [](const RunConfig &c) { return num(c.layout.boresight_el_deg); }},
                {"sector.az_lo", [](RunConfig &c, std::string_view v) { c.sector.az_lo = parse_real(v); },
                 [](const RunConfig &c) { return num(c.sector.az_lo); }},
                {"sector.az_hi", [](RunConfig &c, std::string_view v) { c.sector.az_hi = parse_real(v); },
                 [](const RunConfig &c) { return num(c.sector.az_hi); }},
                {"sector.el_lo", [](RunConfig &c, std::string_view v) { c.sector.el_lo = parse_real(v); },
                 [](const RunConfig &c) { return num(c.sector.el_lo); }},
                {"sector.el_hi", [](RunConfig &c, std::string_view v) { c.sector.el_hi = parse_real(v); },
                 [](const RunConfig &c) { return num(c.sector.el_hi); }},
                {"sector.count", [](RunConfig &c, std::string_view v) { c.sector.count = parse_int<std::size_t>(v); },
                 [](const RunConfig &c) { return std::to_string(c.sector.count); }},
                {"split",
                 [](RunConfig &c, std::string_view v) {
                     const auto it = items(v);
                     if (it.size() != 3)
                         throw std::invalid_argument("split needs three ratios.");
                     for (std::size_t i = 0; i < 3; ++i)
                         c.split[i] = parse_real(it[i]);
                 },
                 [](const RunConfig &c) { return join(std::vector<double>(c.split.begin(), c.split.end())); }},
                {"train.learning_rate", [](RunConfig &c, std::string_view v) { c.train.learning_rate = parse_real(v); },
                 [](const RunConfig &c) { return num(c.train.learning_rate); }},
                {"train.batch_size", [](RunConfig &c, std::string_view v) { c.train.batch_size = parse_int<int>(v); },
                 [](const RunConfig &c) { return std::to_string(c.train.batch_size); }},
                {"train.epochs", [](RunConfig &c, std::string_view v) { c.train.epochs = parse_int<int>(v); },
                 [](const RunConfig &c) { return std::to_string(c.train.epochs); }},
                {"train.beta1", [](RunConfig &c, std::string_view v) { c.train.beta1 = parse_real(v); },
                 [](const RunConfig &c) { return num(c.train.beta1); }},
                {"train.beta2", [](RunConfig &c, std::string_view v) { c.train.beta2 = parse_real(v); },
                 [](const RunConfig &c) { return num(c.train.beta2); }},
                {"train.epsilon", [](RunConfig &c, std::string_view v) { c.train.epsilon = parse_real(v); },
                 [](const RunConfig &c) { return num(c.train.epsilon); }},
                {"train.scaler", [](RunConfig &c, std::string_view v) { c.scaler = nn::parse_scaler_kind(v); },
                 [](const RunConfig &c) { return std::string(nn::to_string(c.scaler)); }},
                {"model.batch_norm",
                 [](RunConfig &c, std::string_view v) {
                     const auto it = items(v);
                     if (it.size() != 3)
                         throw std::invalid_argument("model.batch_norm needs one flag per hidden layer.");
                     for (std::size_t i = 0; i < 3; ++i)
                     {
                         if (it[i] != "true" && it[i] != "false")
                             throw std::invalid_argument("Expected true or false, got '" + std::string(it[i]) + "'.");
                         c.batch_norm[i] = it[i] == "true";
                     }
                 },
                 [](const RunConfig &c) {
                     std::string s;
                     for (std::size_t i = 0; i < c.batch_norm.size(); ++i)
                         s += (i ? "," : "") + std::string(c.batch_norm[i] ? "true" : "false");
                     return s;
                 }},
                {"codebook.sizes",
                 [](RunConfig &c, std::string_view v) {
                     c.codebook_sizes.clear();
                     for (auto s : items(v))
                         c.codebook_sizes.push_back(parse_int<int>(s));
                 },
                 [](const RunConfig &c) { return join(c.codebook_sizes); }},
                {"codebook.bits", [](RunConfig &c, std::string_view v) { c.codebook_bits = parse_int<int>(v); },
                 [](const RunConfig &c) { return std::to_string(c.codebook_bits); }},
                {"eval.grid_step", [](RunConfig &c, std::string_view v) { c.grid_step = parse_real(v); },
                 [](const RunConfig &c) { return num(c.grid_step); }},
                {"eval.peak_step", [](RunConfig &c, std::string_view v) { c.peak_step = parse_real(v); },
                 [](const RunConfig &c) { return num(c.peak_step); }},
                {"eval.test_count", [](RunConfig &c, std::string_view v) { c.test_count = parse_int<std::size_t>(v); },
                 [](const RunConfig &c) { return std::to_string(c.test_count); }},
                {"sweep.bits",
                 [](RunConfig &c, std::string_view v) {
                     c.sweep_bits.clear();
                     for (auto s : items(v))
                         c.sweep_bits.push_back(parse_int<int>(s));
                 },
                 [](const RunConfig &c) { return join(c.sweep_bits); }},
            };
            return f;
        }
    }

    void RunConfig::validate() const
    {
        if (layout.rows < 1 || layout.cols < 1 || !(layout.spacing_wl > 0.0))
            throw std::invalid_argument("Geometry needs positive rows, cols and spacing.");
        sector.validate();
        if (std::abs(split[0] + split[1] + split[2] - 1.0) > 1e-9 || split[0] < 0 || split[1] < 0 || split[2] < 0)
            throw std::invalid_argument("Split ratios must be non-negative and sum to 1.");
        train.validate();
        for (int k : codebook_sizes)
        {
            const auto r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(k))));
            if (k < 1 || r * r != k || !is_power_of_two(r))
                throw std::invalid_argument("Codebook size " + std::to_string(k) +
                                            " is not the square of a power of two.");
        }
        for (int b : sweep_bits)
            if (b < 1 || b > 16)
                throw std::invalid_argument("Sweep bits must be in [1, 16].");
        if (codebook_bits < 1 || codebook_bits > 16)
            throw std::invalid_argument("Codebook bits must be in [1, 16].");
        if (!(grid_step > 0.0) || !(peak_step > 0.0))
            throw std::invalid_argument("Grid steps must be positive.");
        if (test_count == 0)
            throw std::invalid_argument("test_count must be positive.");
    }

    RunConfig full_scale(RunConfig cfg)
    {
        cfg.sector.count = 1500000;
        cfg.train.epochs = 1200;
        cfg.test_count = static_cast<std::size_t>(std::llround(1500000 * cfg.split[2]));
        return cfg;
    }

    RunConfig parse_config(std::string_view text, RunConfig cfg)
    {
        std::map<std::string, std::string, std::less<>> values;
        std::size_t line_no = 0;
        while (!text.empty())
        {
            ++line_no;
            const auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw std::invalid_argument("Config line " + std::to_string(line_no) + " has no '='.");
            const std::string key(trim(line.substr(0, eq)));
            if (!values.emplace(key, std::string(trim(line.substr(eq + 1)))).second)
                throw std::invalid_argument("Config key '" + key + "' given twice.");
        }

        // The scale preset goes first so explicit keys override it
        if (auto it = values.find("scale"); it != values.end())
        {
            if (it->second == "full")
                cfg = full_scale(cfg);
            else if (it->second != "desk")
                throw std::invalid_argument("scale must be 'desk' or 'full'.");
            values.erase(it);
        }
        for (const auto &[key, value] : values)
        {
            const auto &fs = fields();
            const auto f = std::find_if(fs.begin(), fs.end(), [&](const Field &x) { return x.key == key; });
            if (f == fs.end())
                throw std::invalid_argument("Unknown config key '" + key + "'.");
            try
            {
                f->set(cfg, value);
            }
            catch (const std::invalid_argument &e)
            {
                throw std::invalid_argument(key + ": " + e.what());
            }
        }
        cfg.validate();
        return cfg;
    }

    RunConfig load_config(const std::filesystem::path &path, RunConfig base)
    {
        return parse_config(io::read_text(path), std::move(base));
    }

    std::string to_config_text(const RunConfig &cfg)
    {
        std::string s;
        for (const auto &f : fields())
        {
            s += f.key;
            s += " = ";
            s += f.get(cfg);
            s += '\n';
        }
        return s;
    }

    std::string config_hash(const RunConfig &cfg)
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : to_config_text(cfg))
        {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        static constexpr char hex[] = "0123456789abcdef";
        std::string out(16, '0');
        for (int i = 15; i >= 0; --i, h >>= 4)
            out[static_cast<std::size_t>(i)] = hex[h & 0xf];
        return out;
    }

    StageSeeds derive_seeds(std::uint64_t master)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)};
        std::array<std::uint32_t, 10> w{};
        seq.generate(w.begin(), w.end());
        auto pick = [&](std::size_t i) { return (std::uint64_t{w[2 * i]} << 32) | w[2 * i + 1]; };
        return {pick(0), pick(1), pick(2), pick(3), pick(4)};
    }
}

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

#include "beamlab/harness/report.hpp"
#include "beamlab/harness/csv.hpp"
#include "beamlab/io.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace beamlab::report
{
    namespace
    {
        constexpr std::string_view samples_header =
            "target_phi,target_theta,achieved_phi,achieved_theta,central_angle_deg,cosine_similarity";

        void require_samples(const EvalReport &r)
        {
            if (r.samples.empty())
                throw std::invalid_argument("Report '" + r.approach + "' has no samples.");
        }

        nlohmann::json quantile_json(const std::array<double, 4> &q)
        {
            nlohmann::json j = nlohmann::json::object();
            for (std::size_t i = 0; i < q.size(); ++i)
                j["p" + std::to_string(static_cast<int>(report_percentiles[i]))] = q[i];
            return j;
        }
    }

    void write_samples_csv(const std::filesystem::path &path, const EvalReport &report)
    {
        require_samples(report);
        std::string text(samples_header);
        text += '\n';
        for (const auto &s : report.samples)
        {
            for (double v : {s.target.az_deg(), s.target.el_deg(), s.achieved.az_deg(), s.achieved.el_deg(),
                             s.central_angle_deg})
            {
                csv::append_number(text, v);
                text += ',';
            }
            csv::append_number(text, s.cosine_similarity);
            text += '\n';
        }
        io::write_text(path, text);
    }

    std::vector<MetricSample> read_samples_csv(const std::filesystem::path &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw std::runtime_error("Cannot open '" + path.string() + "'.");
        std::string line;
        if (std::getline(is, line) && !line.empty() && line.back() == '\r')
            line.pop_back();
        if (line != samples_header)
            throw std::runtime_error("'" + path.string() + "' is not a per-sample report.");

        std::vector<MetricSample> out;
        while (std::getline(is, line))
        {
            if (line.empty())
                continue;
            const auto v = csv::parse_numbers(line);
            if (v.size() != 6)
                throw std::runtime_error("Per-sample row with " + std::to_string(v.size()) + " fields.");
            out.push_back({BeamPointingAngle(v[0], v[1]), BeamPointingAngle(v[2], v[3]), v[4], v[5]});
        }
        return out;
    }

    std::string summary_json(std::span<const EvalReport> reports)
    {
        if (reports.empty())
            throw std::invalid_argument("No reports to summarize.");
        nlohmann::json list = nlohmann::json::array();
        for (const auto &r : reports)
        {
            require_samples(r);
            nlohmann::json j = {{"approach", r.approach},
                                {"bits", r.bits ? nlohmann::json(*r.bits) : nlohmann::json(nullptr)},
                                {"samples", r.samples.size()},
                                {"grid", r.grid},
                                {"geometry", r.geometry},
                                {"seed", r.seed},
                                {"config_hash", r.config_hash},
                                {"central_angle_deg", quantile_json(r.central_angle_q)},
                                {"cosine_similarity", quantile_json(r.cosine_similarity_q)}};
            if (r.latency)
                j["latency"] = {{"trials", r.latency->trials},
                                {"median_ns", r.latency->median_ns},
                                {"p95_ns", r.latency->p95_ns},
                                {"hardware", r.latency->hardware}};
            list.push_back(std::move(j));
        }
        const nlohmann::json doc = {{"format", "beamlab-summary"}, {"version", 1}, {"reports", std::move(list)}};
        return doc.dump(2) + "\n";
    }

    std::string cdf_csv(std::span<const EvalReport> reports)
    {
        std::string text = "approach,metric,value,fraction\n";
        for (const auto &r : reports)
        {
            require_samples(r);
            std::vector<double> ca, cs;
            for (const auto &s : r.samples)
            {
                ca.push_back(s.central_angle_deg);
                cs.push_back(s.cosine_similarity);
            }
            for (const auto &[metric, values] :
                 {std::pair<std::string_view, const std::vector<double> &>{"central_angle_deg", ca},
                  std::pair<std::string_view, const std::vector<double> &>{"cosine_similarity", cs}})
            {
                for (const auto &[v, f] : empirical_cdf(values))
                {
                    text += r.approach;
                    text += ',';
                    text += metric;
                    text += ',';
                    csv::append_number(text, v);
                    text += ',';
                    csv::append_number(text, f);
                    text += '\n';
                }
            }
        }
        return text;
    }

    void write_cdf_csv(const std::filesystem::path &path, std::span<const EvalReport> reports)
    {
        io::write_text(path, cdf_csv(reports));
    }
}

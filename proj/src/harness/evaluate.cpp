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

#include "beamlab/harness/evaluate.hpp"
#include "beamlab/io.hpp"

#include <map>
#include <stdexcept>

namespace beamlab
{
    namespace
    {
        constexpr std::size_t block = 128;

        template <class... F>
        struct overloaded : F...
        {
            using F::operator()...;
        };
        template <class... F>
        overloaded(F...) -> overloaded<F...>;

        Eigen::MatrixXcd weight_block(std::span<const PhaseVector> pvs)
        {
            Eigen::MatrixXcd w(static_cast<Eigen::Index>(pvs.front().size()), static_cast<Eigen::Index>(pvs.size()));
            for (std::size_t i = 0; i < pvs.size(); ++i)
                w.col(static_cast<Eigen::Index>(i)) = pvs[i].weight_vector();
            return w;
        }
    }

    WeightSource WeightSource::mgb()
    {
        return WeightSource(Mgb{});
    }

    WeightSource WeightSource::neural(std::shared_ptr<const nn::PhaseRegressor> regressor)
    {
        if (!regressor)
            throw std::invalid_argument("Null regressor.");
        return WeightSource(std::move(regressor));
    }

    WeightSource WeightSource::codebook(std::shared_ptr<const Codebook> codebook)
    {
        if (!codebook)
            throw std::invalid_argument("Null codebook.");
        return WeightSource(std::move(codebook));
    }

    std::string WeightSource::label() const
    {
        return std::visit(overloaded{[](const Mgb &) { return std::string("MGB"); },
                                     [](const std::shared_ptr<const nn::PhaseRegressor> &) { return std::string("NN"); },
                                     [](const std::shared_ptr<const Codebook> &cb) {
                                         return "CB-" + std::to_string(cb->size);
                                     }},
                          source_);
    }

    void WeightSource::check_ready() const
    {
        std::visit(overloaded{[](const Mgb &) {},
                              [](const std::shared_ptr<const nn::PhaseRegressor> &r) {
                                  if (!r->fitted())
                                      throw std::logic_error("Regressor is not fitted.");
                              },
                              [](const std::shared_ptr<const Codebook> &cb) {
                                  if (!cb->calibrated())
                                      throw std::logic_error("Codebook is not calibrated.");
                              }},
                   source_);
    }

    std::vector<PhaseVector> WeightSource::weights(std::span<const BeamPointingAngle> targets,
                                                   const ArrayGeometry &geom) const
    {
        check_ready();
        std::vector<PhaseVector> out;
        std::visit(overloaded{[&](const Mgb &) {
                                  out.reserve(targets.size());
                                  for (const auto &t : targets)
                                      out.push_back(mgb_weights(t, geom));
                              },
                              [&](const std::shared_ptr<const nn::PhaseRegressor> &r) {
                                  out = nn::predict_phases(r->model, r->scalers, targets);
                              },
                              [&](const std::shared_ptr<const Codebook> &cb) {
                                  out.reserve(targets.size());
                                  for (const auto &t : targets)
                                      out.push_back(cb->codewords[nearest_codeword(*cb, t)]);
                              }},
                   source_);
        for (const auto &pv : out)
            if (pv.size() != geom.size())
                throw std::invalid_argument(label() + " produces " + std::to_string(pv.size()) +
                                            " phases for a " + std::to_string(geom.size()) + "-element array.");
        return out;
    }

    void summarize(EvalReport &report)
    {
        if (report.samples.empty())
            throw std::invalid_argument("Report has no samples.");
        std::vector<double> ca, cs;
        ca.reserve(report.samples.size());
        cs.reserve(report.samples.size());
        for (const auto &s : report.samples)
        {
            ca.push_back(s.central_angle_deg);
            cs.push_back(s.cosine_similarity);
        }
        const auto qa = quantiles(ca, report_percentiles);
        const auto qc = quantiles(cs, report_percentiles);
        std::copy(qa.begin(), qa.end(), report.central_angle_q.begin());
        std::copy(qc.begin(), qc.end(), report.cosine_similarity_q.begin());
    }

    Evaluator::Evaluator(ArrayGeometry geom, EvalOptions options)
        : geom_(std::move(geom)), options_(std::move(options)),
          engine_(geom_, std::make_shared<const DirectionGrid>(DirectionGrid::full_sphere(options_.grid_step))),
          finder_(geom_, options_.peak_step)
    {
    }

    EvalReport Evaluator::evaluate(const WeightSource &source, std::span<const BeamPointingAngle> targets,
                                   std::optional<int> bits) const
    {
        if (targets.empty())
            throw std::invalid_argument("No evaluation targets.");

        std::vector<PhaseVector> weights = source.weights(targets, geom_);
        if (bits)
            for (auto &pv : weights)
                pv = quantize_phases(pv, *bits);

        // Codebooks and coarse lattices repeat weight vectors; search each distinct one once
        std::map<std::vector<double>, std::size_t> distinct;
        std::vector<PhaseVector> unique;
        std::vector<std::size_t> slot(weights.size());
        for (std::size_t i = 0; i < weights.size(); ++i)
        {
            auto [it, inserted] = distinct.try_emplace(weights[i].degrees(), unique.size());
            if (inserted)
                unique.push_back(weights[i]);
            slot[i] = it->second;
        }
        const std::vector<BeamPointingAngle> peaks = finder_.find(unique);

        EvalReport report;
        report.approach = source.label() + (bits ? "/b" + std::to_string(*bits) : "");
        report.bits = bits;
        report.grid = engine_.grid()->descriptor();
        report.geometry = io::geometry_descriptor(geom_);
        report.seed = options_.seed;
        report.config_hash = options_.config_hash;
        report.samples.reserve(targets.size());

        for (std::size_t start = 0; start < targets.size(); start += block)
        {
            const std::size_t n = std::min(block, targets.size() - start);
            std::vector<PhaseVector> reference;
            reference.reserve(n);
            for (std::size_t i = 0; i < n; ++i)
                reference.push_back(mgb_weights(targets[start + i], geom_));
            const Eigen::MatrixXd ref = engine_.magnitudes(weight_block(reference));
            const Eigen::MatrixXd got =
                engine_.magnitudes(weight_block(std::span<const PhaseVector>(weights).subspan(start, n)));

            for (std::size_t i = 0; i < n; ++i)
            {
                const auto c = static_cast<Eigen::Index>(i);
                const BeamPointingAngle &target = targets[start + i];
                const BeamPointingAngle &achieved = peaks[slot[start + i]];
                report.samples.push_back(
                    {target, achieved, central_angle(achieved, target),
                     cosine_similarity(std::span<const double>(ref.col(c).data(), static_cast<std::size_t>(ref.rows())),
                                       std::span<const double>(got.col(c).data(), static_cast<std::size_t>(got.rows())))});
            }
        }
        summarize(report);
        return report;
    }

    EvalReport evaluate_approach(const WeightSource &source, std::span<const BeamPointingAngle> targets,
                                 const ArrayGeometry &geom, const EvalOptions &options, std::optional<int> bits)
    {
        return Evaluator(geom, options).evaluate(source, targets, bits);
    }

    std::vector<EvalReport> quantization_sweep(const Evaluator &evaluator, std::span<const WeightSource> sources,
                                               std::span<const int> bits,
                                               std::span<const BeamPointingAngle> targets)
    {
        std::vector<EvalReport> out;
        for (const auto &src : sources)
            for (int b : bits)
                out.push_back(evaluator.evaluate(src, targets, b));
        return out;
    }
}

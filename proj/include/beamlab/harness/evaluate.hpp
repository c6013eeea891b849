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

#ifndef BEAMLAB_HARNESS_EVALUATE_HPP
#define BEAMLAB_HARNESS_EVALUATE_HPP

#include "beamlab/array.hpp"
#include "beamlab/codebook.hpp"
#include "beamlab/harness/dataset.hpp"
#include "beamlab/metrics.hpp"
#include "beamlab/neural/trainer.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace beamlab
{
    // Where the steering phases for a requested pointing angle come from
    class WeightSource
    {
    public:
        static WeightSource mgb();
        static WeightSource neural(std::shared_ptr<const nn::PhaseRegressor> regressor);
        static WeightSource codebook(std::shared_ptr<const Codebook> codebook);

        // "MGB", "NN" or "CB-<K>"
        std::string label() const;

        // Throws std::logic_error for an unfitted regressor or an uncalibrated codebook
        void check_ready() const;

        std::vector<PhaseVector> weights(std::span<const BeamPointingAngle> targets, const ArrayGeometry &geom) const;

    private:
        struct Mgb
        {
        };
        using Holder = std::variant<Mgb, std::shared_ptr<const nn::PhaseRegressor>, std::shared_ptr<const Codebook>>;
        explicit WeightSource(Holder h) : source_(std::move(h)) {}
        Holder source_;
    };

    inline constexpr std::array<double, 4> report_percentiles{25.0, 50.0, 75.0, 95.0};

    struct LatencyStats
    {
        std::size_t trials = 0;
        double median_ns = 0.0;
        double p95_ns = 0.0;
        std::string hardware;
    };

    struct EvalReport
    {
        std::string approach;    // label, with "/b<bits>" appended for quantized runs
        std::optional<int> bits; // phase shifter resolution applied before synthesis
        std::vector<MetricSample> samples;
        std::array<double, 4> central_angle_q{}; // at report_percentiles
        std::array<double, 4> cosine_similarity_q{};
        std::string grid;     // similarity grid descriptor
        std::string geometry; // array descriptor
        std::uint64_t seed = 0;
        std::string config_hash;
        std::optional<LatencyStats> latency;
    };

    // Recomputes both quantile rows from the samples
    void summarize(EvalReport &report);

    struct EvalOptions
    {
        double grid_step = 2.0; // full-sphere grid for cosine similarity
        double peak_step = 1.0; // coarse peak-search step, refined tenfold
        std::uint64_t seed = 0; // provenance only
        std::string config_hash;
    };

    // Per target: weights from the source, optional quantization, main-lobe search and
    // central angle to the target, cosine similarity against the unquantized MGB pattern
    // of the target on the similarity grid.
    class Evaluator
    {
    public:
        Evaluator(ArrayGeometry geom, EvalOptions options = {});

        const ArrayGeometry &geometry() const { return geom_; }
        const EvalOptions &options() const { return options_; }

        EvalReport evaluate(const WeightSource &source, std::span<const BeamPointingAngle> targets,
                            std::optional<int> bits = std::nullopt) const;

    private:
        ArrayGeometry geom_;
        EvalOptions options_;
        PatternEngine engine_;
        PeakFinder finder_;
    };

    EvalReport evaluate_approach(const WeightSource &source, std::span<const BeamPointingAngle> targets,
                                 const ArrayGeometry &geom, const EvalOptions &options = {},
                                 std::optional<int> bits = std::nullopt);

    // One report per (source, bits), sources outermost
    std::vector<EvalReport> quantization_sweep(const Evaluator &evaluator, std::span<const WeightSource> sources,
                                               std::span<const int> bits,
                                               std::span<const BeamPointingAngle> targets);

}

#endif

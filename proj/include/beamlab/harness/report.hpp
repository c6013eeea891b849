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

#ifndef BEAMLAB_HARNESS_REPORT_HPP
#define BEAMLAB_HARNESS_REPORT_HPP

#include "beamlab/harness/evaluate.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

// Report artifacts. All writers throw std::invalid_argument for a report without samples.
namespace beamlab::report
{
    // Columns: target_phi,target_theta,achieved_phi,achieved_theta,central_angle_deg,cosine_similarity
    void write_samples_csv(const std::filesystem::path &path, const EvalReport &report);
    std::vector<MetricSample> read_samples_csv(const std::filesystem::path &path);

    // Quantile table per report (p25, p50, p75, p95 for both metrics) plus run metadata.
    // Contains no timestamps; latency appears only if a report carries it.
    std::string summary_json(std::span<const EvalReport> reports);

    // Columns: approach,metric,value,fraction with one block per report and metric
    std::string cdf_csv(std::span<const EvalReport> reports);
    void write_cdf_csv(const std::filesystem::path &path, std::span<const EvalReport> reports);
}

#endif

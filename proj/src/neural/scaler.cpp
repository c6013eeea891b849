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

#include "beamlab/neural/scaler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace beamlab::nn
{
    std::string_view to_string(ScalerKind kind)
    {
        return kind == ScalerKind::standard ? "standard" : "minmax";
    }

    ScalerKind parse_scaler_kind(std::string_view name)
    {
        if (name == "standard")
            return ScalerKind::standard;
        if (name == "minmax")
            return ScalerKind::minmax;
        throw std::invalid_argument("Unknown scaler '" + std::string(name) + "'.");
    }

    FeatureScaler::FeatureScaler(ScalerKind kind, Eigen::VectorXd offset, Eigen::VectorXd scale)
        : kind_(kind), offset_(std::move(offset)), scale_(std::move(scale))
    {
        if (offset_.size() != scale_.size())
            throw std::invalid_argument("Scaler offset and scale differ in length.");
        for (Eigen::Index i = 0; i < scale_.size(); ++i)
            if (!std::isfinite(offset_[i]) || !std::isfinite(scale_[i]) || !(scale_[i] > 0.0))
                throw std::invalid_argument("Scaler parameters must be finite with positive scale.");
    }

    FeatureScaler FeatureScaler::fit(const Eigen::MatrixXd &data, ScalerKind kind, ConstantFeature constant)
    {
        if (data.cols() < 1 || data.rows() < 1)
            throw std::invalid_argument("Cannot fit a scaler to empty data.");

        const Eigen::Index nf = data.rows();
        Eigen::VectorXd offset(nf), scale(nf);
        for (Eigen::Index f = 0; f < nf; ++f)
        {
            const auto row = data.row(f).array();
            if (kind == ScalerKind::standard)
            {
                offset[f] = row.mean();
                scale[f] = std::sqrt((row - offset[f]).square().mean());
            }
            else
            {
                const double lo = row.minCoeff(), hi = row.maxCoeff();
                offset[f] = 0.5 * (lo + hi);
                scale[f] = 0.5 * (hi - lo);
            }
            // Relative threshold: a constant feature may carry rounding noise
            if (!(scale[f] > 1e-12 * std::max(1.0, std::abs(offset[f]))))
            {
                if (constant == ConstantFeature::reject)
                    throw std::invalid_argument("Feature " + std::to_string(f) + " has zero variance.");
                scale[f] = 1.0;
            }
        }
        return {kind, std::move(offset), std::move(scale)};
    }

    Eigen::MatrixXd FeatureScaler::transform(const Eigen::MatrixXd &data) const
    {
        if (data.rows() != features())
            throw std::invalid_argument("Scaler feature count mismatch.");
        return (data.colwise() - offset_).array().colwise() / scale_.array();
    }

    Eigen::MatrixXd FeatureScaler::inverse(const Eigen::MatrixXd &data) const
    {
        if (data.rows() != features())
            throw std::invalid_argument("Scaler feature count mismatch.");
        return (data.array().colwise() * scale_.array()).matrix().colwise() + offset_;
    }
}

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

#ifndef BEAMLAB_NEURAL_SCALER_HPP
#define BEAMLAB_NEURAL_SCALER_HPP

#include <Eigen/Core>

#include <string_view>

namespace beamlab::nn
{
    enum class ScalerKind
    {
        standard, // (x - mean) / std
        minmax    // maps [min, max] onto [-1, 1]
    };

    // What to do with a feature that is constant over the training data
    enum class ConstantFeature
    {
        reject,    // throw std::invalid_argument
        unit_scale // center only, scale 1
    };

    std::string_view to_string(ScalerKind kind);
    ScalerKind parse_scaler_kind(std::string_view name);

    // Per-feature affine map z = (x - offset) / scale. Data is features x samples.
    class FeatureScaler
    {
    public:
        FeatureScaler() = default;
        FeatureScaler(ScalerKind kind, Eigen::VectorXd offset, Eigen::VectorXd scale);

        static FeatureScaler fit(const Eigen::MatrixXd &data, ScalerKind kind = ScalerKind::standard,
                                 ConstantFeature constant = ConstantFeature::reject);

        Eigen::MatrixXd transform(const Eigen::MatrixXd &data) const;
        Eigen::MatrixXd inverse(const Eigen::MatrixXd &data) const;

        ScalerKind kind() const { return kind_; }
        Eigen::Index features() const { return offset_.size(); }
        const Eigen::VectorXd &offset() const { return offset_; } // the mean for standard scaling
        const Eigen::VectorXd &scale() const { return scale_; }   // the std for standard scaling

    private:
        ScalerKind kind_ = ScalerKind::standard;
        Eigen::VectorXd offset_;
        Eigen::VectorXd scale_;
    };

    // Input (azimuth, polar angle) and output (per-element phase) normalization
    struct ScalerParams
    {
        FeatureScaler input;
        FeatureScaler output;
    };
}

#endif

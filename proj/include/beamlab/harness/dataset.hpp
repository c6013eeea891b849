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

#ifndef BEAMLAB_HARNESS_DATASET_HPP
#define BEAMLAB_HARNESS_DATASET_HPP

#include "beamlab/angles.hpp"
#include "beamlab/array.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace beamlab
{
    // Coverage sector sampled uniformly in azimuth and polar angle
    struct SectorSpec
    {
        double az_lo = 0.0, az_hi = 120.0;
        double el_lo = 30.0, el_hi = 150.0;
        std::size_t count = 0;
        std::uint64_t seed = 0;

        void validate() const;
    };

    // Pointing angles with their steering phases; phases are stored row-major (one row per sample)
    class Dataset
    {
    public:
        Dataset() = default;
        explicit Dataset(std::size_t elements) : elements_(elements) {}

        void add(const BeamPointingAngle &bpa, std::span<const double> phases_deg);

        std::size_t size() const { return bpas_.size(); }
        bool empty() const { return bpas_.empty(); }
        std::size_t elements() const { return elements_; }
        const std::vector<BeamPointingAngle> &bpas() const { return bpas_; }
        std::span<const double> phases(std::size_t i) const;

        Eigen::MatrixXd feature_matrix() const; // 2 x size: azimuth, polar angle
        Eigen::MatrixXd phase_matrix() const;   // elements x size

        bool operator==(const Dataset &) const = default;

    private:
        std::size_t elements_ = 0;
        std::vector<BeamPointingAngle> bpas_;
        std::vector<double> phases_;
    };

    // `count` i.i.d. uniform pointing angles, azimuth drawn before polar angle per sample
    std::vector<BeamPointingAngle> sample_targets(const SectorSpec &spec);

    // `count` i.i.d. uniform pointing angles in the sector, each with its maximum-gain phases
    Dataset generate_dataset(const SectorSpec &spec, const ArrayGeometry &geom);

    struct DatasetSplit
    {
        Dataset train, validation, test;
    };

    // Seeded shuffle, then round(m * r0) training rows, round(m * r1) validation rows, the rest test.
    // Ratios must be non-negative and sum to 1.
    DatasetSplit split_dataset(const Dataset &ds, std::array<double, 3> ratios, std::uint64_t seed);

    // CSV with header az_deg,el_deg,p0,...,p{N-1}; numbers written in shortest round-trip form
    void write_dataset_csv(const std::filesystem::path &path, const Dataset &ds);
    Dataset read_dataset_csv(const std::filesystem::path &path);
}

#endif

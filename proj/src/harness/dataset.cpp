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

#include "beamlab/harness/dataset.hpp"
#include "beamlab/harness/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace beamlab
{
    void SectorSpec::validate() const
    {
        if (!(az_lo >= 0.0 && az_hi >= az_lo && az_hi < 360.0))
            throw std::invalid_argument("Sector azimuth range must satisfy 0 <= lo <= hi < 360.");
        if (!(el_lo >= 0.0 && el_hi >= el_lo && el_hi <= 180.0))
            throw std::invalid_argument("Sector polar range must satisfy 0 <= lo <= hi <= 180.");
    }

    void Dataset::add(const BeamPointingAngle &bpa, std::span<const double> phases_deg)
    {
        if (phases_deg.size() != elements_)
            throw std::invalid_argument("Dataset row has " + std::to_string(phases_deg.size()) + " phases, expected " +
                                        std::to_string(elements_) + ".");
        bpas_.push_back(bpa);
        phases_.insert(phases_.end(), phases_deg.begin(), phases_deg.end());
    }

    std::span<const double> Dataset::phases(std::size_t i) const
    {
        return std::span<const double>(phases_).subspan(i * elements_, elements_);
    }

    Eigen::MatrixXd Dataset::feature_matrix() const
    {
        Eigen::MatrixXd x(2, static_cast<Eigen::Index>(size()));
        for (std::size_t i = 0; i < size(); ++i)
        {
            x(0, static_cast<Eigen::Index>(i)) = bpas_[i].az_deg();
            x(1, static_cast<Eigen::Index>(i)) = bpas_[i].el_deg();
        }
        return x;
    }

    Eigen::MatrixXd Dataset::phase_matrix() const
    {
        // Row-major samples map directly onto column-major elements x samples
        return Eigen::Map<const Eigen::MatrixXd>(phases_.data(), static_cast<Eigen::Index>(elements_),
                                                 static_cast<Eigen::Index>(size()));
    }

    std::vector<BeamPointingAngle> sample_targets(const SectorSpec &spec)
    {
        spec.validate();
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> az(spec.az_lo, spec.az_hi);
        std::uniform_real_distribution<double> el(spec.el_lo, spec.el_hi);

        std::vector<BeamPointingAngle> out;
        out.reserve(spec.count);
        for (std::size_t i = 0; i < spec.count; ++i)
        {
            const double a = az(rng);
            const double e = el(rng);
            out.emplace_back(a, e);
        }
        return out;
    }

    Dataset generate_dataset(const SectorSpec &spec, const ArrayGeometry &geom)
    {
        Dataset ds(geom.size());
        for (const auto &bpa : sample_targets(spec))
            ds.add(bpa, mgb_weights(bpa, geom).degrees());
        return ds;
    }

    DatasetSplit split_dataset(const Dataset &ds, std::array<double, 3> ratios, std::uint64_t seed)
    {
        for (double r : ratios)
            if (!(r >= 0.0))
                throw std::invalid_argument("Split ratios must be non-negative.");
        if (std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) > 1e-9)
            throw std::invalid_argument("Split ratios must sum to 1.");

        std::vector<std::size_t> order(ds.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);

        const double m = static_cast<double>(ds.size());
        const auto n_train = static_cast<std::size_t>(std::llround(m * ratios[0]));
        const auto n_val = std::min(static_cast<std::size_t>(std::llround(m * ratios[1])), ds.size() - n_train);

        DatasetSplit out{Dataset(ds.elements()), Dataset(ds.elements()), Dataset(ds.elements())};
        for (std::size_t i = 0; i < order.size(); ++i)
        {
            Dataset &dst = i < n_train ? out.train : (i < n_train + n_val ? out.validation : out.test);
            dst.add(ds.bpas()[order[i]], ds.phases(order[i]));
        }
        return out;
    }

    void write_dataset_csv(const std::filesystem::path &path, const Dataset &ds)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw std::runtime_error("Cannot open '" + path.string() + "' for writing.");
        os << "az_deg,el_deg";
        for (std::size_t n = 0; n < ds.elements(); ++n)
            os << ",p" << n;
        os << '\n';

        std::string line;
        for (std::size_t i = 0; i < ds.size(); ++i)
        {
            line.clear();
            csv::append_number(line, ds.bpas()[i].az_deg());
            line += ',';
            csv::append_number(line, ds.bpas()[i].el_deg());
            for (double p : ds.phases(i))
            {
                line += ',';
                csv::append_number(line, p);
            }
            line += '\n';
            os << line;
        }
        if (!os)
            throw std::runtime_error("Failed writing '" + path.string() + "'.");
    }

    Dataset read_dataset_csv(const std::filesystem::path &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw std::runtime_error("Cannot open '" + path.string() + "'.");

        std::string line;
        if (!std::getline(is, line))
            throw std::runtime_error("Dataset '" + path.string() + "' is empty.");
        const auto header = csv::split(line);
        if (header.size() < 3 || header[0] != "az_deg" || header[1] != "el_deg")
            throw std::runtime_error("Dataset header must start with az_deg,el_deg,p0.");
        for (std::size_t n = 2; n < header.size(); ++n)
            if (header[n] != "p" + std::to_string(n - 2))
                throw std::runtime_error("Unexpected dataset column '" + std::string(header[n]) + "'.");

        Dataset ds(header.size() - 2);
        std::vector<double> row;
        std::size_t line_no = 1;
        while (std::getline(is, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            row = csv::parse_numbers(line);
            if (row.size() != header.size())
                throw std::runtime_error("Dataset line " + std::to_string(line_no) + " has " +
                                         std::to_string(row.size()) + " fields, expected " +
                                         std::to_string(header.size()) + ".");
            ds.add(BeamPointingAngle(row[0], row[1]), std::span<const double>(row).subspan(2));
        }
        return ds;
    }
}

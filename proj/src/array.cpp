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

#include "beamlab/array.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace beamlab
{
    namespace
    {
        constexpr double two_pi = 2.0 * pi;

        // Direction cosines of every grid sample relative to the array
        Eigen::MatrixXcd steering_matrix(const std::vector<Eigen::Vector3d> &positions, ElementModel element,
                                         const std::vector<BeamPointingAngle> &dirs)
        {
            const auto n_dir = static_cast<Eigen::Index>(dirs.size());
            const auto n_el = static_cast<Eigen::Index>(positions.size());
            Eigen::MatrixXcd s(n_dir, n_el);
            for (Eigen::Index d = 0; d < n_dir; ++d)
            {
                const Eigen::Vector3d u = dirs[d].unit_vector();
                const double ef = element_factor(dirs[d], element);
                for (Eigen::Index n = 0; n < n_el; ++n)
                    s(d, n) = std::polar(ef, two_pi * positions[n].dot(u));
            }
            return s;
        }

        double field_power(const std::vector<Eigen::Vector3d> &positions, ElementModel element,
                           const Eigen::VectorXcd &w, const BeamPointingAngle &dir)
        {
            const Eigen::Vector3d u = dir.unit_vector();
            std::complex<double> acc = 0.0;
            for (std::size_t n = 0; n < positions.size(); ++n)
                acc += w[static_cast<Eigen::Index>(n)] * std::polar(1.0, two_pi * positions[n].dot(u));
            const double ef = element_factor(dir, element);
            return ef * ef * std::norm(acc);
        }
    }

    std::string_view to_string(ElementModel model)
    {
        switch (model)
        {
        case ElementModel::isotropic:
            return "isotropic";
        case ElementModel::small_dipole_z:
            return "small-dipole-z";
        }
        return "unknown";
    }

    ElementModel parse_element_model(std::string_view name)
    {
        if (name == "isotropic")
            return ElementModel::isotropic;
        if (name == "small-dipole-z" || name == "small_dipole_z" || name == "dipole")
            return ElementModel::small_dipole_z;
        throw std::invalid_argument("Unknown element model '" + std::string(name) + "'.");
    }

    // ---------- ArrayGeometry ----------

    ArrayGeometry::ArrayGeometry(std::vector<Eigen::Vector3d> positions_wl, ElementModel element,
                                 const Eigen::Vector3d &boresight)
        : positions_(std::move(positions_wl)), element_(element), boresight_(boresight)
    {
        if (positions_.empty())
            throw std::invalid_argument("Array must contain at least one element.");
        for (const auto &p : positions_)
            if (!p.allFinite())
                throw std::invalid_argument("Element positions must be finite.");
        if (positions_[0].norm() > 1e-12)
            throw std::invalid_argument("Element 0 must sit at the origin.");
        for (std::size_t a = 0; a < positions_.size(); ++a)
            for (std::size_t b = a + 1; b < positions_.size(); ++b)
                if ((positions_[a] - positions_[b]).norm() < 1e-9)
                    throw std::invalid_argument("Elements " + std::to_string(a) + " and " + std::to_string(b) +
                                                " coincide.");
        const double bn = boresight_.norm();
        if (!boresight_.allFinite() || !(bn > 0.0))
            throw std::invalid_argument("Boresight must be a finite non-zero vector.");
        boresight_ /= bn;
    }

    ArrayGeometry ArrayGeometry::planar(const PlanarLayout &layout)
    {
        if (layout.rows < 1 || layout.cols < 1)
            throw std::invalid_argument("Planar array needs at least one row and one column.");
        if (!std::isfinite(layout.spacing_wl) || layout.spacing_wl <= 0.0)
            throw std::invalid_argument("Element spacing must be positive.");

        const BeamPointingAngle bs(layout.boresight_az_deg, layout.boresight_el_deg);
        const Eigen::Vector3d normal = bs.unit_vector();

        Eigen::Vector3d col_axis, row_axis;
        if (std::abs(normal.z()) > 1.0 - 1e-12)
        {
            col_axis = Eigen::Vector3d::UnitX();
            row_axis = normal.z() > 0.0 ? Eigen::Vector3d::UnitY() : Eigen::Vector3d(-Eigen::Vector3d::UnitY());
        }
        else
        {
            row_axis = (Eigen::Vector3d::UnitZ() - normal.z() * normal).normalized();
            col_axis = row_axis.cross(normal);
        }

        std::vector<Eigen::Vector3d> pos;
        pos.reserve(static_cast<std::size_t>(layout.rows * layout.cols));
        for (int r = 0; r < layout.rows; ++r)
            for (int c = 0; c < layout.cols; ++c)
            {
                Eigen::Vector3d p = layout.spacing_wl * (c * col_axis + r * row_axis);
                // Exact zeros keep x-y layouts free of 1e-17 residue
                for (int i = 0; i < 3; ++i)
                    if (std::abs(p[i]) < 1e-15)
                        p[i] = 0.0;
                pos.push_back(p);
            }

        ArrayGeometry g(std::move(pos), layout.element, normal);
        g.layout_ = layout;
        return g;
    }

    ArrayGeometry ArrayGeometry::rereferenced(std::size_t reference) const
    {
        if (reference >= positions_.size())
            throw std::out_of_range("Reference element index out of range.");
        const Eigen::Vector3d origin = positions_[reference];
        std::vector<Eigen::Vector3d> pos;
        pos.reserve(positions_.size());
        pos.push_back(Eigen::Vector3d::Zero());
        for (std::size_t n = 0; n < positions_.size(); ++n)
            if (n != reference)
                pos.push_back(positions_[n] - origin);
        return ArrayGeometry(std::move(pos), element_, boresight_);
    }

    // ---------- PhaseVector ----------

    PhaseVector::PhaseVector(std::vector<double> phases_deg)
        : phases_(std::move(phases_deg))
    {
        for (auto &p : phases_)
            p = wrap_phase_deg(p);
    }

    std::vector<std::complex<double>> PhaseVector::weights() const
    {
        std::vector<std::complex<double>> w(phases_.size());
        for (std::size_t n = 0; n < phases_.size(); ++n)
            w[n] = std::polar(1.0, deg_to_rad(phases_[n]));
        return w;
    }

    Eigen::VectorXcd PhaseVector::weight_vector() const
    {
        Eigen::VectorXcd w(static_cast<Eigen::Index>(phases_.size()));
        for (std::size_t n = 0; n < phases_.size(); ++n)
            w[static_cast<Eigen::Index>(n)] = std::polar(1.0, deg_to_rad(phases_[n]));
        return w;
    }

    // ---------- DirectionGrid ----------

    DirectionGrid::DirectionGrid(double step, double az_lo, double el_lo, std::size_t n_az, std::size_t n_el, bool full)
        : step_(step), az_lo_(az_lo), el_lo_(el_lo), n_az_(n_az), n_el_(n_el), full_(full)
    {
        const double d = deg_to_rad(step);
        directions_.reserve(n_az * n_el);
        weights_.reserve(n_az * n_el);
        for (std::size_t i = 0; i < n_el; ++i)
        {
            const double el = std::min(el_lo + static_cast<double>(i) * step, 180.0);
            const double w = std::sin(deg_to_rad(el)) * d * d;
            for (std::size_t j = 0; j < n_az; ++j)
            {
                directions_.emplace_back(wrap_azimuth_deg(az_lo + static_cast<double>(j) * step), el);
                weights_.push_back(std::abs(w));
            }
        }
    }

    DirectionGrid DirectionGrid::full_sphere(double step_deg)
    {
        if (!std::isfinite(step_deg) || step_deg <= 0.0 || step_deg > 90.0)
            throw std::invalid_argument("Grid step must lie in (0, 90] degrees.");
        const double n = std::round(180.0 / step_deg);
        if (std::abs(n * step_deg - 180.0) > 1e-9)
            throw std::invalid_argument("Grid step must divide 180 degrees.");
        const auto n_el = static_cast<std::size_t>(n) + 1;
        const auto n_az = static_cast<std::size_t>(2.0 * n);
        return {step_deg, 0.0, 0.0, n_az, n_el, true};
    }

    DirectionGrid DirectionGrid::region(double step_deg, double az_lo, double az_hi, double el_lo, double el_hi)
    {
        if (!std::isfinite(step_deg) || step_deg <= 0.0)
            throw std::invalid_argument("Grid step must be positive.");
        if (!(az_lo >= 0.0 && az_hi >= az_lo && az_hi < 360.0))
            throw std::invalid_argument("Azimuth bounds must satisfy 0 <= lo <= hi < 360.");
        if (!(el_lo >= 0.0 && el_hi >= el_lo && el_hi <= 180.0))
            throw std::invalid_argument("Polar bounds must satisfy 0 <= lo <= hi <= 180.");
        const auto n_az = static_cast<std::size_t>(std::floor((az_hi - az_lo) / step_deg + 1e-9)) + 1;
        const auto n_el = static_cast<std::size_t>(std::floor((el_hi - el_lo) / step_deg + 1e-9)) + 1;
        return {step_deg, az_lo, el_lo, n_az, n_el, false};
    }

    double DirectionGrid::total_solid_angle() const
    {
        double s = 0.0;
        for (double w : weights_)
            s += w;
        return s;
    }

    bool DirectionGrid::same_layout(const DirectionGrid &other) const
    {
        return step_ == other.step_ && az_lo_ == other.az_lo_ && el_lo_ == other.el_lo_ && n_az_ == other.n_az_ &&
               n_el_ == other.n_el_ && full_ == other.full_;
    }

    std::string DirectionGrid::descriptor() const
    {
        std::ostringstream os;
        os.precision(17);
        if (full_)
            os << "sphere(step=" << step_ << ")";
        else
            os << "region(step=" << step_ << ",az0=" << az_lo_ << ",naz=" << n_az_ << ",el0=" << el_lo_
               << ",nel=" << n_el_ << ")";
        return os.str();
    }

    // ---------- Patterns ----------

    RadiationPattern::RadiationPattern(GridPtr grid_, std::vector<double> magnitude_)
        : grid(std::move(grid_)), magnitude(std::move(magnitude_))
    {
        if (!grid)
            throw std::invalid_argument("Radiation pattern needs a grid.");
        if (magnitude.size() != grid->size())
            throw std::invalid_argument("Pattern length does not match the grid.");
        for (double m : magnitude)
            if (!std::isfinite(m) || m < 0.0)
                throw std::invalid_argument("Pattern magnitudes must be finite and non-negative.");
    }

    double Directivity::peak() const
    {
        return linear.empty() ? 0.0 : *std::max_element(linear.begin(), linear.end());
    }

    std::vector<double> Directivity::dbi() const
    {
        std::vector<double> out(linear.size());
        for (std::size_t i = 0; i < linear.size(); ++i)
            out[i] = 10.0 * std::log10(linear[i]);
        return out;
    }

    PhaseVector mgb_weights(const BeamPointingAngle &bpa, const ArrayGeometry &geom)
    {
        const Eigen::Vector3d u = bpa.unit_vector();
        std::vector<double> ph(geom.size());
        for (std::size_t n = 0; n < geom.size(); ++n)
            ph[n] = -360.0 * geom.positions()[n].dot(u);
        return PhaseVector(std::move(ph));
    }

    PhaseVector quantize_phases(const PhaseVector &pv, int bits)
    {
        if (bits < 1 || bits > 16)
            throw std::invalid_argument("Phase shifter resolution must be between 1 and 16 bits.");
        const double res = 360.0 / static_cast<double>(1 << bits);
        std::vector<double> q(pv.size());
        for (std::size_t n = 0; n < pv.size(); ++n)
            q[n] = std::floor(pv[n] / res + 0.5) * res;
        return PhaseVector(std::move(q));
    }

    double element_factor(const BeamPointingAngle &dir, ElementModel model)
    {
        switch (model)
        {
        case ElementModel::isotropic:
            return 1.0;
        case ElementModel::small_dipole_z:
            return std::abs(std::sin(deg_to_rad(dir.el_deg())));
        }
        return 1.0;
    }

    std::complex<double> array_field(const PhaseVector &pv, const ArrayGeometry &geom, const BeamPointingAngle &dir)
    {
        if (pv.size() != geom.size())
            throw std::invalid_argument("Phase vector length does not match the array size.");
        const Eigen::Vector3d u = dir.unit_vector();
        std::complex<double> acc = 0.0;
        for (std::size_t n = 0; n < geom.size(); ++n)
            acc += std::polar(1.0, deg_to_rad(pv[n]) + two_pi * geom.positions()[n].dot(u));
        return element_factor(dir, geom.element_model()) * acc;
    }

    RadiationPattern radiation_pattern(const PhaseVector &pv, const ArrayGeometry &geom, const GridPtr &grid)
    {
        return PatternEngine(geom, grid).pattern(pv);
    }

    Directivity directivity(const RadiationPattern &pattern)
    {
        const auto &w = pattern.grid->solid_angle_weights();
        double total = 0.0;
        for (std::size_t i = 0; i < pattern.magnitude.size(); ++i)
            total += pattern.magnitude[i] * pattern.magnitude[i] * w[i];
        if (!(total > 0.0))
            throw std::invalid_argument("Directivity is undefined for an all-zero pattern.");
        Directivity d{pattern.grid, std::vector<double>(pattern.magnitude.size())};
        for (std::size_t i = 0; i < pattern.magnitude.size(); ++i)
            d.linear[i] = 4.0 * pi * pattern.magnitude[i] * pattern.magnitude[i] / total;
        return d;
    }

    BeamPointingAngle find_peak(const PhaseVector &pv, const ArrayGeometry &geom, double coarse_step)
    {
        return PeakFinder(geom, coarse_step).find(pv);
    }

    // ---------- PatternEngine ----------

    PatternEngine::PatternEngine(const ArrayGeometry &geom, GridPtr grid)
        : grid_(std::move(grid))
    {
        if (!grid_)
            throw std::invalid_argument("Pattern engine needs a grid.");
        steering_ = steering_matrix(geom.positions(), geom.element_model(), grid_->directions());
    }

    RadiationPattern PatternEngine::pattern(const PhaseVector &pv) const
    {
        if (pv.size() != element_count())
            throw std::invalid_argument("Phase vector length does not match the array size.");
        const Eigen::VectorXd mag = (steering_ * pv.weight_vector()).cwiseAbs();
        return {grid_, std::vector<double>(mag.data(), mag.data() + mag.size())};
    }

    Eigen::MatrixXd PatternEngine::magnitudes(const Eigen::MatrixXcd &weights) const
    {
        if (static_cast<std::size_t>(weights.rows()) != element_count())
            throw std::invalid_argument("Weight matrix rows must equal the array size.");
        return (steering_ * weights).cwiseAbs();
    }

    // ---------- PeakFinder ----------

    PeakFinder::PeakFinder(const ArrayGeometry &geom, double coarse_step, int refine_factor)
        : positions_(geom.positions()), element_(geom.element_model()), boresight_(geom.boresight()),
          coarse_step_(coarse_step), refine_factor_(refine_factor)
    {
        if (!std::isfinite(coarse_step) || coarse_step <= 0.0)
            throw std::invalid_argument("Coarse peak-search step must be positive.");
        if (refine_factor < 1)
            throw std::invalid_argument("Refinement factor must be at least 1.");

        const auto grid = DirectionGrid::full_sphere(coarse_step);
        for (const auto &dir : grid.directions())
            if (in_front(dir.unit_vector()))
                coarse_dirs_.push_back(dir);
        steering_ = steering_matrix(positions_, element_, coarse_dirs_);
    }

    bool PeakFinder::in_front(const Eigen::Vector3d &u) const
    {
        return u.dot(boresight_) >= -1e-12;
    }

    BeamPointingAngle PeakFinder::refine(const Eigen::VectorXcd &w, const BeamPointingAngle &coarse) const
    {
        const double fine = fine_step();
        BeamPointingAngle best = coarse;
        double best_val = field_power(positions_, element_, w, coarse);
        for (int i = -refine_factor_; i <= refine_factor_; ++i)
        {
            const double el = coarse.el_deg() + i * fine;
            if (el < 0.0 || el > 180.0)
                continue;
            for (int j = -refine_factor_; j <= refine_factor_; ++j)
            {
                if (i == 0 && j == 0)
                    continue;
                const BeamPointingAngle dir(wrap_azimuth_deg(coarse.az_deg() + j * fine), el);
                if (!in_front(dir.unit_vector()))
                    continue;
                const double v = field_power(positions_, element_, w, dir);
                if (v > best_val)
                {
                    best_val = v;
                    best = dir;
                }
            }
        }
        return best;
    }

    BeamPointingAngle PeakFinder::find(const PhaseVector &pv) const
    {
        return find(std::vector<PhaseVector>{pv}).front();
    }

    std::vector<BeamPointingAngle> PeakFinder::find(const std::vector<PhaseVector> &pvs) const
    {
        constexpr std::size_t block = 64;
        const auto n_el = static_cast<Eigen::Index>(positions_.size());
        std::vector<BeamPointingAngle> out;
        out.reserve(pvs.size());

        for (std::size_t start = 0; start < pvs.size(); start += block)
        {
            const std::size_t count = std::min(block, pvs.size() - start);
            Eigen::MatrixXcd w(n_el, static_cast<Eigen::Index>(count));
            for (std::size_t b = 0; b < count; ++b)
            {
                if (static_cast<Eigen::Index>(pvs[start + b].size()) != n_el)
                    throw std::invalid_argument("Phase vector length does not match the array size.");
                w.col(static_cast<Eigen::Index>(b)) = pvs[start + b].weight_vector();
            }
            const Eigen::MatrixXd power = (steering_ * w).cwiseAbs2();
            for (Eigen::Index b = 0; b < power.cols(); ++b)
            {
                Eigen::Index best = 0;
                double best_val = power(0, b);
                for (Eigen::Index d = 1; d < power.rows(); ++d)
                    if (power(d, b) > best_val)
                    {
                        best_val = power(d, b);
                        best = d;
                    }
                out.push_back(refine(w.col(b), coarse_dirs_[static_cast<std::size_t>(best)]));
            }
        }
        return out;
    }
}

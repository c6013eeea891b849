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

#ifndef BEAMLAB_ARRAY_HPP
#define BEAMLAB_ARRAY_HPP

#include "beamlab/angles.hpp"

#include <Eigen/Core>

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace beamlab
{
    enum class ElementModel
    {
        isotropic,
        small_dipole_z // |sin(el)|, dipole along +z
    };

    std::string_view to_string(ElementModel model);
    ElementModel parse_element_model(std::string_view name);

    // Uniform rectangular grid. Element n = row * cols + col sits at
    // col * spacing * col_axis + row * spacing * row_axis (wavelength units).
    //
    // The array plane is perpendicular to the boresight. For a boresight along +z the
    // column axis is +x and the row axis +y. Otherwise the row axis is +z projected
    // onto the array plane and col_axis = row_axis x boresight, so that
    // col_axis x row_axis = boresight.
    struct PlanarLayout
    {
        int rows = 8;
        int cols = 8;
        double spacing_wl = 0.5;
        ElementModel element = ElementModel::isotropic;
        double boresight_az_deg = 60.0;
        double boresight_el_deg = 90.0;

        bool operator==(const PlanarLayout &) const = default;
    };

    class ArrayGeometry
    {
    public:
        // Positions in wavelengths, element 0 at the origin, no coincident elements.
        // The boresight selects the radiating half-space used by the peak search.
        explicit ArrayGeometry(std::vector<Eigen::Vector3d> positions_wl,
                               ElementModel element = ElementModel::isotropic,
                               const Eigen::Vector3d &boresight = Eigen::Vector3d::UnitZ());

        static ArrayGeometry planar(const PlanarLayout &layout);

        std::size_t size() const { return positions_.size(); }
        const std::vector<Eigen::Vector3d> &positions() const { return positions_; }
        ElementModel element_model() const { return element_; }
        const Eigen::Vector3d &boresight() const { return boresight_; }

        // Set for geometries built by planar()
        const std::optional<PlanarLayout> &layout() const { return layout_; }

        // Same elements, re-indexed so that `reference` becomes element 0 (all positions shifted)
        ArrayGeometry rereferenced(std::size_t reference) const;

    private:
        std::vector<Eigen::Vector3d> positions_;
        ElementModel element_;
        Eigen::Vector3d boresight_;
        std::optional<PlanarLayout> layout_;
    };

    // Per-element phases in degrees, each wrapped into (-180, 180]
    class PhaseVector
    {
    public:
        PhaseVector() = default;
        explicit PhaseVector(std::vector<double> phases_deg);

        std::size_t size() const { return phases_.size(); }
        double operator[](std::size_t n) const { return phases_[n]; }
        const std::vector<double> &degrees() const { return phases_; }

        // Unit-modulus weights exp(j * phase)
        std::vector<std::complex<double>> weights() const;
        Eigen::VectorXcd weight_vector() const;

        bool operator==(const PhaseVector &) const = default;

    private:
        std::vector<double> phases_;
    };

    // Direction samples ordered row-major in the polar angle, then azimuth.
    // Each sample carries the solid angle sin(el) * d_el * d_az (radians) for quadrature.
    class DirectionGrid
    {
    public:
        // el in [0, 180] inclusive, az in [0, 360) exclusive. 180 / step must be an integer.
        static DirectionGrid full_sphere(double step_deg);

        // el in [el_lo, el_hi], az in [az_lo, az_hi], both inclusive
        static DirectionGrid region(double step_deg, double az_lo, double az_hi, double el_lo, double el_hi);

        double step_deg() const { return step_; }
        std::size_t size() const { return directions_.size(); }
        std::size_t el_count() const { return n_el_; }
        std::size_t az_count() const { return n_az_; }
        const std::vector<BeamPointingAngle> &directions() const { return directions_; }
        const std::vector<double> &solid_angle_weights() const { return weights_; }
        double total_solid_angle() const;

        // Same sampling (step and bounds)
        bool same_layout(const DirectionGrid &other) const;
        std::string descriptor() const;

    private:
        DirectionGrid(double step, double az_lo, double el_lo, std::size_t n_az, std::size_t n_el, bool full);

        double step_ = 0.0, az_lo_ = 0.0, el_lo_ = 0.0;
        std::size_t n_az_ = 0, n_el_ = 0;
        bool full_ = false;
        std::vector<BeamPointingAngle> directions_;
        std::vector<double> weights_;
    };

    using GridPtr = std::shared_ptr<const DirectionGrid>;

    // Far-field magnitudes |F| sampled on a grid
    struct RadiationPattern
    {
        RadiationPattern(GridPtr grid, std::vector<double> magnitude);

        GridPtr grid;
        std::vector<double> magnitude;
    };

    struct Directivity
    {
        GridPtr grid;
        std::vector<double> linear;

        double peak() const;
        std::vector<double> dbi() const;
    };

    // Maximum-gain phase-only steering: phase_n = wrap(-360 * P_n . u(az, el))
    PhaseVector mgb_weights(const BeamPointingAngle &bpa, const ArrayGeometry &geom);

    // Rounds every phase to the nearest state of a 2^bits lattice (floor(x / res + 1/2) * res)
    PhaseVector quantize_phases(const PhaseVector &pv, int bits);

    double element_factor(const BeamPointingAngle &dir, ElementModel model);

    // F(u) = element_factor(u) * sum_n I_n exp(+j 2 pi P_n . u), evaluated term by term
    std::complex<double> array_field(const PhaseVector &pv, const ArrayGeometry &geom, const BeamPointingAngle &dir);

    RadiationPattern radiation_pattern(const PhaseVector &pv, const ArrayGeometry &geom, const GridPtr &grid);

    // 4 pi |F_i|^2 / sum_k |F_k|^2 w_k. Throws for an all-zero pattern.
    Directivity directivity(const RadiationPattern &pattern);

    // Argmax of |F| on a coarse full-sphere grid limited to the radiating half-space, refined
    // by a local search at coarse_step / 10 within one coarse step of the winner.
    // Ties resolve to the lowest grid index.
    BeamPointingAngle find_peak(const PhaseVector &pv, const ArrayGeometry &geom, double coarse_step = 1.0);

    // Precomputed steering matrix for repeated pattern synthesis on one grid
    class PatternEngine
    {
    public:
        PatternEngine(const ArrayGeometry &geom, GridPtr grid);

        const GridPtr &grid() const { return grid_; }
        std::size_t element_count() const { return static_cast<std::size_t>(steering_.cols()); }

        RadiationPattern pattern(const PhaseVector &pv) const;

        // One column of magnitudes per column of complex weights (N x B in, D x B out)
        Eigen::MatrixXd magnitudes(const Eigen::MatrixXcd &weights) const;

    private:
        GridPtr grid_;
        Eigen::MatrixXcd steering_; // D x N
    };

    // find_peak with the coarse steering matrix cached for repeated searches
    class PeakFinder
    {
    public:
        explicit PeakFinder(const ArrayGeometry &geom, double coarse_step = 1.0, int refine_factor = 10);

        BeamPointingAngle find(const PhaseVector &pv) const;
        std::vector<BeamPointingAngle> find(const std::vector<PhaseVector> &pvs) const;

        double coarse_step() const { return coarse_step_; }
        double fine_step() const { return coarse_step_ / refine_factor_; }

    private:
        BeamPointingAngle refine(const Eigen::VectorXcd &w, const BeamPointingAngle &coarse) const;
        bool in_front(const Eigen::Vector3d &u) const;

        std::vector<Eigen::Vector3d> positions_;
        ElementModel element_;
        Eigen::Vector3d boresight_;
        double coarse_step_;
        int refine_factor_;
        std::vector<BeamPointingAngle> coarse_dirs_; // front half-space, grid order
        Eigen::MatrixXcd steering_;
    };
}

#endif

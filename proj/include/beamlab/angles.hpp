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

#ifndef BEAMLAB_ANGLES_HPP
#define BEAMLAB_ANGLES_HPP

#include <Eigen/Core>

#include <numbers>

namespace beamlab
{
    inline constexpr double pi = std::numbers::pi;

    constexpr double deg_to_rad(double deg) { return deg * (pi / 180.0); }
    constexpr double rad_to_deg(double rad) { return rad * (180.0 / pi); }

    // Wraps an angle in degrees into (-180, 180]
    double wrap_phase_deg(double deg);

    // Wraps an azimuth in degrees into [0, 360)
    double wrap_azimuth_deg(double deg);

    // Unit vector (sin(el) cos(az), sin(el) sin(az), cos(el)); el is the polar angle from +z
    Eigen::Vector3d direction_vector(double az_deg, double el_deg);

    // Beam pointing angle: azimuth in [0, 360) and polar angle in [0, 180], both in degrees.
    // The polar angle is measured from +z.
    class BeamPointingAngle
    {
    public:
        // Throws std::invalid_argument for non-finite or out-of-range values
        BeamPointingAngle(double az_deg, double el_deg);

        // Wraps the azimuth into [0, 360) and reflects polar angles beyond the poles
        static BeamPointingAngle normalized(double az_deg, double el_deg);

        // Direction of a (not necessarily unit) vector; the zero vector maps to (0, 0)
        static BeamPointingAngle from_vector(const Eigen::Vector3d &v);

        double az_deg() const { return az_; }
        double el_deg() const { return el_; }
        Eigen::Vector3d unit_vector() const { return direction_vector(az_, el_); }

        bool operator==(const BeamPointingAngle &) const = default;

    private:
        double az_ = 0.0;
        double el_ = 0.0;
    };
}

#endif

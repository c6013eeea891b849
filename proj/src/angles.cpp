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

#include "beamlab/angles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace beamlab
{
    double wrap_phase_deg(double deg)
    {
        if (!std::isfinite(deg))
            throw std::invalid_argument("Phase must be finite.");
        double w = std::fmod(deg, 360.0);
        if (w <= -180.0)
            w += 360.0;
        else if (w > 180.0)
            w -= 360.0;
        return w + 0.0; // no negative zero
    }

    double wrap_azimuth_deg(double deg)
    {
        if (!std::isfinite(deg))
            throw std::invalid_argument("Azimuth must be finite.");
        double w = std::fmod(deg, 360.0);
        if (w < 0.0)
            w += 360.0;
        if (w >= 360.0) // -tiny + 360 rounds up
            w = 0.0;
        return w;
    }

    Eigen::Vector3d direction_vector(double az_deg, double el_deg)
    {
        const double az = deg_to_rad(az_deg), el = deg_to_rad(el_deg);
        const double s = std::sin(el);
        return {s * std::cos(az), s * std::sin(az), std::cos(el)};
    }

    BeamPointingAngle::BeamPointingAngle(double az_deg, double el_deg)
        : az_(az_deg), el_(el_deg)
    {
        if (!std::isfinite(az_deg) || !std::isfinite(el_deg))
            throw std::invalid_argument("Beam pointing angle must be finite.");
        if (az_deg < 0.0 || az_deg >= 360.0)
            throw std::invalid_argument("Azimuth must lie in [0, 360), got " + std::to_string(az_deg) + ".");
        if (el_deg < 0.0 || el_deg > 180.0)
            throw std::invalid_argument("Polar angle must lie in [0, 180], got " + std::to_string(el_deg) + ".");
    }

    BeamPointingAngle BeamPointingAngle::normalized(double az_deg, double el_deg)
    {
        if (!std::isfinite(az_deg) || !std::isfinite(el_deg))
            throw std::invalid_argument("Beam pointing angle must be finite.");
        double el = std::fmod(el_deg, 360.0);
        if (el < 0.0)
            el += 360.0;
        if (el > 180.0)
        {
            el = 360.0 - el;
            az_deg += 180.0;
        }
        return {wrap_azimuth_deg(az_deg), el};
    }

    BeamPointingAngle BeamPointingAngle::from_vector(const Eigen::Vector3d &v)
    {
        const double r = v.norm();
        if (!(r > 0.0))
            return {0.0, 0.0};
        const double el = rad_to_deg(std::acos(std::clamp(v.z() / r, -1.0, 1.0)));
        const double az = rad_to_deg(std::atan2(v.y(), v.x()));
        return {wrap_azimuth_deg(az), el};
    }
}

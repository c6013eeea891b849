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

#ifndef BEAMLAB_HARNESS_CSV_HPP
#define BEAMLAB_HARNESS_CSV_HPP

#include <string>
#include <string_view>
#include <vector>

// Minimal numeric CSV helpers (no quoting)
namespace beamlab::csv
{
    // Shortest decimal form that parses back to the same double
    void append_number(std::string &out, double v);
    std::string format_number(double v);

    // Splits on commas; a trailing '\r' is dropped
    std::vector<std::string_view> split(std::string_view line);

    // Throws std::runtime_error on a field that is not a complete number
    double parse_number(std::string_view field);
    std::vector<double> parse_numbers(std::string_view line);
}

#endif

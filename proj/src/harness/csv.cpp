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

#include "beamlab/harness/csv.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace beamlab::csv
{
    void append_number(std::string &out, double v)
    {
        std::array<char, 32> buf{};
        const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        out.append(buf.data(), res.ptr);
    }

    std::string format_number(double v)
    {
        std::string s;
        append_number(s, v);
        return s;
    }

    std::vector<std::string_view> split(std::string_view line)
    {
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true)
        {
            const auto pos = line.find(',', start);
            if (pos == std::string_view::npos)
            {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        return fields;
    }

    double parse_number(std::string_view field)
    {
        while (!field.empty() && field.front() == ' ')
            field.remove_prefix(1);
        while (!field.empty() && field.back() == ' ')
            field.remove_suffix(1);
        double v = 0.0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size() || field.empty())
            throw std::runtime_error("Invalid number '" + std::string(field) + "'.");
        return v;
    }

    std::vector<double> parse_numbers(std::string_view line)
    {
        std::vector<double> out;
        for (auto f : split(line))
            out.push_back(parse_number(f));
        return out;
    }
}

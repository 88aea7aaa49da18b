// SPDX-License-Identifier: Apache-2.0
//
// adropt: design and optimisation of angle-diversity optical wireless receivers
// Copyright (C) 2026 The adropt authors
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

#ifndef ADROPT_CONFIG_HPP
#define ADROPT_CONFIG_HPP

#include "optimizer.hpp"

#include "json.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace adropt
{

/// Every constant of a run, in SI units, after defaults and validation.
struct RunConfig
{
    SourceBeam<double> beam{10e-6, 950e-9, 1.0, 10e-3};
    LensSpec<double> lens{33e-3, 0.0};
    LinkParams<double> link;
    double ber = 3.8e-3; // informational; the SNR gap already encodes the target BER
    NoiseModel<double> noise;
    Config adr = *adr_preset("config1");
    TruncationSpec<double> truncation; // used when adr.truncated is set or for compare-truncation
    SearchOptions solver;
    int sweep_points = 200;

    /// Propagated beam plus link and noise constants.
    Context context() const;
};

/**
 * Parse a flat INI document.
 *
 * Keys may sit under `[beam]`, `[link]`, `[noise]`, `[adr]`, `[truncation]` and
 * `[solver]`, be written as `section.key` at top level, or be given bare when
 * the name is unambiguous. Values are in the units named by the key suffix.
 * Unknown keys and out-of-range values raise ConfigError naming the key.
 */
RunConfig parse_config(std::istream &in);
RunConfig load_config(const std::string &path);

/// The effective configuration, keyed as in the file.
nlohmann::json to_json(const RunConfig &cfg);

class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace adropt

#endif

// Copyright 2026 The ri-et Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration for the ri-et command line tool.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riet/analysis.hpp"
#include "riet/dynamics.hpp"
#include "riet/model.hpp"

namespace riet::cli {

enum class Method { Lindblad, RI, RITrotter, StatePrep, RHP };
enum class SweepParameter { DeltaE, Tau, TrotterN };

std::string_view to_string(Method m);
std::string_view to_string(SweepParameter p);

struct Sweep {
  SweepParameter parameter = SweepParameter::DeltaE;
  std::vector<double> values;
};

struct RunConfig {
  ModelParams model;
  std::optional<Preset> preset;
  Method method = Method::Lindblad;
  double tau = 0.1;
  double t_max = 1000.0;
  double dt = 0.01;
  int trotter_n = 1;
  TrotterSplit trotter_split = TrotterSplit::Shift;
  int record_stride = 0;  // 0 = about 1000 recorded points
  std::string rhp_engine = "lindblad";
  std::optional<Sweep> sweep;
  std::filesystem::path output_dir = "out";

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Record stride resolved against the step count.
  int resolved_record_stride() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses JSON text. Unknown keys are rejected. Parse errors carry the line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace riet::cli

// Copyright 2026 The cvteleport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef CVTELE_SWEEP_HPP
#define CVTELE_SWEEP_HPP

#include <cstddef>
#include <exception>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvtele/fock_oracle.hpp"
#include "cvtele/teleport.hpp"

namespace cvtele {

enum class SweepAxis { kEta, kR };

struct AxisGrid {
  double start = 0.05;
  double stop = 1.0;
  double step = 0.05;

  std::vector<double> values() const;
};

struct Operation {
  NgKind kind = NgKind::kNone;
  int order = 1;
  StrategyOrder strategy = StrategyOrder::kNcOnly;
};

struct ExperimentConfig {
  InputState input;
  SweepAxis axis = SweepAxis::kEta;
  // non-swept parameters; each may list several panel values
  std::vector<double> r{0.5};
  std::vector<double> eta{1.0};
  std::vector<double> nth{0.0};
  AxisGrid grid;
  std::vector<Operation> operations;
  bool baseline = true;
  OptimizerSettings optimizer;
  bool oracle_validation = false;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

struct SweepRow {
  InputState input;
  SweepAxis axis;
  double axis_value;
  double r;
  double eta;
  double nth;
  Operation op;
  std::optional<double> t_star;
  std::optional<double> fidelity;
  std::optional<double> probability;
  int evaluations = 0;
};

// rows ordered by (operation, r panel, nth panel, axis value)
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, int threads);

std::string csv_header();
std::string format_number(double v);
std::string format_row(const SweepRow& row);
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

int worker_threads_from_env();

// runs f(0..n-1) on a bounded pool; the first failing index (lowest) is
// rethrown after all tasks finish
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& f);

struct ValidationPoint {
  FidelityQuery query;
  double f_engine = 0.0;
  double p_engine = 0.0;
  double f_oracle = 0.0;
  double p_oracle = 0.0;
  int cutoff = 0;
  std::string error;
  bool pass = false;
};

inline constexpr double kValidationTolerance = 1e-6;

std::vector<FidelityQuery> validation_preset(const std::string& name);

std::vector<ValidationPoint> run_validation(
    const std::vector<FidelityQuery>& points, int threads,
    double tolerance = kValidationTolerance);

// oracle check of each sweep row at its optimal T
std::vector<ValidationPoint> validate_rows(const std::vector<SweepRow>& rows,
                                           int threads,
                                           double tolerance = kValidationTolerance);

void print_validation(std::ostream& os, const std::vector<ValidationPoint>& v);

}  // namespace cvtele

#endif  // CVTELE_SWEEP_HPP

// Copyright 2026 The cstomo Authors
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cstomo/linalg.hpp"
#include "cstomo/metrics.hpp"
#include "cstomo/operators.hpp"
#include "cstomo/recovery.hpp"
#include "cstomo/states.hpp"

// File formats. Every real number is written with 17 significant digits so
// parsing a written file reproduces the values bit for bit.
//
//   operator sets      JSON Lines, one descriptor per line:
//                        {"id":0,"kind":"computational","bits":"000000","setting":0}
//                        {"id":17,"kind":"theta_pattern","theta":0.1309,"signs":"++-+-+","setting":3}
//                        {"id":3135,"kind":"m_theta_power","theta":0,"n":6,"setting":null}
//                        {"id":9,"kind":"dense","re":[[...]],"im":[[...]],"setting":null}
//   measurements       CSV with header operator_id,value,setting_id,shots
//                      (empty setting_id / shots when absent)
//   density matrices   JSON {"d":64,"re":[[...]],"im":[[...]]}
namespace cstomo::io {

void write_operator_set(std::ostream& out, const OperatorSet& set);
/// Throws FormatError naming the offending line.
OperatorSet read_operator_set(std::istream& in, const std::string& name = "file");

void write_records(std::ostream& out, const std::vector<MeasurementRecord>& records);
/// Throws FormatError naming the offending line.
std::vector<MeasurementRecord> read_records(std::istream& in);

void write_matrix(std::ostream& out, const Matrix& m);
/// Raw matrix; callers validate with DensityMatrix::from_matrix.
Matrix read_matrix(std::istream& in);

void write_telemetry(std::ostream& out, const RecoveryResult& result, Method method);
void write_metrics(std::ostream& out, const MetricsReport& report);
/// theta,value
void write_visibility_csv(std::ostream& out, const std::vector<VisibilityPoint>& curve);

/// "{:.17g}"
std::string format_real(double x);

// File helpers; throw Error when the file cannot be opened.
OperatorSet load_operator_set(const std::filesystem::path& path);
std::vector<MeasurementRecord> load_records(const std::filesystem::path& path);
Matrix load_matrix(const std::filesystem::path& path);

}  // namespace cstomo::io

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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cstomo/operators.hpp"
#include "cstomo/recovery.hpp"
#include "cstomo/states.hpp"

namespace cstomo {

enum class Reference { kIdeal, kFullRecovery };

Reference parse_reference(std::string_view text);

struct SweepConfig {
  std::vector<std::size_t> sizes;
  int repetitions = 12;
  std::uint64_t master_seed = 0;
  NoiseModel noise;          // used when the sweep simulates its own data
  std::uint64_t shots = 0;   // idem
  Reference reference = Reference::kIdeal;
  RecoveryConfig recovery;
  unsigned threads = 0;      // 0: one per hardware thread

  /// Throws InvalidArgument on empty sizes, sizes outside [1, pool_size] or repetitions < 1.
  void check(std::size_t pool_size) const;
};

/// Seed of the subset drawn for (size, repetition): mix_seed({master, size, repetition}).
std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t size, int repetition);

struct SweepCell {
  std::size_t size = 0;
  int repetition = 0;
  std::uint64_t seed = 0;
  double fidelity = 0.0;
  double frobenius_error = 0.0;
  double mse = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string error;  // nonempty when the cell failed; its values are then excluded from the means
  double wall_seconds = 0.0;
};

struct SweepRow {
  std::size_t size = 0;
  double mean_fidelity = 0.0;
  double mean_frobenius_error = 0.0;
  double mean_mse = 0.0;
  std::size_t failures = 0;
  double wall_seconds = 0.0;  // summed over the row's cells
  std::vector<SweepCell> cells;  // sorted by repetition
};

struct SweepReport {
  std::vector<SweepRow> rows;  // in cfg.sizes order
};

/// Recovers from random subsets of `pool` for every (size, repetition) cell and
/// scores each reconstruction against the cat state of `pool.n` qubits.
/// `pool_records` hold the data for the whole pool. Deterministic for a fixed
/// configuration regardless of the thread count.
SweepReport run_sweep(const SweepConfig& cfg, const OperatorSet& pool,
                      const std::vector<MeasurementRecord>& pool_records);

/// Data for a pool measured on the noisy n-qubit cat state; noise and shot
/// seeds are derived from the master seed.
std::vector<MeasurementRecord> simulate_pool(const SweepConfig& cfg, const OperatorSet& pool);

void write_sweep_json(std::ostream& out, const SweepReport& report);
/// size,mean_fidelity,mean_frobenius_error,mean_mse,failures
void write_sweep_csv(std::ostream& out, const SweepReport& report);

}  // namespace cstomo

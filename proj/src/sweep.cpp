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

#include "cstomo/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "cstomo/error.hpp"
#include "cstomo/io.hpp"
#include "cstomo/metrics.hpp"
#include "cstomo/random.hpp"

namespace cstomo {

Reference parse_reference(std::string_view text) {
  if (text == "ideal") return Reference::kIdeal;
  if (text == "full") return Reference::kFullRecovery;
  throw InvalidArgument(fmt::format("unknown reference '{}' (expected ideal or full)", text));
}

void SweepConfig::check(std::size_t pool_size) const {
  if (sizes.empty()) throw InvalidArgument("sweep needs at least one sampling size");
  for (auto s : sizes) {
    if (s < 1 || s > pool_size) {
      throw InvalidArgument(fmt::format("sampling size {} outside [1, {}]", s, pool_size));
    }
  }
  if (repetitions < 1) throw InvalidArgument("repetitions must be >= 1");
  recovery.check();
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t size, int repetition) {
  return mix_seed({master_seed, static_cast<std::uint64_t>(size), static_cast<std::uint64_t>(repetition)});
}

std::vector<MeasurementRecord> simulate_pool(const SweepConfig& cfg, const OperatorSet& pool) {
  const DensityMatrix rho = apply_noise(ideal_density(pool.n), cfg.noise, mix_seed({cfg.master_seed, 0x6e6f697365ULL}));
  return simulate_measurements(rho, pool, cfg.shots, mix_seed({cfg.master_seed, 0x73686f7473ULL}));
}

SweepReport run_sweep(const SweepConfig& cfg, const OperatorSet& pool,
                      const std::vector<MeasurementRecord>& pool_records) {
  pool.check();
  cfg.check(pool.size());

  Matrix reference = ideal_density(pool.n).matrix();
  if (cfg.reference == Reference::kFullRecovery) {
    reference = recover(pool, pool_records, cfg.recovery).rho.matrix();
  }
  const Vector target = sc_state(pool.n);

  std::vector<SweepCell> cells;
  for (auto size : cfg.sizes) {
    for (int r = 0; r < cfg.repetitions; ++r) {
      SweepCell c;
      c.size = size;
      c.repetition = r;
      c.seed = cell_seed(cfg.master_seed, size, r);
      cells.push_back(c);
    }
  }

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      auto& cell = cells[i];
      const auto start = std::chrono::steady_clock::now();
      try {
        const OperatorSet subset = sample_without_replacement(pool, cell.size, cell.seed);
        const auto records = restrict_records(subset, pool_records);
        const RecoveryResult res = recover(subset, records, cfg.recovery);
        cell.fidelity = fidelity(res.rho, target);
        const auto err = error_metrics(res.rho.matrix(), reference);
        cell.frobenius_error = err.frobenius_error;
        cell.mse = err.mse;
        cell.iterations = res.iterations;
        cell.converged = res.converged;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      cell.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));
  {
    std::vector<std::jthread> pool_threads;
    for (unsigned t = 1; t < threads; ++t) pool_threads.emplace_back(worker);
    worker();
  }

  SweepReport report;
  std::size_t idx = 0;
  for (auto size : cfg.sizes) {
    SweepRow row;
    row.size = size;
    for (int r = 0; r < cfg.repetitions; ++r) row.cells.push_back(cells[idx++]);
    std::size_t ok = 0;
    for (const auto& c : row.cells) {
      row.wall_seconds += c.wall_seconds;
      if (!c.error.empty()) {
        ++row.failures;
        continue;
      }
      ++ok;
      row.mean_fidelity += c.fidelity;
      row.mean_frobenius_error += c.frobenius_error;
      row.mean_mse += c.mse;
    }
    if (ok > 0) {
      row.mean_fidelity /= static_cast<double>(ok);
      row.mean_frobenius_error /= static_cast<double>(ok);
      row.mean_mse /= static_cast<double>(ok);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_sweep_json(std::ostream& out, const SweepReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : row.cells) {
      cells.push_back({{"repetition", c.repetition},
                       {"seed", c.seed},
                       {"fidelity", c.fidelity},
                       {"frobenius_error", c.frobenius_error},
                       {"mse", c.mse},
                       {"iterations", c.iterations},
                       {"converged", c.converged},
                       {"error", c.error},
                       {"wall_seconds", c.wall_seconds}});
    }
    rows.push_back({{"size", row.size},
                    {"mean_fidelity", row.mean_fidelity},
                    {"mean_frobenius_error", row.mean_frobenius_error},
                    {"mean_mse", row.mean_mse},
                    {"failures", row.failures},
                    {"wall_seconds", row.wall_seconds},
                    {"cells", cells}});
  }
  out << nlohmann::json{{"rows", rows}}.dump(2) << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
  out << "size,mean_fidelity,mean_frobenius_error,mean_mse,failures\n";
  for (const auto& row : report.rows) {
    out << row.size << ',' << io::format_real(row.mean_fidelity) << ',' << io::format_real(row.mean_frobenius_error)
        << ',' << io::format_real(row.mean_mse) << ',' << row.failures << '\n';
  }
}

}  // namespace cstomo

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

// Command-line driver: gen-ops, simulate, recover, metrics, sweep.
//
// Exit codes: 0 success, 1 usage error, 2 data or format error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cstomo/error.hpp"
#include "cstomo/io.hpp"
#include "cstomo/metrics.hpp"
#include "cstomo/random.hpp"
#include "cstomo/recovery.hpp"
#include "cstomo/states.hpp"
#include "cstomo/sweep.hpp"

namespace fs = std::filesystem;
using namespace cstomo;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Re-throws flag-value errors as usage errors.
template <class F>
auto flag_value(F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  return out;
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  return fs::path(p.string() + suffix);
}

struct SolverFlags {
  std::string method = "phaselift";
  std::optional<double> tol_abs;
  double tol_rel = 1e-5;
  int max_iter = 20000;
  double epsilon = 0.0;
  double penalty = 1.0;
  bool no_balancing = false;
  double tie_break = 0.0;

  void add_to(CLI::App* app) {
    app->add_option("--method", method, "phaselift or l1")->check(CLI::IsMember({"phaselift", "l1"}));
    app->add_option("--tol-abs", tol_abs, "absolute ADMM tolerance (default 1e-7*d)");
    app->add_option("--tol-rel", tol_rel, "relative ADMM tolerance");
    app->add_option("--max-iter", max_iter, "iteration cap");
    app->add_option("--epsilon", epsilon, "l1: allowed |Tr(M_i rho) - b_i|");
    app->add_option("--penalty", penalty, "initial ADMM penalty");
    app->add_flag("--no-balancing", no_balancing, "keep the penalty fixed");
    app->add_option("--tie-break", tie_break, "weight of the |rho - I/d|^2 term selecting among optima");
  }

  RecoveryConfig config() const {
    return flag_value([&] {
      RecoveryConfig cfg;
      cfg.method = parse_method(method);
      cfg.tol_abs = tol_abs;
      cfg.tol_rel = tol_rel;
      cfg.max_iter = max_iter;
      cfg.equality_epsilon = epsilon;
      cfg.penalty = penalty;
      cfg.residual_balancing = !no_balancing;
      cfg.tie_break = tie_break;
      cfg.check();
      return cfg;
    });
  }
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError(fmt::format("bad sampling size '{}'", item));
    sizes.push_back(static_cast<std::size_t>(v));
  }
  if (sizes.empty()) throw UsageError("--sizes needs at least one value");
  return sizes;
}

DensityMatrix load_state(const std::string& spec, int n) {
  if (spec == "ideal") return ideal_density(n);
  Matrix m = io::load_matrix(spec);
  DensityMatrix rho = DensityMatrix::from_matrix(m);
  if (rho.dim() != (Eigen::Index{1} << n)) {
    throw DimensionError(fmt::format("state '{}' has dimension {}, operators need {}", spec, rho.dim(), Eigen::Index{1} << n));
  }
  return rho;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed tomography of n-qubit cat states"};
  app.require_subcommand(1);

  // gen-ops
  int gen_qubits = 6;
  std::string gen_set = "full";
  fs::path gen_out;
  auto* gen = app.add_subcommand("gen-ops", "write a named operator set as JSON Lines");
  gen->add_option("--qubits", gen_qubits, "qubit count")->required();
  gen->add_option("--set", gen_set, "full, fid14, fid3 or photon8")->required();
  gen->add_option("--out", gen_out, "output .jsonl")->required();

  // simulate
  fs::path sim_ops;
  std::string sim_state = "ideal";
  std::string sim_noise = "none";
  std::uint64_t sim_shots = 0;
  std::uint64_t sim_seed = 0;
  fs::path sim_out;
  auto* sim = app.add_subcommand("simulate", "simulate measurement data for an operator set");
  sim->add_option("--ops", sim_ops, "operator set .jsonl")->required();
  sim->add_option("--state", sim_state, "'ideal' or a density-matrix JSON file");
  sim->add_option("--noise", sim_noise, "none | white:<p> | gaussian:<sigma>");
  sim->add_option("--shots", sim_shots, "shots per setting (0: exact values)");
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--out", sim_out, "output .csv")->required();

  // recover
  fs::path rec_ops;
  fs::path rec_meas;
  fs::path rec_out;
  std::optional<fs::path> rec_telemetry;
  SolverFlags rec_flags;
  auto* rec = app.add_subcommand("recover", "reconstruct a density matrix");
  rec->add_option("--ops", rec_ops, "operator set .jsonl")->required();
  rec->add_option("--meas", rec_meas, "measurement .csv")->required();
  rec->add_option("--out", rec_out, "output density matrix .json")->required();
  rec->add_option("--telemetry", rec_telemetry, "solver telemetry .json (default: <out>.telemetry.json)");
  rec_flags.add_to(rec);

  // metrics
  fs::path met_rho;
  int met_qubits = 6;
  fs::path met_out;
  std::optional<fs::path> met_reference;
  auto* met = app.add_subcommand("metrics", "fidelity, witness, visibility, error and entropy of a state");
  met->add_option("--rho", met_rho, "density matrix .json")->required();
  met->add_option("--qubits", met_qubits, "qubit count")->required();
  met->add_option("--reference", met_reference, "density matrix .json to measure errors against (default: ideal)");
  met->add_option("--out", met_out, "report .json (visibility series goes to <out>.visibility.csv)")->required();

  // sweep
  std::optional<fs::path> sw_ops;
  int sw_qubits = 6;
  std::string sw_set = "full";
  std::optional<fs::path> sw_meas;
  std::string sw_noise = "none";
  std::uint64_t sw_shots = 0;
  std::uint64_t sw_seed = 0;
  std::string sw_sizes;
  int sw_reps = 12;
  std::string sw_reference = "ideal";
  unsigned sw_threads = 0;
  fs::path sw_out;
  SolverFlags sw_flags;
  auto* sw = app.add_subcommand("sweep", "fidelity and error versus sampling number");
  sw->add_option("--ops", sw_ops, "operator pool .jsonl (default: --set/--qubits)");
  sw->add_option("--qubits", sw_qubits, "qubit count when no --ops is given");
  sw->add_option("--set", sw_set, "named pool when no --ops is given");
  sw->add_option("--meas", sw_meas, "pool measurements .csv (default: simulate from --noise/--shots)");
  sw->add_option("--noise", sw_noise, "none | white:<p> | gaussian:<sigma>");
  sw->add_option("--shots", sw_shots, "shots per setting for simulated data");
  sw->add_option("--seed", sw_seed, "master seed");
  sw->add_option("--sizes", sw_sizes, "comma-separated sampling numbers")->required();
  sw->add_option("--reps", sw_reps, "repetitions per size");
  sw->add_option("--reference", sw_reference, "ideal or full")->check(CLI::IsMember({"ideal", "full"}));
  sw->add_option("--threads", sw_threads, "worker threads (0: all cores)");
  sw->add_option("--out", sw_out, "report .json (series goes to <out>.csv)")->required();
  sw_flags.add_to(sw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      const OperatorSet set = flag_value([&] { return standard_set(gen_set, gen_qubits); });
      auto out = open_out(gen_out);
      io::write_operator_set(out, set);
      std::cout << set.size() << '\n';
    } else if (sim->parsed()) {
      const NoiseModel noise = flag_value([&] { return NoiseModel::parse(sim_noise); });
      const OperatorSet ops = io::load_operator_set(sim_ops);
      const DensityMatrix rho = apply_noise(load_state(sim_state, ops.n), noise, mix_seed({sim_seed, 1}));
      const auto records = simulate_measurements(rho, ops, sim_shots, mix_seed({sim_seed, 2}));
      auto out = open_out(sim_out);
      io::write_records(out, records);
    } else if (rec->parsed()) {
      const RecoveryConfig cfg = rec_flags.config();
      const OperatorSet ops = io::load_operator_set(rec_ops);
      const auto records = io::load_records(rec_meas);
      const RecoveryResult res = recover(ops, records, cfg);
      {
        auto out = open_out(rec_out);
        io::write_matrix(out, res.rho.matrix());
      }
      auto tel = open_out(rec_telemetry.value_or(sibling(rec_out, ".telemetry.json")));
      io::write_telemetry(tel, res, cfg.method);
      io::write_telemetry(std::cout, res, cfg.method);
    } else if (met->parsed()) {
      const DensityMatrix rho = DensityMatrix::from_matrix(io::load_matrix(met_rho));
      std::optional<Matrix> reference;
      if (met_reference) reference = io::load_matrix(*met_reference);
      const MetricsReport report = compute_metrics(rho, met_qubits, reference ? &*reference : nullptr);
      {
        auto out = open_out(met_out);
        io::write_metrics(out, report);
      }
      auto csv = open_out(sibling(met_out, ".visibility.csv"));
      io::write_visibility_csv(csv, report.visibility);
      std::cout << fmt::format("fidelity {:.6f}  witness {:.6f}  entropy {:.6f}  frobenius_error {:.3e}\n",
                               report.fidelity, report.witness_expectation, report.entropy, report.frobenius_error);
    } else if (sw->parsed()) {
      SweepConfig cfg;
      cfg.sizes = parse_sizes(sw_sizes);
      cfg.repetitions = sw_reps;
      cfg.master_seed = sw_seed;
      cfg.noise = flag_value([&] { return NoiseModel::parse(sw_noise); });
      cfg.shots = sw_shots;
      cfg.reference = flag_value([&] { return parse_reference(sw_reference); });
      cfg.recovery = sw_flags.config();
      cfg.threads = sw_threads;
      const OperatorSet pool = sw_ops ? io::load_operator_set(*sw_ops)
                                      : flag_value([&] { return standard_set(sw_set, sw_qubits); });
      flag_value([&] {
        cfg.check(pool.size());
        return 0;
      });
      const auto records = sw_meas ? io::load_records(*sw_meas) : simulate_pool(cfg, pool);
      const SweepReport report = run_sweep(cfg, pool, records);
      {
        auto out = open_out(sw_out);
        write_sweep_json(out, report);
      }
      auto csv = open_out(sibling(sw_out, ".csv"));
      write_sweep_csv(csv, report);
      write_sweep_csv(std::cout, report);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

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

#include "cstomo/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "cstomo/error.hpp"

namespace cstomo::io {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string matrix_rows(const Matrix& m, bool imag) {
  std::string s = "[";
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    if (j) s += ',';
    s += '[';
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (k) s += ',';
      s += format_real(imag ? m(j, k).imag() : m(j, k).real());
    }
    s += ']';
  }
  s += ']';
  return s;
}

Matrix matrix_from_json(const json& re, const json& im, std::size_t line) {
  if (!re.is_array() || !im.is_array() || re.size() != im.size() || re.empty()) {
    throw FormatError("\"re\" and \"im\" must be nonempty arrays of equal length", line);
  }
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = static_cast<Eigen::Index>(re[0].is_array() ? re[0].size() : 0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < rows; ++j) {
    const auto& rr = re[static_cast<std::size_t>(j)];
    const auto& ir = im[static_cast<std::size_t>(j)];
    if (!rr.is_array() || !ir.is_array() || static_cast<Eigen::Index>(rr.size()) != cols ||
        static_cast<Eigen::Index>(ir.size()) != cols) {
      throw FormatError(fmt::format("matrix row {} has the wrong length", j), line);
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& a = rr[static_cast<std::size_t>(k)];
      const auto& b = ir[static_cast<std::size_t>(k)];
      if (!a.is_number() || !b.is_number()) throw FormatError("matrix entries must be numbers", line);
      m(j, k) = Complex(a.get<double>(), b.get<double>());
    }
  }
  return m;
}

std::string pattern_string(const OperatorDescriptor& desc) {
  std::string s;
  if (const auto* c = std::get_if<Computational>(&desc)) {
    for (auto b : c->bits) s += b ? '1' : '0';
  } else if (const auto* t = std::get_if<ThetaPattern>(&desc)) {
    for (auto sg : t->signs) s += sg == Sign::kPlus ? '+' : '-';
  }
  return s;
}

const json& require(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(fmt::format("missing key \"{}\"", key), line);
  return *it;
}

double require_number(const json& obj, const char* key, std::size_t line) {
  const auto& v = require(obj, key, line);
  if (!v.is_number()) throw FormatError(fmt::format("\"{}\" must be a number", key), line);
  return v.get<double>();
}

std::string require_string(const json& obj, const char* key, std::size_t line) {
  const auto& v = require(obj, key, line);
  if (!v.is_string()) throw FormatError(fmt::format("\"{}\" must be a string", key), line);
  return v.get<std::string>();
}

OperatorDescriptor parse_descriptor(const json& obj, std::size_t line) {
  const std::string kind = require_string(obj, "kind", line);
  if (kind == "computational") {
    Computational c;
    for (char ch : require_string(obj, "bits", line)) {
      if (ch != '0' && ch != '1') throw FormatError("bits must contain only 0 and 1", line);
      c.bits.push_back(ch == '1' ? 1 : 0);
    }
    return c;
  }
  if (kind == "theta_pattern") {
    ThetaPattern t;
    t.theta = require_number(obj, "theta", line);
    for (char ch : require_string(obj, "signs", line)) {
      if (ch != '+' && ch != '-') throw FormatError("signs must contain only + and -", line);
      t.signs.push_back(ch == '+' ? Sign::kPlus : Sign::kMinus);
    }
    return t;
  }
  if (kind == "m_theta_power") {
    const auto& n = require(obj, "n", line);
    if (!n.is_number_integer()) throw FormatError("\"n\" must be an integer", line);
    return MThetaPower{require_number(obj, "theta", line), n.get<int>()};
  }
  if (kind == "dense") {
    return DenseOperator{matrix_from_json(require(obj, "re", line), require(obj, "im", line), line)};
  }
  throw FormatError(fmt::format("unknown operator kind \"{}\"", kind), line);
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

template <class T>
T load_with(const std::filesystem::path& path, T (*reader)(std::istream&)) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  return reader(in);
}

}  // namespace

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

void write_operator_set(std::ostream& out, const OperatorSet& set) {
  set.check();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& desc = set.descriptors[i];
    std::string body = std::visit(
        overloaded{
            [&](const Computational&) { return fmt::format("\"kind\":\"computational\",\"bits\":\"{}\"", pattern_string(desc)); },
            [&](const ThetaPattern& t) {
              return fmt::format("\"kind\":\"theta_pattern\",\"theta\":{},\"signs\":\"{}\"", format_real(t.theta),
                                 pattern_string(desc));
            },
            [](const MThetaPower& m) {
              return fmt::format("\"kind\":\"m_theta_power\",\"theta\":{},\"n\":{}", format_real(m.theta), m.n);
            },
            [](const DenseOperator& d) {
              return fmt::format("\"kind\":\"dense\",\"re\":{},\"im\":{}", matrix_rows(d.matrix, false),
                                 matrix_rows(d.matrix, true));
            },
        },
        desc);
    const std::string setting = set.settings[i] ? std::to_string(*set.settings[i]) : "null";
    out << "{\"id\":" << i << ',' << body << ",\"setting\":" << setting << "}\n";
  }
}

OperatorSet read_operator_set(std::istream& in, const std::string& name) {
  struct Entry {
    std::size_t id;
    OperatorDescriptor desc;
    std::optional<int> setting;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (trim(text).empty()) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw FormatError(fmt::format("invalid JSON ({})", e.what()), line_no);
    }
    if (!obj.is_object()) throw FormatError("expected a JSON object", line_no);
    const auto& id = require(obj, "id", line_no);
    if (!id.is_number_unsigned()) throw FormatError("\"id\" must be a non-negative integer", line_no);
    std::optional<int> setting;
    if (auto it = obj.find("setting"); it != obj.end() && !it->is_null()) {
      if (!it->is_number_integer()) throw FormatError("\"setting\" must be an integer or null", line_no);
      setting = it->get<int>();
    }
    entries.push_back({id.get<std::size_t>(), parse_descriptor(obj, line_no), setting, line_no});
  }
  if (entries.empty()) throw FormatError("operator file is empty");
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.id < b.id; });

  OperatorSet set;
  set.name = name;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.id != i) throw FormatError(fmt::format("operator ids must be 0..{} without gaps or repeats", entries.size() - 1), e.line);
    int q = 0;
    try {
      validate(e.desc);
      q = qubit_count(e.desc);
    } catch (const Error& err) {
      throw FormatError(err.what(), e.line);
    }
    if (i == 0) set.n = q;
    if (q != set.n) throw FormatError(fmt::format("operator acts on {} qubits, file started with {}", q, set.n), e.line);
    set.push_back(e.desc, e.setting);
  }
  return set;
}

void write_records(std::ostream& out, const std::vector<MeasurementRecord>& records) {
  out << "operator_id,value,setting_id,shots\n";
  for (const auto& r : records) {
    out << r.operator_id << ',' << format_real(r.value) << ',';
    if (r.setting_id) out << *r.setting_id;
    out << ',';
    if (r.shots) out << *r.shots;
    out << '\n';
  }
}

std::vector<MeasurementRecord> read_records(std::istream& in) {
  std::string text;
  std::size_t line_no = 0;
  if (!std::getline(in, text)) throw FormatError("measurement file is empty", 1);
  ++line_no;
  if (trim(text) != "operator_id,value,setting_id,shots") {
    throw FormatError("expected header 'operator_id,value,setting_id,shots'", line_no);
  }
  std::vector<MeasurementRecord> records;
  while (std::getline(in, text)) {
    ++line_no;
    const std::string_view row = trim(text);
    if (row.empty()) continue;
    const auto fields = split_csv(row);
    if (fields.size() != 4) throw FormatError(fmt::format("expected 4 fields, found {}", fields.size()), line_no);
    MeasurementRecord r;
    if (!parse_int(trim(fields[0]), r.operator_id)) throw FormatError("operator_id is not a non-negative integer", line_no);
    if (!parse_double(trim(fields[1]), r.value)) throw FormatError("value is not a finite decimal number", line_no);
    if (const auto f = trim(fields[2]); !f.empty()) {
      int s = 0;
      if (!parse_int(f, s)) throw FormatError("setting_id is not an integer", line_no);
      r.setting_id = s;
    }
    if (const auto f = trim(fields[3]); !f.empty()) {
      std::uint64_t s = 0;
      if (!parse_int(f, s)) throw FormatError("shots is not a non-negative integer", line_no);
      r.shots = s;
    }
    records.push_back(r);
  }
  return records;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << "{\"d\":" << m.rows() << ",\"re\":" << matrix_rows(m, false) << ",\"im\":" << matrix_rows(m, true) << "}\n";
}

Matrix read_matrix(std::istream& in) {
  json obj;
  try {
    obj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(fmt::format("invalid JSON ({})", e.what()));
  }
  if (!obj.is_object()) throw FormatError("expected a JSON object");
  const auto& d = require(obj, "d", 0);
  if (!d.is_number_unsigned()) throw FormatError("\"d\" must be a positive integer");
  Matrix m = matrix_from_json(require(obj, "re", 0), require(obj, "im", 0), 0);
  const auto dim = d.get<Eigen::Index>();
  if (m.rows() != dim || m.cols() != dim) {
    throw FormatError(fmt::format("\"d\" is {} but the matrix is {}x{}", dim, m.rows(), m.cols()));
  }
  return m;
}

void write_telemetry(std::ostream& out, const RecoveryResult& r, Method method) {
  json j;
  j["method"] = std::string(to_string(method));
  j["objective"] = r.objective;
  j["primal_residual"] = r.primal_residual;
  j["dual_residual"] = r.dual_residual;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["diagnostic"] = r.diagnostic;
  out << j.dump(2) << '\n';
}

void write_metrics(std::ostream& out, const MetricsReport& r) {
  json j;
  j["fidelity"] = r.fidelity;
  j["witness_expectation"] = r.witness_expectation;
  j["frobenius_error"] = r.frobenius_error;
  j["mse"] = r.mse;
  j["entropy"] = r.entropy;
  std::vector<double> theta;
  std::vector<double> value;
  for (const auto& p : r.visibility) {
    theta.push_back(p.theta);
    value.push_back(p.value);
  }
  j["theta"] = theta;
  j["value"] = value;
  j["visibility_amplitude"] = r.visibility_amplitude ? json(*r.visibility_amplitude) : json(nullptr);
  out << j.dump(2) << '\n';
}

void write_visibility_csv(std::ostream& out, const std::vector<VisibilityPoint>& curve) {
  out << "theta,value\n";
  for (const auto& p : curve) out << format_real(p.theta) << ',' << format_real(p.value) << '\n';
}

OperatorSet load_operator_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open '{}'", path.string()));
  return read_operator_set(in, path.stem().string());
}

std::vector<MeasurementRecord> load_records(const std::filesystem::path& path) {
  return load_with(path, &read_records);
}

Matrix load_matrix(const std::filesystem::path& path) { return load_with(path, &read_matrix); }

}  // namespace cstomo::io

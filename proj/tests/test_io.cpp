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


#include <gtest/gtest.h>

#include <cstdlib>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cstomo/error.hpp"
#include "cstomo/io.hpp"
#include "support.hpp"

namespace cstomo {
namespace {

std::string serialize(const OperatorSet& set) {
  std::ostringstream out;
  io::write_operator_set(out, set);
  return out.str();
}

OperatorSet parse_ops(const std::string& text) {
  std::istringstream in(text);
  return io::read_operator_set(in);
}

std::vector<MeasurementRecord> parse_records(const std::string& text) {
  std::istringstream in(text);
  return io::read_records(in);
}

std::size_t format_error_line(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const FormatError& e) {
    return e.line();
  }
  return 0;
}

TEST(OperatorFile, RoundTripStandardSets) {
  for (auto [name, n] : {std::pair{"full", 3}, std::pair{"fid14", 6}, std::pair{"fid3", 2}, std::pair{"photon8", 8}}) {
    OperatorSet set = standard_set(name, n);
    const std::string text = serialize(set);
    OperatorSet back = parse_ops(text);
    ASSERT_EQ(back.size(), set.size());
    EXPECT_EQ(back.n, set.n);
    EXPECT_EQ(back.settings, set.settings);
    EXPECT_EQ(serialize(back), text);
    for (std::size_t i = 0; i < set.size(); i += 7) EXPECT_EQ(realize(back.descriptors[i]), realize(set.descriptors[i]));
  }
}

TEST(OperatorFile, LineFormat) {
  OperatorSet set = standard_set("full", 2);
  std::istringstream in(serialize(set));
  std::string first, fifth;
  std::getline(in, first);
  for (int i = 0; i < 4; ++i) std::getline(in, fifth);
  EXPECT_EQ(first, R"({"id":0,"kind":"computational","bits":"00","setting":0})");
  EXPECT_EQ(fifth, R"({"id":4,"kind":"theta_pattern","theta":0,"signs":"++","setting":1})");
  OperatorSet fid = standard_set("fid3", 6);
  EXPECT_NE(serialize(fid).find(R"({"id":2,"kind":"m_theta_power","theta":0,"n":6,"setting":null})"), std::string::npos);
}

TEST(OperatorFile, ThetaKeepsEveryBit) {
  OperatorSet set;
  set.n = 1;
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double theta = testing::random_complex(1, 1, rng)(0, 0).real() * 100.0;
    set.push_back(ThetaPattern{theta, {Sign::kMinus}}, std::nullopt);
  }
  OperatorSet back = parse_ops(serialize(set));
  for (std::size_t i = 0; i < set.size(); ++i)
    EXPECT_EQ(std::get<ThetaPattern>(back.descriptors[i]).theta, std::get<ThetaPattern>(set.descriptors[i]).theta);
}

TEST(OperatorFile, DenseRoundTrip) {
  Rng rng(2);
  OperatorSet set;
  set.n = 2;
  set.push_back(DenseOperator{testing::random_hermitian(4, rng)}, 5);
  OperatorSet back = parse_ops(serialize(set));
  EXPECT_EQ(std::get<DenseOperator>(back.descriptors[0]).matrix, std::get<DenseOperator>(set.descriptors[0]).matrix);
  EXPECT_EQ(back.settings[0], 5);
}

TEST(OperatorFile, IdsMayArriveOutOfOrder) {
  OperatorSet back = parse_ops(
      "{\"id\":1,\"kind\":\"computational\",\"bits\":\"1\",\"setting\":null}\n"
      "{\"id\":0,\"kind\":\"computational\",\"bits\":\"0\",\"setting\":null}\n");
  EXPECT_EQ(std::get<Computational>(back.descriptors[0]).bits, std::vector<std::uint8_t>{0});
}

TEST(OperatorFile, ErrorsCarryLineNumbers) {
  const std::string good = "{\"id\":0,\"kind\":\"computational\",\"bits\":\"00\",\"setting\":null}\n";
  EXPECT_EQ(format_error_line([&] { parse_ops(good + "{\"id\":1,\"kind\":\"computational\",\"bits\":\"0x\"}\n"); }), 2u);
  EXPECT_EQ(format_error_line([&] { parse_ops(good + "\n{oops\n"); }), 3u);
  EXPECT_EQ(format_error_line([&] { parse_ops(good + "{\"id\":1,\"kind\":\"weird\"}\n"); }), 2u);
  EXPECT_EQ(format_error_line([&] { parse_ops(good + "{\"id\":2,\"kind\":\"computational\",\"bits\":\"11\"}\n"); }), 2u);
  EXPECT_EQ(format_error_line([&] { parse_ops(good + "{\"id\":1,\"kind\":\"computational\",\"bits\":\"111\"}\n"); }), 2u);
  EXPECT_EQ(format_error_line([&] { parse_ops(good + "{\"id\":1,\"kind\":\"theta_pattern\",\"signs\":\"+-\"}\n"); }), 2u);
  EXPECT_THROW(parse_ops(""), FormatError);
}

TEST(RecordFile, RoundTrip) {
  std::vector<MeasurementRecord> rec{{0, 0.5, 0, 1000},
                                     {1, 1.0 / 3.0, std::nullopt, std::nullopt},
                                     {2, -0.123456789012345678, 7, std::nullopt},
                                     {3, 5e-300, std::nullopt, 12}};
  std::ostringstream out;
  io::write_records(out, rec);
  EXPECT_EQ(out.str().substr(0, 35), "operator_id,value,setting_id,shots\n");
  EXPECT_EQ(parse_records(out.str()), rec);
}

TEST(RecordFile, RandomValuesAreExact) {
  Rng rng(3);
  std::vector<MeasurementRecord> rec;
  for (std::size_t i = 0; i < 500; ++i)
    rec.push_back({i, testing::random_complex(1, 1, rng)(0, 0).real(), std::nullopt, std::nullopt});
  std::ostringstream out;
  io::write_records(out, rec);
  EXPECT_EQ(parse_records(out.str()), rec);
}

TEST(RecordFile, ErrorsCarryLineNumbers) {
  const std::string header = "operator_id,value,setting_id,shots\n";
  EXPECT_EQ(format_error_line([&] { parse_records("id,value\n0,1,,\n"); }), 1u);
  EXPECT_EQ(format_error_line([&] { parse_records(header + "0,0.5,,\n1,abc,,\n"); }), 3u);
  EXPECT_EQ(format_error_line([&] { parse_records(header + "0,0.5,,\n1,0.5\n"); }), 3u);
  EXPECT_EQ(format_error_line([&] { parse_records(header + "-1,0.5,,\n"); }), 2u);
  EXPECT_EQ(format_error_line([&] { parse_records(header + "0,nan,,\n"); }), 2u);
  EXPECT_EQ(format_error_line([&] { parse_records(header + "0,0.5,x,\n"); }), 2u);
  EXPECT_EQ(format_error_line([&] { parse_records(header + "0,0.5,,-3\n"); }), 2u);
  EXPECT_EQ(format_error_line([&] { parse_records(""); }), 1u);
  try {
    parse_records(header + "0,0.5,,\n1,abc,,\n");
  } catch (const FormatError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 3: ", 0), 0u);
  }
}

TEST(MatrixFile, RoundTrip) {
  Rng rng(4);
  Matrix m = testing::random_complex(8, 8, rng);
  std::ostringstream out;
  io::write_matrix(out, m);
  std::istringstream in(out.str());
  EXPECT_EQ(io::read_matrix(in), m);
  auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["d"], 8);
  EXPECT_EQ(j["re"].size(), 8u);
}

TEST(MatrixFile, Errors) {
  auto read = [](const std::string& s) {
    std::istringstream in(s);
    return io::read_matrix(in);
  };
  EXPECT_THROW(read("{\"d\":2,\"re\":[[1,0],[0,1]],\"im\":[[0,0]]}"), FormatError);
  EXPECT_THROW(read("{\"d\":3,\"re\":[[1,0],[0,1]],\"im\":[[0,0],[0,0]]}"), FormatError);
  EXPECT_THROW(read("{\"d\":2,\"re\":[[1,\"a\"],[0,1]],\"im\":[[0,0],[0,0]]}"), FormatError);
  EXPECT_THROW(read("[1,2]"), FormatError);
  EXPECT_THROW(read("not json"), FormatError);
}

TEST(Reports, MetricsJsonFields) {
  MetricsReport r = compute_metrics(ideal_density(2), 2);
  std::ostringstream out;
  io::write_metrics(out, r);
  auto j = nlohmann::json::parse(out.str());
  for (const char* key : {"fidelity", "witness_expectation", "frobenius_error", "mse", "entropy", "theta", "value",
                          "visibility_amplitude"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["theta"].size(), 48u);
  EXPECT_EQ(j["value"].size(), 48u);
  std::ostringstream csv;
  io::write_visibility_csv(csv, r.visibility);
  EXPECT_EQ(csv.str().substr(0, 12), "theta,value\n");
}

TEST(Reports, TelemetryJsonFields) {
  RecoveryResult r{DensityMatrix::maximally_mixed(2), 0.25, 1e-9, 2e-9, 40, true, {}};
  std::ostringstream out;
  io::write_telemetry(out, r, Method::kL1);
  auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["method"], "l1");
  EXPECT_EQ(j["iterations"], 40);
  EXPECT_EQ(j["converged"], true);
  EXPECT_DOUBLE_EQ(j["objective"].get<double>(), 0.25);
}

TEST(FormatReal, SeventeenDigits) {
  EXPECT_EQ(io::format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_real(1.0), "1");
  const std::string tiny = io::format_real(std::numeric_limits<double>::denorm_min());
  EXPECT_EQ(std::strtod(tiny.c_str(), nullptr), std::numeric_limits<double>::denorm_min());
}

TEST(Files, MissingPath) {
  EXPECT_THROW(io::load_operator_set("/nonexistent/ops.jsonl"), Error);
  EXPECT_THROW(io::load_records("/nonexistent/meas.csv"), Error);
  EXPECT_THROW(io::load_matrix("/nonexistent/rho.json"), Error);
}

}  // namespace
}  // namespace cstomo

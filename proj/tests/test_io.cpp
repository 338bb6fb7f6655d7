// Copyright 2026 The qbind Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "qbind/io.hpp"
#include "support/random.hpp"

namespace qbind::io {
namespace {

TEST(MatrixJson, RoundTripIsBitExact) {
  testing::Rng rng(5);
  for (std::size_t d : {1u, 2u, 5u, 9u}) {
    const ComplexMatrix m = testing::ginibre(d, rng) * 1e-7;
    const auto back = matrix_from_json(parse_json(matrix_to_json(m).dump(), "m"), "m");
    ASSERT_EQ(back.rows(), m.rows());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        EXPECT_EQ(back(r, c), m(r, c));
      }
    }
  }
}

TEST(MatrixJson, ImaginaryPartIsOptional) {
  const auto m = matrix_from_json(parse_json(R"({"dim":2,"re":[[1,2],[3,4]]})", "m"), "m");
  EXPECT_EQ(m(1, 0), cplx(3.0, 0.0));
  EXPECT_EQ(m(0, 1).imag(), 0.0);
}

TEST(MatrixJson, SchemaErrors) {
  const char* bad[] = {
      R"({"re":[[1]]})",                        // missing dim
      R"({"dim":0,"re":[]})",                   // non-positive dim
      R"({"dim":2,"re":[[1,2]]})",              // too few rows
      R"({"dim":2,"re":[[1,2],[3]]})",          // ragged row
      R"({"dim":1,"re":[["x"]]})",              // non-numeric
      R"({"dim":1,"re":[[1]],"scale":2})",      // unknown field
      R"([1,2])",                               // not an object
  };
  for (const char* text : bad) {
    EXPECT_THROW(matrix_from_json(parse_json(text, "m"), "m"), ValidationError) << text;
  }
  EXPECT_THROW(parse_json("{not json", "m"), ValidationError);
}

TEST(VectorJson, PlainAndComplexForms) {
  const auto a = vector_from_json(parse_json("[1, 0.5]", "v"), "v");
  EXPECT_EQ(a(1), cplx(0.5, 0.0));
  const auto b = vector_from_json(parse_json(R"({"re":[0,1],"im":[2,3]})", "v"), "v");
  EXPECT_EQ(b(0), cplx(0.0, 2.0));
  EXPECT_THROW(vector_from_json(parse_json(R"({"re":[0,1],"im":[2]})", "v"), "v"),
               ValidationError);
  const auto c = vector_from_json(parse_json(vector_to_json(b).dump(), "v"), "v");
  EXPECT_EQ(c, b);
}

TEST(ConstraintsJson, DefaultsAndRoundTrip) {
  const auto c = constraints_from_json(
      parse_json(R"({"amplitude_max":0.02,"slew_max":2e6})", "c"), "c");
  EXPECT_EQ(c.slew_min, -2e6);
  EXPECT_EQ(c.amplitude_min, 0.0);
  EXPECT_EQ(c.dipole, 1.0);
  const auto back = constraints_from_json(parse_json(constraints_to_json(c).dump(), "c"), "c");
  EXPECT_EQ(back.amplitude_max, c.amplitude_max);
  EXPECT_EQ(back.slew_min, c.slew_min);
  EXPECT_THROW(constraints_from_json(parse_json(R"({"amplitude_max":1})", "c"), "c"),
               ValidationError);
  EXPECT_THROW(
      constraints_from_json(parse_json(R"({"amplitude_max":-1,"slew_max":1})", "c"), "c"),
      ValidationError);
}

TEST(ScheduleJson, RoundTripIsBitExact) {
  testing::Rng rng(17);
  pulse::PulseConstraints c;
  c.amplitude_max = 0.02;
  c.amplitude_min = 0.001;
  c.slew_max = 2e6;
  c.slew_min = -3e6;
  c.dipole = 1e10;
  for (std::size_t d : {2u, 4u, 6u}) {
    const auto s = pulse::schedule(UnitaryOperator(testing::haar_unitary(d, rng)), c);
    const auto back = schedule_from_json(parse_json(schedule_to_json(s).dump(), "s"), "s");
    EXPECT_EQ(schedule_to_json(back).dump(), schedule_to_json(s).dump());
    ASSERT_EQ(back.pulses.size(), s.pulses.size());
    for (std::size_t i = 0; i < s.pulses.size(); ++i) {
      EXPECT_EQ(back.pulses[i].shape.breakpoints, s.pulses[i].shape.breakpoints);
      EXPECT_EQ(back.pulses[i].pulse.phase, s.pulses[i].pulse.phase);
      EXPECT_EQ(back.pulses[i].start_time, s.pulses[i].start_time);
    }
    EXPECT_EQ(back.residual_phases, s.residual_phases);
  }
}

TEST(ScheduleJson, RejectsInvalidSchedules) {
  const std::string base =
      R"({"dim":3,"residual_phases":[0,0,0],"pulses":[{"transition":[1,2],"area":1,)"
      R"("phase":0,"breakpoints":[[0,0],[1,1],[2,0]]}TAIL]})";
  const auto with = [&](const std::string& tail) {
    std::string s = base;
    s.replace(s.find("TAIL"), 4, tail);
    return parse_json(s, "s");
  };
  EXPECT_NO_THROW(schedule_from_json(with(""), "s"));
  const char* bad[] = {
      R"(,{"transition":[1,3],"area":1,"phase":0,"breakpoints":[]})",
      R"(,{"transition":[3,4],"area":1,"phase":0,"breakpoints":[]})",
      R"(,{"transition":[1,2],"area":1,"phase":0,"breakpoints":[],"start_time":1})",
      R"(,{"transition":[1,2],"area":1,"phase":0,"breakpoints":[[1,0],[0,1]]})",
      R"(,{"transition":[1,2],"area":1,"phase":0,"breakpoints":[[0,0]],"duration":3})",
      R"(,{"transition":[1,2],"area":1,"phase":0,"breakpoints":[],"color":"red"})",
  };
  for (const char* tail : bad) {
    EXPECT_THROW(schedule_from_json(with(tail), "s"), ValidationError) << tail;
  }
  auto j = with("");
  j["residual_phases"] = json::array({0, 0});
  EXPECT_THROW(schedule_from_json(j, "s"), ValidationError);
}

TEST(Csv, NumbersRoundTrip) {
  testing::Rng rng(3);
  std::uniform_real_distribution<double> u(-1e-20, 1e20);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(std::stod(fmt(x)), x);
  }
  EXPECT_EQ(fmt(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(fmt(std::nan("")), "nan");
}

TEST(Csv, WellTableLeavesNonTunnelingFieldsEmpty) {
  const std::vector<LevelRow> rows{
      {{1, constants::ev_to_joule(4.2), well::LevelKind::bound}, std::nullopt, std::nullopt},
      {{2, constants::ev_to_joule(42.0), well::LevelKind::tunneling}, 0.25, 1e-15}};
  std::istringstream in(well_csv(rows));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,E_eV,kind,P,tau_s");
  std::getline(in, line);
  EXPECT_EQ(line.substr(line.size() - 8), ",bound,,");
  std::getline(in, line);
  EXPECT_NE(line.find(",tunneling,0.25,1e-15"), std::string::npos);
}

TEST(Csv, FlattenedJsonQuotesText) {
  json j;
  j["a"]["b"] = 1.5;
  j["list"] = json::array({1, 2});
  j["note"] = "x, \"y\"";
  EXPECT_EQ(json_to_csv(j), "key,value\na.b,1.5\nlist[0],1\nlist[1],2\nnote,\"x, \"\"y\"\"\"\n");
}

TEST(CheckKeys, ReportsUnknownAndMissing) {
  const auto j = parse_json(R"({"a":1,"c":2})", "x");
  try {
    check_keys(j, {"a", "b"}, {"a"}, "ctx");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("c"), std::string::npos);
  }
  EXPECT_THROW(check_keys(j, {"a", "c"}, {"b"}, "ctx"), ValidationError);
  EXPECT_NO_THROW(check_keys(j, {"a", "c"}, {"a"}, "ctx"));
}

}  // namespace
}  // namespace qbind::io

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

// io.hpp: JSON and CSV interchange.
//
// Matrices use {"dim": n, "re": [[...]], "im": [[...]]}, row-major; "im"
// may be omitted for real matrices. Doubles are written in shortest
// round-trip form, so every emitted number re-parses bit-exactly.

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qbind/binding.hpp"
#include "qbind/constants.hpp"
#include "qbind/errors.hpp"
#include "qbind/matrix.hpp"
#include "qbind/propagation.hpp"
#include "qbind/pulse_synthesis.hpp"
#include "qbind/tunneling_well.hpp"

namespace qbind::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- parsing

inline json parse_json(std::string_view text, std::string_view ctx) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(ctx) + ": invalid JSON: " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

inline void require_object(const json& j, std::string_view ctx) {
  if (!j.is_object()) throw ValidationError(std::string(ctx) + ": expected a JSON object");
}

/// Rejects keys outside `allowed` and reports missing `required` ones.
inline void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                       std::initializer_list<std::string_view> required,
                       std::string_view ctx) {
  require_object(j, ctx);
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string list;
      for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      throw ValidationError(std::string(ctx) + ": unknown field '" + key +
                            "' (allowed: " + list + ")");
    }
  }
  for (auto r : required) {
    if (!j.contains(std::string(r))) {
      throw ValidationError(std::string(ctx) + ": missing field '" + std::string(r) + "'");
    }
  }
}

inline double as_number(const json& j, std::string_view ctx) {
  if (!j.is_number()) throw ValidationError(std::string(ctx) + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ValidationError(std::string(ctx) + ": not finite");
  return x;
}

inline double get_number(const json& j, std::string_view key, std::string_view ctx) {
  return as_number(j.at(std::string(key)), std::string(ctx) + "." + std::string(key));
}

inline double get_number_or(const json& j, std::string_view key, double fallback,
                            std::string_view ctx) {
  return j.contains(std::string(key)) ? get_number(j, key, ctx) : fallback;
}

inline std::string get_string(const json& j, std::string_view key, std::string_view ctx) {
  const auto& v = j.at(std::string(key));
  if (!v.is_string()) {
    throw ValidationError(std::string(ctx) + "." + std::string(key) + ": expected a string");
  }
  return v.get<std::string>();
}

inline std::vector<double> as_number_list(const json& j, std::string_view ctx) {
  if (!j.is_array()) throw ValidationError(std::string(ctx) + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_number(j[i], std::string(ctx) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// ---------------------------------------------------------------- matrices

inline json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  json out;
  out["dim"] = m.rows();
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

inline ComplexMatrix matrix_from_json(const json& j, std::string_view ctx) {
  check_keys(j, {"dim", "re", "im"}, {"dim", "re"}, ctx);
  const auto& jd = j.at("dim");
  if (!jd.is_number_integer() || jd.get<long long>() < 1) {
    throw ValidationError(std::string(ctx) + ".dim: expected a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(jd.get<long long>());
  const auto read_part = [&](const char* key) {
    Eigen::MatrixXd part = Eigen::MatrixXd::Zero(n, n);
    if (!j.contains(key)) return part;
    const std::string c = std::string(ctx) + "." + key;
    const auto& rows = j.at(key);
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
      throw ValidationError(c + ": expected " + std::to_string(n) + " rows");
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto row = as_number_list(rows[static_cast<std::size_t>(r)],
                                      c + "[" + std::to_string(r) + "]");
      if (static_cast<Eigen::Index>(row.size()) != n) {
        throw ValidationError(c + "[" + std::to_string(r) + "]: expected " +
                              std::to_string(n) + " entries");
      }
      for (Eigen::Index k = 0; k < n; ++k) part(r, k) = row[static_cast<std::size_t>(k)];
    }
    return part;
  };
  const Eigen::MatrixXd re = read_part("re");
  const Eigen::MatrixXd im = read_part("im");
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index k = 0; k < n; ++k) m(r, k) = cplx(re(r, k), im(r, k));
  }
  return m;
}

/// A vector as a plain array of reals or {"re": [...], "im": [...]}.
inline ComplexVector vector_from_json(const json& j, std::string_view ctx) {
  if (j.is_array()) {
    const auto re = as_number_list(j, ctx);
    ComplexVector v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t k = 0; k < re.size(); ++k) v(static_cast<Eigen::Index>(k)) = re[k];
    return v;
  }
  check_keys(j, {"re", "im"}, {"re"}, ctx);
  const auto re = as_number_list(j.at("re"), std::string(ctx) + ".re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = as_number_list(j.at("im"), std::string(ctx) + ".im");
  if (im.size() != re.size()) {
    throw ValidationError(std::string(ctx) + ": re and im lengths differ");
  }
  ComplexVector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t k = 0; k < re.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = cplx(re[k], im[k]);
  }
  return v;
}

inline json vector_to_json(const ComplexVector& v) {
  json re = json::array(), im = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    re.push_back(v(k).real());
    im.push_back(v(k).imag());
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline json real_list(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

// ---------------------------------------------------------------- reports

inline json report_to_json(const BindingEnergyReport& r) {
  json out;
  out["delta_u_be"] = r.delta_u_be;
  out["initial_energy"] = r.initial_energy;
  out["final_energy"] = r.final_energy;
  out["passive_state"] = matrix_to_json(r.passive_state.matrix());
  out["assignment"] = r.assignment;
  out["optimal_unitary"] = matrix_to_json(r.optimal_unitary.matrix());
  return out;
}

inline json constraints_to_json(const pulse::PulseConstraints& c) {
  return json{{"amplitude_max", c.amplitude_max}, {"amplitude_min", c.amplitude_min},
              {"slew_max", c.slew_max},           {"slew_min", c.slew_min},
              {"dipole", c.dipole}};
}

inline pulse::PulseConstraints constraints_from_json(const json& j, std::string_view ctx) {
  check_keys(j, {"amplitude_max", "amplitude_min", "slew_max", "slew_min", "dipole"},
             {"amplitude_max", "slew_max"}, ctx);
  pulse::PulseConstraints c;
  c.amplitude_max = get_number(j, "amplitude_max", ctx);
  c.amplitude_min = get_number_or(j, "amplitude_min", 0.0, ctx);
  c.slew_max = get_number(j, "slew_max", ctx);
  c.slew_min = get_number_or(j, "slew_min", -c.slew_max, ctx);
  c.dipole = get_number_or(j, "dipole", 1.0, ctx);
  c.validate();
  return c;
}

inline json schedule_to_json(const pulse::PulseSchedule& s) {
  json pulses = json::array();
  for (const auto& p : s.pulses) {
    json bps = json::array();
    for (const auto& [t, a] : p.shape.breakpoints) bps.push_back(json::array({t, a}));
    json jp;
    jp["transition"] = json::array({p.pulse.k, p.pulse.k + 1});
    jp["area"] = p.pulse.area;
    jp["phase"] = p.pulse.phase;
    jp["start_time"] = p.start_time;
    jp["duration"] = p.shape.duration;
    jp["dipole"] = p.dipole;
    jp["baseline"] = p.shape.baseline;
    jp["realized_area"] = p.shape.realized_area;
    jp["baseline_leakage"] = p.shape.baseline_leakage;
    jp["breakpoints"] = std::move(bps);
    pulses.push_back(std::move(jp));
  }
  json out;
  out["dim"] = s.dim;
  out["pulses"] = std::move(pulses);
  out["residual_phases"] = real_list(s.residual_phases);
  out["total_time"] = s.total_time;
  return out;
}

inline pulse::PulseSchedule schedule_from_json(const json& j, std::string_view ctx) {
  check_keys(j, {"dim", "pulses", "residual_phases", "total_time"},
             {"dim", "pulses", "residual_phases"}, ctx);
  const auto& jd = j.at("dim");
  if (!jd.is_number_integer() || jd.get<long long>() < 1) {
    throw ValidationError(std::string(ctx) + ".dim: expected a positive integer");
  }
  pulse::PulseSchedule s;
  s.dim = static_cast<std::size_t>(jd.get<long long>());
  const auto theta = as_number_list(j.at("residual_phases"),
                                    std::string(ctx) + ".residual_phases");
  if (theta.size() != s.dim) {
    throw ValidationError(std::string(ctx) + ".residual_phases: expected dim entries");
  }
  s.residual_phases = Eigen::Map<const RealVector>(theta.data(),
                                                   static_cast<Eigen::Index>(theta.size()));
  const auto& jp = j.at("pulses");
  if (!jp.is_array()) throw ValidationError(std::string(ctx) + ".pulses: expected an array");
  double t = 0.0;
  for (std::size_t i = 0; i < jp.size(); ++i) {
    const std::string c = std::string(ctx) + ".pulses[" + std::to_string(i) + "]";
    const auto& p = jp[i];
    check_keys(p,
               {"transition", "area", "phase", "start_time", "duration", "dipole",
                "baseline", "realized_area", "baseline_leakage", "breakpoints"},
               {"transition", "area", "phase", "breakpoints"}, c);
    const auto tr = as_number_list(p.at("transition"), c + ".transition");
    if (tr.size() != 2 || tr[0] < 1 || tr[1] != tr[0] + 1 ||
        tr[0] != std::floor(tr[0]) || tr[1] > static_cast<double>(s.dim)) {
      throw ValidationError(c + ".transition: expected nearest-neighbour levels [k, k+1] "
                                "within the dimension");
    }
    pulse::ScheduledPulse sp;
    sp.pulse = {static_cast<std::size_t>(tr[0]), get_number(p, "area", c),
                get_number(p, "phase", c)};
    sp.dipole = get_number_or(p, "dipole", 1.0, c);
    if (!(sp.dipole > 0.0)) throw ValidationError(c + ".dipole: must be positive");
    const auto& jb = p.at("breakpoints");
    if (!jb.is_array()) throw ValidationError(c + ".breakpoints: expected an array");
    for (std::size_t b = 0; b < jb.size(); ++b) {
      const auto pair = as_number_list(jb[b], c + ".breakpoints[" + std::to_string(b) + "]");
      if (pair.size() != 2) throw ValidationError(c + ".breakpoints: expected [t, A] pairs");
      if (!sp.shape.breakpoints.empty() && pair[0] < sp.shape.breakpoints.back().first) {
        throw ValidationError(c + ".breakpoints: times must not decrease");
      }
      sp.shape.breakpoints.emplace_back(pair[0], pair[1]);
    }
    sp.shape.baseline = get_number_or(p, "baseline",
                                      sp.shape.breakpoints.empty()
                                          ? 0.0
                                          : sp.shape.breakpoints.front().second,
                                      c);
    sp.shape.duration = sp.shape.breakpoints.empty() ? 0.0 : sp.shape.breakpoints.back().first;
    if (p.contains("duration") && get_number(p, "duration", c) != sp.shape.duration) {
      throw ValidationError(c + ".duration: must equal the last breakpoint time");
    }
    sp.shape.realized_area = pulse::envelope_area(sp.shape.breakpoints, sp.shape.baseline);
    sp.shape.baseline_leakage = sp.shape.baseline * sp.shape.duration;
    sp.start_time = get_number_or(p, "start_time", t, c);
    if (sp.start_time < t) throw ValidationError(c + ".start_time: pulses overlap");
    t = sp.start_time + sp.shape.duration;
    s.pulses.push_back(sp);
  }
  s.total_time = get_number_or(j, "total_time", t, ctx);
  if (s.total_time < t) {
    throw ValidationError(std::string(ctx) + ".total_time: shorter than the pulses");
  }
  return s;
}

// ---------------------------------------------------------------- CSV

/// Shortest decimal that round-trips; "inf"/"nan" for non-finite values.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

/// (time, amplitude, transition) at every breakpoint, absolute times.
inline std::string envelope_csv(const pulse::PulseSchedule& s, double time_offset = 0.0) {
  std::ostringstream os;
  os << "time,amplitude,transition\n";
  for (const auto& p : s.pulses) {
    const std::string id = std::to_string(p.pulse.k) + "-" + std::to_string(p.pulse.k + 1);
    for (const auto& [t, a] : p.shape.breakpoints) {
      os << fmt(time_offset + p.start_time + t) << ',' << fmt(a) << ',' << id << '\n';
    }
  }
  return os.str();
}

struct LevelRow {
  well::BoundState state;
  std::optional<double> probability;
  std::optional<double> tau;
};

/// n, E_eV, kind, P, tau_s; P and tau_s are empty outside the tunneling window.
inline std::string well_csv(const std::vector<LevelRow>& rows) {
  std::ostringstream os;
  os << "n,E_eV,kind,P,tau_s\n";
  for (const auto& r : rows) {
    os << r.state.n << ',' << fmt(constants::joule_to_ev(r.state.energy)) << ','
       << well::to_string(r.state.kind) << ',' << (r.probability ? fmt(*r.probability) : "")
       << ',' << (r.tau ? fmt(*r.tau) : "") << '\n';
  }
  return os.str();
}

/// t, U_energy, purity, p1..pd with populations in the computational basis.
inline std::string trajectory_csv(const prop::PropagationResult& r) {
  std::ostringstream os;
  os << "t,U_energy,purity";
  const std::size_t d = r.states.empty() ? 0 : r.states.front().dim();
  for (std::size_t k = 1; k <= d; ++k) os << ",p" << k;
  os << '\n';
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    os << fmt(r.times[i]) << ',' << fmt(r.energies[i]) << ',' << fmt(r.states[i].purity());
    const auto& m = r.states[i].matrix();
    for (Eigen::Index k = 0; k < m.rows(); ++k) os << ',' << fmt(m(k, k).real());
    os << '\n';
  }
  return os.str();
}

/// RFC 4180 quoting for fields containing separators or quotes.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

/// Flattens a JSON object into key,value lines (nested keys joined by '.').
inline std::string json_to_csv(const json& j) {
  std::ostringstream os;
  os << "key,value\n";
  const auto walk = [&](const auto& self, const json& node, const std::string& prefix) -> void {
    if (node.is_object()) {
      for (const auto& [k, v] : node.items()) {
        self(self, v, prefix.empty() ? k : prefix + "." + k);
      }
    } else if (node.is_array()) {
      for (std::size_t i = 0; i < node.size(); ++i) {
        self(self, node[i], prefix + "[" + std::to_string(i) + "]");
      }
    } else if (node.is_number_float()) {
      os << prefix << ',' << fmt(node.get<double>()) << '\n';
    } else if (node.is_string()) {
      os << prefix << ',' << csv_field(node.get<std::string>()) << '\n';
    } else {
      os << prefix << ',' << node.dump() << '\n';
    }
  };
  walk(walk, j, "");
  return os.str();
}

}  // namespace qbind::io

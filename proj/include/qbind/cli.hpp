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

// cli.hpp: the qbind command line: problem files in, reports out.
//
//   qbind <binding|jc|well|synth|simulate> --in FILE [--out DIR]
//         [--tol X] [--format json|csv] [--seed N]
//
// A problem file is {"mode": <subcommand>, "payload": {...}} with an
// optional "description". The main report goes to stdout in the chosen
// format; with --out, it and every auxiliary table are written to DIR.
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbind/binding.hpp"
#include "qbind/constants.hpp"
#include "qbind/errors.hpp"
#include "qbind/io.hpp"
#include "qbind/jaynes_cummings.hpp"
#include "qbind/matrix.hpp"
#include "qbind/operators.hpp"
#include "qbind/propagation.hpp"
#include "qbind/pulse_synthesis.hpp"
#include "qbind/tunneling_well.hpp"

namespace qbind::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr double kDefaultTol = 1e-10;

struct Options {
  std::string mode;
  std::string in;
  std::string out;
  std::string format = "json";
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
};

/// Output of one subcommand: the main report plus named auxiliary files.
struct Outcome {
  io::json report;
  std::string report_csv;                   // CSV rendering of the report
  std::map<std::string, std::string> files;  // file name -> content
};

namespace detail {

using io::json;

inline HermitianOperator hermitian(const json& j, std::string_view ctx, EnergyUnit unit,
                                   double tol) {
  return HermitianOperator(io::matrix_from_json(j, ctx), unit, tol);
}

inline Tolerances tolerances(double tol) { return Tolerances{tol, tol, tol}; }

inline EnergyUnit energy_unit(const json& payload) {
  if (!payload.contains("unit")) return EnergyUnit::natural;
  const auto u = io::get_string(payload, "unit", "payload");
  if (u == "natural") return EnergyUnit::natural;
  if (u == "joule") return EnergyUnit::joule;
  throw ValidationError("payload.unit: expected 'natural' or 'joule', got '" + u + "'");
}

inline double beta_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") {
    return std::numeric_limits<double>::infinity();
  }
  return io::as_number(j, "payload.beta");
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// R's diagonal divided out.
inline ComplexMatrix haar_unitary(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  const auto k = static_cast<Eigen::Index>(d);
  ComplexMatrix z(k, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index r = 0; r < k; ++r) z(r, c) = cplx(n(rng), n(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < k; ++c) {
    const double a = std::abs(r(c, c));
    if (a > 0.0) q.col(c) *= r(c, c) / a;
  }
  return q;
}

inline Outcome run_binding(const json& p, const Options& o) {
  io::check_keys(p, {"h_free", "h_a", "h_b", "h_int", "rho0", "psi0", "beta", "unit"}, {},
                 "payload");
  const EnergyUnit unit = energy_unit(p);
  HermitianOperator h_free;
  if (p.contains("h_free")) {
    if (p.contains("h_a") || p.contains("h_b")) {
      throw ValidationError("payload: give either h_free or h_a and h_b, not both");
    }
    h_free = hermitian(p.at("h_free"), "payload.h_free", unit, o.tol);
  } else if (p.contains("h_a") && p.contains("h_b")) {
    h_free = free_hamiltonian(hermitian(p.at("h_a"), "payload.h_a", unit, o.tol),
                              hermitian(p.at("h_b"), "payload.h_b", unit, o.tol));
  } else {
    throw ValidationError("payload: need h_free, or both h_a and h_b");
  }
  const auto d = static_cast<Eigen::Index>(h_free.dim());
  const HermitianOperator h_int =
      p.contains("h_int") ? hermitian(p.at("h_int"), "payload.h_int", unit, o.tol)
                          : HermitianOperator(ComplexMatrix::Zero(d, d), unit);

  const int states = static_cast<int>(p.contains("rho0")) +
                     static_cast<int>(p.contains("psi0")) + static_cast<int>(p.contains("beta"));
  if (states != 1) {
    throw ValidationError("payload: give exactly one of rho0, psi0, beta");
  }
  DensityMatrix rho0;
  if (p.contains("rho0")) {
    rho0 = DensityMatrix(io::matrix_from_json(p.at("rho0"), "payload.rho0"), tolerances(o.tol));
  } else if (p.contains("psi0")) {
    rho0 = DensityMatrix::pure(io::vector_from_json(p.at("psi0"), "payload.psi0"));
  } else {
    rho0 = thermal_state(h_free + h_int, beta_from_json(p.at("beta")));
  }
  if (rho0.dim() != h_free.dim()) {
    throw ValidationError("payload: initial state and Hamiltonian dimensions differ");
  }
  const auto report = binding_energy(rho0, h_free, h_int);
  Outcome out;
  out.report = io::report_to_json(report);
  out.report_csv = io::json_to_csv(out.report);
  return out;
}

inline Outcome run_jc(const json& p, const Options&) {
  io::check_keys(p, {"omega_a", "omega_b", "g", "initial", "path_length", "velocity"},
                 {"omega_a", "omega_b", "g"}, "payload");
  const jc::JCParams params{io::get_number(p, "omega_a", "payload"),
                            io::get_number(p, "omega_b", "payload"),
                            io::get_number(p, "g", "payload")};
  params.validate();
  const auto label =
      jc::parse_label(p.contains("initial") ? io::get_string(p, "initial", "payload") : "-");
  const auto basis = jc::dressed_states(params);

  json dressed = json::array();
  for (const auto& s : basis.states) {
    dressed.push_back(json{{"label", std::string(jc::to_string(s.label))},
                           {"energy", s.energy},
                           {"vector", io::vector_to_json(s.vector)}});
  }
  Outcome out;
  out.report["params"] = json{{"omega_a", params.omega_a},
                              {"omega_b", params.omega_b},
                              {"g", params.g}};
  out.report["initial"] = std::string(jc::to_string(label));
  out.report["phi"] = basis.phi;
  out.report["tan_half_angle_comparison"] = jc::tan_half_angle_mixing(params);
  out.report["dressed_states"] = std::move(dressed);
  out.report["binding"] = io::report_to_json(jc::jc_binding_energy(params, label));
  if (p.contains("path_length") || p.contains("velocity")) {
    const auto f = jc::flight_phase(params, io::get_number(p, "path_length", "payload"),
                                    io::get_number(p, "velocity", "payload"));
    out.report["flight"] = json{{"tau", f.tau}, {"phi_tau", f.phi_tau},
                                {"dissociates", f.dissociates}};
  }
  out.report_csv = io::json_to_csv(out.report);
  return out;
}

inline Outcome run_well(const json& p, const Options&) {
  io::check_keys(p,
                 {"a", "b", "v0", "v0_prime", "mass", "length_unit", "energy_unit", "levels",
                  "populations", "attempt_length", "grid_points", "constraints"},
                 {"a", "b", "v0", "v0_prime"}, "payload");
  const std::string lu = p.contains("length_unit") ? io::get_string(p, "length_unit", "payload")
                                                   : "m";
  const std::string eu = p.contains("energy_unit") ? io::get_string(p, "energy_unit", "payload")
                                                   : "eV";
  double to_m = 1.0, to_j = 1.0;
  if (lu == "nm") {
    to_m = constants::meter_per_nm;
  } else if (lu != "m") {
    throw ValidationError("payload.length_unit: expected 'm' or 'nm'");
  }
  if (eu == "eV") {
    to_j = constants::joule_per_ev;
  } else if (eu != "J") {
    throw ValidationError("payload.energy_unit: expected 'eV' or 'J'");
  }
  well::WellGeometry g;
  g.a = io::get_number(p, "a", "payload") * to_m;
  g.b = io::get_number(p, "b", "payload") * to_m;
  g.v0 = io::get_number(p, "v0", "payload") * to_j;
  g.v0_prime = io::get_number(p, "v0_prime", "payload") * to_j;
  g.mass = io::get_number_or(p, "mass", constants::electron_mass, "payload");
  g.validate();

  well::AttemptLength attempt = well::AttemptLength::barrier_width;
  if (p.contains("attempt_length")) {
    const auto s = io::get_string(p, "attempt_length", "payload");
    if (s == "well_width") {
      attempt = well::AttemptLength::well_width;
    } else if (s != "barrier_width") {
      throw ValidationError("payload.attempt_length: expected 'barrier_width' or 'well_width'");
    }
  }
  well::RootScanOptions scan;
  if (p.contains("grid_points")) {
    const auto& jg = p.at("grid_points");
    if (!jg.is_number_integer() || jg.get<long long>() < 2) {
      throw ValidationError("payload.grid_points: expected an integer >= 2");
    }
    scan.grid_points = static_cast<std::size_t>(jg.get<long long>());
  }

  const auto solved = well::bound_state_energies(g.a, g.v0, g.mass, scan);
  std::vector<double> energies = solved;
  if (p.contains("levels")) {
    energies = io::as_number_list(p.at("levels"), "payload.levels");
    for (auto& e : energies) e *= to_j;
  }
  const auto states = well::classify_levels(g, energies);

  std::vector<io::LevelRow> rows;
  json levels = json::array();
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& s : states) {
    io::LevelRow row{s, std::nullopt, std::nullopt};
    json jl;
    jl["n"] = s.n;
    jl["energy_eV"] = constants::joule_to_ev(s.energy);
    jl["kind"] = std::string(well::to_string(s.kind));
    ++counts[static_cast<int>(s.kind)];
    if (s.kind == well::LevelKind::tunneling) {
      const double prob = well::wkb_transmission(g, s.energy);
      const auto est = well::tunneling_time(g, s.energy, prob, attempt);
      row.probability = prob;
      row.tau = est.tunneling_time;
      jl["probability"] = prob;
      jl["crossing_time_s"] = est.crossing_time;
      jl["tunneling_time_s"] = est.infinite ? json(nullptr) : json(est.tunneling_time);
      jl["infinite_time"] = est.infinite;
    }
    rows.push_back(row);
    levels.push_back(std::move(jl));
  }

  Outcome out;
  json solved_ev = json::array();
  for (double e : solved) solved_ev.push_back(constants::joule_to_ev(e));
  out.report["geometry"] = json{{"a_m", g.a},
                                {"b_m", g.b},
                                {"v0_eV", constants::joule_to_ev(g.v0)},
                                {"v0_prime_eV", constants::joule_to_ev(g.v0_prime)},
                                {"mass_kg", g.mass}};
  out.report["attempt_length"] =
      attempt == well::AttemptLength::barrier_width ? "barrier_width" : "well_width";
  out.report["levels_source"] = p.contains("levels") ? "given" : "solved";
  out.report["solved_levels_eV"] = std::move(solved_ev);
  out.report["levels"] = std::move(levels);
  out.report["counts"] = json{{"bound", counts[0]}, {"tunneling", counts[1]},
                              {"unbounded", counts[2]}};

  if (p.contains("populations")) {
    const auto pops = io::as_number_list(p.at("populations"), "payload.populations");
    const auto plan = well::excitation_plan(pops, states);
    out.report["excitation_plan"] =
        json{{"source_levels", plan.source_levels},
             {"target_levels", plan.target_levels},
             {"multi_step", plan.multi_step},
             {"unitary", io::matrix_to_json(plan.unitary.matrix())}};
    json synth;
    synth["mode"] = "synth";
    synth["description"] = "excitation unitary from the well plan";
    synth["payload"]["target"] = io::matrix_to_json(plan.unitary.matrix());
    if (p.contains("constraints")) synth["payload"]["constraints"] = p.at("constraints");
    out.files["excitation_synth.json"] = synth.dump(2) + "\n";
  } else if (p.contains("constraints")) {
    throw ValidationError("payload.constraints: only used together with populations");
  }
  out.report_csv = io::well_csv(rows);
  out.files["well_levels.csv"] = out.report_csv;
  return out;
}

inline std::vector<pulse::PulseConstraints> constraints_list(const json& p) {
  if (!p.contains("constraints")) return {pulse::PulseConstraints{}};
  const auto& c = p.at("constraints");
  if (c.is_array()) {
    std::vector<pulse::PulseConstraints> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
      out.push_back(io::constraints_from_json(
          c[i], "payload.constraints[" + std::to_string(i) + "]"));
    }
    return out;
  }
  return {io::constraints_from_json(c, "payload.constraints")};
}

inline Outcome run_synth(const json& p, const Options& o) {
  io::check_keys(p, {"target", "random_unitary", "constraints"}, {}, "payload");
  ComplexMatrix target;
  if (p.contains("target") == p.contains("random_unitary")) {
    throw ValidationError("payload: give exactly one of target, random_unitary");
  }
  if (p.contains("target")) {
    target = io::matrix_from_json(p.at("target"), "payload.target");
  } else {
    const auto& jd = p.at("random_unitary");
    if (!jd.is_number_integer() || jd.get<long long>() < 1 || jd.get<long long>() > 64) {
      throw ValidationError("payload.random_unitary: expected a dimension in [1, 64]");
    }
    target = haar_unitary(static_cast<std::size_t>(jd.get<long long>()), o.seed);
  }
  const UnitaryOperator u(target, o.tol);
  const auto s = pulse::schedule(u, constraints_list(p));

  Outcome out;
  out.report = io::schedule_to_json(s);
  out.report_csv = io::envelope_csv(s);
  out.files["schedule.json"] = out.report.dump(2) + "\n";
  out.files["envelope.csv"] = out.report_csv;
  json sim;
  sim["mode"] = "simulate";
  sim["description"] = "replays the synthesized schedule";
  sim["payload"]["schedule"] = out.report;
  sim["payload"]["target"] = io::matrix_to_json(target);
  out.files["simulate.json"] = sim.dump(2) + "\n";
  return out;
}

inline Outcome run_simulate(const json& p, const Options& o) {
  io::check_keys(p,
                 {"schedule", "target", "rho0", "h_free", "steps_per_segment",
                  "convergence_tol", "residual_duration", "sample_stride"},
                 {"schedule"}, "payload");
  const auto s = io::schedule_from_json(p.at("schedule"), "payload.schedule");
  const auto d = static_cast<Eigen::Index>(s.dim);
  const auto positive_int = [&](const char* key, long long fallback) {
    if (!p.contains(key)) return fallback;
    const auto& j = p.at(key);
    if (!j.is_number_integer() || j.get<long long>() < 1) {
      throw ValidationError(std::string("payload.") + key + ": expected a positive integer");
    }
    return j.get<long long>();
  };
  const auto steps = static_cast<std::size_t>(positive_int("steps_per_segment", 200));
  const auto stride = static_cast<std::size_t>(positive_int("sample_stride", 1));
  const double conv = io::get_number_or(p, "convergence_tol", 1e-9, "payload");
  const double residual_duration = io::get_number_or(p, "residual_duration", 0.0, "payload");
  if (!(conv > 0.0)) throw ValidationError("payload.convergence_tol: must be positive");

  const auto drive = prop::schedule_drive(s, residual_duration);
  const bool trivial = !(drive.t_end > 0.0);
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  std::size_t per_segment = 0;
  double last_change = 0.0;
  if (!trivial) {
    const auto a = prop::evolve_adaptive(drive.hamiltonian, drive.breakpoints, steps, conv);
    u = a.unitary.matrix();
    per_segment = a.per_segment;
    last_change = a.last_change;
  }
  // Without the free-evolution segment the pulses realize target · R.
  const ComplexMatrix accounted =
      residual_duration > 0.0 ? u : ComplexMatrix(u * s.residual_unitary().adjoint());

  Outcome out;
  out.report["dim"] = s.dim;
  out.report["pulses"] = s.pulses.size();
  out.report["total_time"] = drive.t_end;
  out.report["residual_phases_simulated"] = residual_duration > 0.0;
  out.report["steps_per_segment"] = per_segment;
  out.report["last_refinement_change"] = last_change;
  out.report["unitarity_residual"] = unitarity_residual(u);
  if (p.contains("target")) {
    const UnitaryOperator target(io::matrix_from_json(p.at("target"), "payload.target"), o.tol);
    if (target.dim() != s.dim) {
      throw ValidationError("payload.target: dimension differs from the schedule");
    }
    out.report["fidelity"] = prop::gate_fidelity(target.matrix(), accounted);
    out.report["fidelity_pulses_only"] = prop::gate_fidelity(target.matrix(), u);
    out.report["max_deviation"] = max_abs(accounted - target.matrix());
  }
  out.report["final_unitary"] = io::matrix_to_json(accounted);

  std::optional<HermitianOperator> h_free;
  if (p.contains("h_free")) {
    h_free = hermitian(p.at("h_free"), "payload.h_free", EnergyUnit::natural, o.tol);
    if (h_free->dim() != s.dim) {
      throw ValidationError("payload.h_free: dimension differs from the schedule");
    }
  }
  if (p.contains("rho0")) {
    const DensityMatrix rho0(io::matrix_from_json(p.at("rho0"), "payload.rho0"),
                             tolerances(o.tol));
    if (rho0.dim() != s.dim) {
      throw ValidationError("payload.rho0: dimension differs from the schedule");
    }
    prop::PropagationResult r;
    if (trivial) {
      r.times = {0.0};
      r.states = {rho0};
      r.energies = {h_free ? (h_free->matrix() * rho0.matrix()).trace().real() : 0.0};
      r.final_unitary = UnitaryOperator::identity(s.dim);
    } else {
      prop::EvolveOptions eo;
      eo.sample_stride = stride;
      if (h_free) {
        const ComplexMatrix hf = h_free->matrix();
        eo.energy_observable = [hf](double) { return hf; };
      }
      r = prop::evolve_density(rho0, drive.hamiltonian,
                               prop::TimeGrid::subdivided(drive.breakpoints, per_segment), eo);
    }
    const DensityMatrix final_state =
        residual_duration > 0.0
            ? r.states.back()
            : r.states.back().transformed(UnitaryOperator(s.residual_unitary().adjoint()));
    out.report["final_state"] = io::matrix_to_json(final_state.matrix());
    if (h_free) {
      const auto pr = prop::verify_passive(final_state, *h_free);
      out.report["passivity"] = json{{"passive", pr.passive},
                                     {"commutator_norm", pr.commutator_norm},
                                     {"diagnostic", pr.diagnostic}};
    }
    out.files["trajectory.csv"] = io::trajectory_csv(r);
  }
  out.report_csv = io::json_to_csv(out.report);
  return out;
}

inline Outcome dispatch(const Options& o) {
  const json problem = io::parse_json(io::read_file(o.in), o.in);
  io::check_keys(problem, {"mode", "payload", "description"}, {"mode", "payload"}, o.in);
  const auto mode = io::get_string(problem, "mode", o.in);
  if (mode != o.mode) {
    throw ValidationError(o.in + ": problem file is for '" + mode + "', not '" + o.mode + "'");
  }
  const auto& payload = problem.at("payload");
  io::require_object(payload, "payload");
  if (mode == "binding") return run_binding(payload, o);
  if (mode == "jc") return run_jc(payload, o);
  if (mode == "well") return run_well(payload, o);
  if (mode == "synth") return run_synth(payload, o);
  return run_simulate(payload, o);
}

}  // namespace detail

/// Default validation tolerance, overridable through QBIND_TOL.
inline double default_tolerance() {
  const char* env = std::getenv("QBIND_TOL");
  if (env == nullptr || *env == '\0') return kDefaultTol;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string("QBIND_TOL: expected a positive number, got '") + env +
                          "'");
  }
  return v;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  try {
    o.tol = default_tolerance();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  CLI::App app{"qbind: binding energy, pulse synthesis and propagation"};
  app.require_subcommand(1);
  const std::pair<const char*, const char*> modes[] = {
      {"binding", "binding energy and passive state of a bipartite system"},
      {"jc", "Jaynes-Cummings dressed states and binding energy"},
      {"well", "step-well levels, WKB tunneling and excitation plan"},
      {"synth", "pulse schedule for a target unitary"},
      {"simulate", "propagate a pulse schedule"}};
  for (const auto& [name, help] : modes) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--in", o.in, "problem file (JSON)")->required();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--tol", o.tol, "input validation tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", o.format, "report format on stdout")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", o.seed, "seed for randomized inputs");
    sub->callback([&o, name = std::string(name)] { o.mode = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    const Outcome r = detail::dispatch(o);
    const std::string report =
        o.format == "csv" ? r.report_csv : r.report.dump(2) + "\n";
    out << report;
    if (!o.out.empty()) {
      std::filesystem::create_directories(o.out);
      const auto path = [&](const std::string& f) {
        return (std::filesystem::path(o.out) / f).string();
      };
      io::write_file(path(o.mode + "_report." + o.format), report);
      for (const auto& [name, content] : r.files) io::write_file(path(name), content);
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace qbind::cli

#include "ftnm/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ftnm/fault_expansion.hpp"
#include "ftnm/threshold_engine.hpp"
#include "ftnm/version.hpp"

namespace ftnm {

std::string format_double(double v) {
  char buf[40];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool Report::all_passed() const {
  for (const Verdict& v : verdicts)
    if (!v.pass) return false;
  return true;
}

namespace {

std::string csv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

}  // namespace

std::string Report::render(ReportFormat format) const {
  if (format == ReportFormat::Csv) {
    std::ostringstream out;
    out << "# ftnm " << command << "\n";
    out << "# tool_version: " << kToolVersion << "\n";
    out << "# schema_version: " << kSchemaVersion << "\n";
    out << "# seed: " << seed << "\n";
    out << "# config: " << config_echo.dump() << "\n";
    for (const auto& [key, value] : extras) out << "# " << key << ": " << value << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << (i ? "," : "") << columns[i] << (i + 1 == columns.size() ? "\n" : "");
    for (const Json& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << csv_cell(row[i]) << (i + 1 == row.size() ? "\n" : "");
    }
    if (!verdicts.empty()) {
      out << "# verdicts\n";
      out << "name,pass,detail\n";
      for (const Verdict& v : verdicts)
        out << v.name << "," << (v.pass ? "pass" : "fail") << "," << v.detail << "\n";
    }
    return out.str();
  }

  Json j;
  j["command"] = command;
  j["tool_version"] = kToolVersion;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = seed;
  j["config"] = config_echo;
  Json ex = Json::object();
  for (const auto& [key, value] : extras) ex[key] = value;
  j["extras"] = ex;
  j["columns"] = columns;
  j["rows"] = rows;
  Json vs = Json::array();
  for (const Verdict& v : verdicts)
    vs.push_back(Json{{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  j["verdicts"] = vs;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Config parsing helpers

namespace {

const Json* find(const Json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const Json& require(const Json& j, const char* key) {
  const Json* v = find(j, key);
  if (!v) throw CliConfigError(std::string("missing required parameter '") + key + "'");
  return *v;
}

double as_double(const Json& v, const char* name) {
  if (!v.is_number()) throw CliConfigError(std::string("parameter '") + name + "' must be a number");
  return v.get<double>();
}

int as_int(const Json& v, const char* name) {
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw CliConfigError(std::string("parameter '") + name + "' must be an integer");
  return v.get<int>();
}

std::string as_string(const Json& v, const char* name) {
  if (!v.is_string()) throw CliConfigError(std::string("parameter '") + name + "' must be a string");
  return v.get<std::string>();
}

bool as_bool(const Json& v, const char* name) {
  if (!v.is_boolean()) throw CliConfigError(std::string("parameter '") + name + "' must be a boolean");
  return v.get<bool>();
}

double get_double(const Json& j, const char* key, double fallback) {
  const Json* v = find(j, key);
  return v ? as_double(*v, key) : fallback;
}

int get_int(const Json& j, const char* key, int fallback) {
  const Json* v = find(j, key);
  return v ? as_int(*v, key) : fallback;
}

bool get_bool(const Json& j, const char* key, bool fallback) {
  const Json* v = find(j, key);
  return v ? as_bool(*v, key) : fallback;
}

std::string get_string(const Json& j, const char* key, const std::string& fallback) {
  const Json* v = find(j, key);
  return v ? as_string(*v, key) : fallback;
}

Complex parse_entry(const Json& v, const char* name) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return Complex(v[0].get<double>(), v[1].get<double>());
  throw CliConfigError(std::string("parameter '") + name +
                       "' entries must be numbers or [re, im] pairs");
}

Matrix parse_matrix(const Json& v, const char* name) {
  if (!v.is_array() || v.empty())
    throw CliConfigError(std::string("parameter '") + name + "' must be a non-empty matrix");
  const std::size_t n = v.size();
  Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!v[r].is_array() || v[r].size() != n)
      throw CliConfigError(std::string("parameter '") + name + "' must be a square matrix");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = parse_entry(v[r][c], name);
  }
  return m;
}

int parse_pauli(const Json& v) {
  if (v.is_number_integer()) {
    const int k = v.get<int>();
    if (k >= 1 && k <= 3) return k;
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "x" || s == "X") return 1;
    if (s == "y" || s == "Y") return 2;
    if (s == "z" || s == "Z") return 3;
  }
  throw CliConfigError("parameter 'pauli' must be x, y, z or 1, 2, 3");
}

BaseRule parse_base_rule(const Json& j) {
  const std::string rule = get_string(j, "base_rule", "location-product");
  if (rule == "location-product") return BaseRule::LocationProduct;
  if (rule == "cluster") return BaseRule::Cluster;
  throw CliConfigError("parameter 'base_rule' must be 'location-product' or 'cluster'");
}

ThresholdParams threshold_params_from(const Json& p) {
  ThresholdParams tp;
  tp.locations_per_rectangle = as_int(require(p, "locations_per_rectangle"),
                                      "locations_per_rectangle");
  tp.eta = get_double(p, "eta", 0.0);
  tp.base_locations = get_int(p, "base_locations", 1);
  tp.epsilon_target = get_double(p, "epsilon_target", 1e-6);
  return tp;
}

}  // namespace

SystemBathModel model_from_json(const Json& j) {
  if (!j.is_object()) throw CliConfigError("parameter 'model' must be an object");
  const int n_qubits = get_int(j, "n_system_qubits", 1);
  const int bath_dim = as_int(require(j, "bath_dim"), "bath_dim");

  std::vector<CouplingTerm> terms;
  const Json& raw_terms = require(j, "coupling_terms");
  if (!raw_terms.is_array() || raw_terms.empty())
    throw CliConfigError("parameter 'coupling_terms' must be a non-empty array");
  for (const Json& t : raw_terms) {
    CouplingTerm term;
    term.qubit = get_int(t, "qubit", 0);
    term.pauli = parse_pauli(require(t, "pauli"));
    term.bath_op = parse_matrix(require(t, "bath_op"), "bath_op");
    terms.push_back(std::move(term));
  }

  const int sys_dim = 1 << n_qubits;
  Matrix hs = find(j, "system_hamiltonian")
                  ? parse_matrix(*find(j, "system_hamiltonian"), "system_hamiltonian")
                  : Matrix(Matrix::Zero(sys_dim, sys_dim));
  Matrix hb = find(j, "bath_hamiltonian")
                  ? parse_matrix(*find(j, "bath_hamiltonian"), "bath_hamiltonian")
                  : Matrix(Matrix::Zero(bath_dim, bath_dim));
  const double t0 = get_double(j, "t0", 1.0);

  double lambda0;
  if (find(j, "lambda0")) {
    lambda0 = as_double(*find(j, "lambda0"), "lambda0");
  } else {
    // Default to the realized per-qubit width maximum.
    SystemBathModel probe;
    probe.n_system_qubits = n_qubits;
    probe.bath_dim = bath_dim;
    probe.coupling_terms = terms;
    lambda0 = 0.0;
    for (int q = 0; q < n_qubits; ++q) {
      const Matrix hq = qubit_coupling(probe, q);
      if (hq.rows() != 0) lambda0 = std::max(lambda0, spectral_width(hq).delta);
    }
  }

  return make_system_bath_model(n_qubits, bath_dim, std::move(terms), std::move(hs),
                                std::move(hb), t0, lambda0);
}

Json layout_to_json(const CircuitLayout& layout) {
  Json j;
  j["base_locations"] = layout.base_locations;
  j["level"] = layout.level;
  j["qubits_per_block"] = layout.code.qubits_per_block;
  j["locations_per_rectangle"] = layout.code.locations_per_rectangle;
  j["corrects"] = layout.code.corrects;
  j["spread"] = layout.code.spread;
  return j;
}

CircuitLayout layout_from_json(const Json& j) {
  if (!j.is_object()) throw CliConfigError("parameter 'layout' must be an object");
  const CodeModel code = make_code_model(
      as_int(require(j, "qubits_per_block"), "qubits_per_block"),
      as_int(require(j, "locations_per_rectangle"), "locations_per_rectangle"),
      get_int(j, "corrects", 2), get_int(j, "spread", 1));
  return build_concatenation(get_int(j, "base_locations", 1),
                             as_int(require(j, "level"), "level"), code);
}

Json fault_set_to_json(const FaultSet& faults) {
  Json j = Json::array();
  for (std::uint64_t id : faults.faulty_leaves) j.push_back(id);
  return j;
}

std::vector<std::uint64_t> fault_ids_from_json(const Json& j) {
  if (!j.is_array()) throw CliConfigError("parameter 'faults' must be an array of leaf ids");
  std::vector<std::uint64_t> ids;
  for (const Json& v : j) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
      throw CliConfigError("parameter 'faults' entries must be nonnegative integers");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
      throw CliConfigError("parameter 'faults' entries must be nonnegative integers");
    ids.push_back(v.get<std::uint64_t>());
  }
  return ids;
}

std::vector<std::pair<double, double>> read_spectral_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliConfigError("cannot open spectral density file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw CliConfigError("spectral density file is empty: " + path);
  auto strip = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    return s;
  };
  if (strip(line) != "omega,J")
    throw CliConfigError("spectral density file must start with header 'omega,J': " + path);
  std::vector<std::pair<double, double>> table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw CliConfigError("malformed spectral density row at line " + std::to_string(line_no));
    try {
      table.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw CliConfigError("malformed spectral density row at line " + std::to_string(line_no));
    }
  }
  return table;
}

SpectralDensity spectral_density_from_json(const Json& j) {
  if (!j.is_object()) throw CliConfigError("parameter 'spectral_density' must be an object");
  const std::string kind = as_string(require(j, "kind"), "kind");
  std::optional<double> beta;
  if (find(j, "beta_eff")) beta = as_double(*find(j, "beta_eff"), "beta_eff");

  if (kind == "ohmic")
    return make_ohmic(as_double(require(j, "alpha"), "alpha"),
                      as_double(require(j, "omega_c"), "omega_c"), beta);
  if (kind == "tabulated") {
    std::vector<std::pair<double, double>> table;
    if (find(j, "csv_path")) {
      table = read_spectral_csv(as_string(*find(j, "csv_path"), "csv_path"));
    } else {
      const Json& rows = require(j, "table");
      if (!rows.is_array()) throw CliConfigError("parameter 'table' must be an array");
      for (const Json& row : rows) {
        if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
          throw CliConfigError("parameter 'table' entries must be [omega, J] pairs");
        table.emplace_back(row[0].get<double>(), row[1].get<double>());
      }
    }
    return make_tabulated(std::move(table), beta);
  }
  throw CliConfigError("parameter 'kind' must be 'ohmic' or 'tabulated'");
}

// ---------------------------------------------------------------------------
// Command handlers

namespace {

void handle_spectral_width(const Json& p, std::uint64_t seed, Report& rep) {
  std::vector<Matrix> samples;
  if (find(p, "matrix")) {
    samples.push_back(parse_matrix(*find(p, "matrix"), "matrix"));
  } else if (find(p, "random_dim")) {
    const int dim = as_int(*find(p, "random_dim"), "random_dim");
    const int count = get_int(p, "count", 1);
    if (count < 1) throw CliConfigError("parameter 'count' must be >= 1");
    Rng root(seed);
    for (int i = 0; i < count; ++i) {
      Rng rng = root.substream(static_cast<std::uint64_t>(i));
      samples.push_back(random_hermitian(rng, dim));
    }
  } else {
    throw CliConfigError("missing required parameter 'matrix' (or 'random_dim')");
  }

  const int shift_scan = get_int(p, "shift_scan", 100);
  rep.columns = {"sample", "mu_min", "mu_max", "delta", "alpha_opt"};
  bool scan_ok = true;
  double worst_gap = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const SpectrumSummary s = spectral_width(samples[i]);
    rep.rows.push_back(Json::array({i, s.mu_min, s.mu_max, s.delta, s.alpha_opt}));
    if (shift_scan > 1) {
      const double span = 2.0 * std::max(s.delta, 1.0);
      for (int k = 0; k < shift_scan; ++k) {
        const double shift =
            s.alpha_opt - span + 2.0 * span * static_cast<double>(k) / (shift_scan - 1);
        const double norm = op_norm(samples[i] +
                                    shift * Matrix::Identity(samples[i].rows(), samples[i].cols()));
        worst_gap = std::min(worst_gap, norm - s.delta);
        if (norm < s.delta - 1e-10) scan_ok = false;
      }
    }
  }
  if (shift_scan > 1)
    rep.verdicts.push_back({"shift-minimality", scan_ok,
                            "no scanned shift beats delta; worst slack " +
                                format_double(worst_gap)});
}

SystemBathModel builtin_pauli_zz_model() {
  std::vector<CouplingTerm> terms;
  terms.push_back({0, 3, pauli(3)});
  return make_system_bath_model(1, 2, std::move(terms), Matrix::Zero(2, 2), Matrix::Zero(2, 2),
                                1.0, 1.0);
}

void handle_fidelity(const Json& p, std::uint64_t seed, Report& rep) {
  const double t = as_double(require(p, "t"), "t");
  const int samples = get_int(p, "samples", 1000);

  std::vector<SystemBathModel> models;
  if (find(p, "model")) {
    const Json& m = *find(p, "model");
    if (m.is_string() && m.get<std::string>() == "pauli-zz")
      models.push_back(builtin_pauli_zz_model());
    else
      models.push_back(model_from_json(m));
  } else if (find(p, "random_models")) {
    const int count = as_int(*find(p, "random_models"), "random_models");
    const int bath_dim = get_int(p, "bath_dim", 4);
    Rng root(seed ^ 0x5eedf00dULL);
    for (int i = 0; i < count; ++i) {
      Rng rng = root.substream(static_cast<std::uint64_t>(i));
      SystemBathModel model = random_model(rng, 1, bath_dim, 1.0, /*zero_internal=*/true);
      // Normalize to unit spectral width so `t` is the decay angle delta*t
      // for every sampled model.
      const double width = spectral_width(full_coupling(model)).delta;
      std::vector<CouplingTerm> scaled = model.coupling_terms;
      for (CouplingTerm& term : scaled) term.bath_op /= width;
      model = make_system_bath_model(model.n_system_qubits, model.bath_dim, std::move(scaled),
                                     model.system_hamiltonian, model.bath_hamiltonian,
                                     model.t0, 1.0 + 1e-12);
      models.push_back(std::move(model));
    }
  } else {
    throw CliConfigError("missing required parameter 'model' (or 'random_models')");
  }

  rep.columns = {"model", "delta", "analytic_floor", "min_sampled_fidelity",
                 "worst_state_fidelity"};
  bool floor_ok = true, worst_ok = true;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const double delta = spectral_width(full_coupling(models[i])).delta;
    const FidelityDecayReport r = verify_fidelity_decay(
        models[i], t, samples, Rng(seed).substream(1000 + i).seed());
    rep.rows.push_back(
        Json::array({i, delta, r.analytic_floor, r.min_sampled_fidelity, r.worst_state_fidelity}));
    if (r.min_sampled_fidelity < r.analytic_floor - 1e-9) floor_ok = false;
    if (std::abs(r.worst_state_fidelity - r.analytic_floor) > 1e-9) worst_ok = false;
  }
  rep.verdicts.push_back({"sampled-fidelity-floor", floor_ok,
                          "sampled fidelities stay above cos(delta*t) - 1e-9"});
  rep.verdicts.push_back({"worst-state-attains-floor", worst_ok,
                          "extremal-pair state matches cos(delta*t) within 1e-9"});
}

void handle_verify_bounds(const Json& p, std::uint64_t seed, Report& rep) {
  const int trials = get_int(p, "trials", 100);
  const int bath_dim = get_int(p, "bath_dim", 8);
  const double t0_min = get_double(p, "t0_min", 0.01);
  const double t0_max = get_double(p, "t0_max", 0.2);
  const double slack = get_double(p, "slack", 1e-9);
  const double bound_scale = get_double(p, "bound_scale", 1.0);

  std::vector<int> qubit_counts;
  const Json* sq = find(p, "system_qubits");
  if (!sq || (sq->is_string() && sq->get<std::string>() == "both")) {
    qubit_counts = {1, 2};
  } else {
    qubit_counts = {as_int(*sq, "system_qubits")};
  }

  rep.columns = {"trial", "system_qubits", "bath_dim", "t0", "e_norm", "bound", "ok"};
  int violations = 0, total = 0;
  for (int nq : qubit_counts) {
    const auto sweep = gate_bound_sweep(trials, nq, bath_dim, t0_min, t0_max,
                                        seed ^ static_cast<std::uint64_t>(nq), slack, bound_scale);
    for (const GateBoundSample& s : sweep) {
      rep.rows.push_back(Json::array(
          {s.index, s.n_system_qubits, s.bath_dim, s.t0, s.e_norm, s.bound, s.ok}));
      ++total;
      if (!s.ok) ++violations;
    }
  }
  rep.verdicts.push_back({"gate-fault-bound", violations == 0,
                          std::to_string(violations) + " violations in " + std::to_string(total) +
                              " trials"});
}

void handle_spread_identity(const Json& p, std::uint64_t seed, Report& rep) {
  const int count = get_int(p, "count", 100);
  const int intervals = get_int(p, "intervals", 3);
  const int system_qubits = get_int(p, "system_qubits", 3);
  const int bath_dim = get_int(p, "bath_dim", 4);
  const int max_faults = get_int(p, "max_faults", 2);
  const double tolerance = get_double(p, "tolerance", 1e-10);
  const double coupling_scale = get_double(p, "coupling_scale", 0.5);
  if (count < 1) throw CliConfigError("parameter 'count' must be >= 1");
  if (max_faults < 0) throw CliConfigError("parameter 'max_faults' must be >= 0");

  const int dim = (1 << system_qubits) * bath_dim;
  rep.columns = {"circuit", "faults", "distance"};
  bool ok = true;
  double worst = 0.0;
  Rng root(seed);
  for (int c = 0; c < count; ++c) {
    Rng rng = root.substream(static_cast<std::uint64_t>(c));
    const IntervalCircuit circuit =
        random_interval_circuit(rng, intervals, dim, coupling_scale);
    const int k = c % (max_faults + 1);
    const double total = circuit.total_duration();

    std::vector<double> times(k);
    for (double& t : times) t = rng.uniform(0.0, total);
    std::sort(times.begin(), times.end());
    for (std::size_t i = 1; i < times.size(); ++i)
      if (times[i] <= times[i - 1]) times[i] = std::nextafter(times[i - 1], total);

    std::vector<TimeResolvedFault> entries;
    for (double t : times) {
      int interval = 0;
      double start = 0.0;
      while (interval + 1 < intervals && t >= start + circuit.intervals[interval].duration) {
        start += circuit.intervals[interval].duration;
        ++interval;
      }
      entries.push_back({interval, t});
    }

    const SpreadIdentityReport r =
        verify_spread_identity(circuit, make_fault_path(std::move(entries)));
    rep.rows.push_back(Json::array({c, k, r.lhs_rhs_distance}));
    worst = std::max(worst, r.lhs_rhs_distance);
    if (r.lhs_rhs_distance > tolerance) ok = false;
  }
  rep.verdicts.push_back(
      {"spread-identity", ok, "largest distance " + format_double(worst)});
}

void handle_sparse_check(const Json& p, std::uint64_t, Report& rep) {
  const CircuitLayout layout = layout_from_json(require(p, "layout"));
  const FaultSet faults = make_fault_set(layout, fault_ids_from_json(require(p, "faults")));
  const int level = get_int(p, "level", layout.level);
  const bool sparse = is_sparse(faults, layout, level);
  rep.columns = {"level", "n_faults", "sparse"};
  rep.rows.push_back(Json::array({level, faults.faulty_leaves.size(), sparse}));
}

void handle_propagate(const Json& p, std::uint64_t, Report& rep) {
  const CircuitLayout layout = layout_from_json(require(p, "layout"));
  const std::vector<std::uint64_t> ids = fault_ids_from_json(require(p, "faults"));

  const Json& raw_phases = require(p, "phases");
  if (!raw_phases.is_array())
    throw CliConfigError("parameter 'phases' must be an array of 'pre'/'during'");
  if (raw_phases.size() != ids.size())
    throw CliConfigError("parameters 'faults' and 'phases' must have the same length");
  std::vector<std::pair<std::uint64_t, FaultPhase>> tagged;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::string s = as_string(raw_phases[i], "phases");
    if (s != "pre" && s != "during")
      throw CliConfigError("parameter 'phases' entries must be 'pre' or 'during'");
    tagged.emplace_back(ids[i],
                        s == "pre" ? FaultPhase::PreCorrection : FaultPhase::DuringCorrection);
  }
  std::sort(tagged.begin(), tagged.end());
  std::vector<std::uint64_t> sorted_ids;
  std::vector<FaultPhase> phases;
  for (const auto& [id, phase] : tagged) {
    sorted_ids.push_back(id);
    phases.push_back(phase);
  }

  const FaultSet faults = make_fault_set(layout, std::move(sorted_ids));
  const BlockErrorState state =
      propagate_errors(layout, faults, make_phase_schedule(faults, std::move(phases)));

  rep.columns = {"block", "n_errors", "errored_qubits", "sparse"};
  for (std::size_t root = 0; root < state.errored_qubits.size(); ++root) {
    std::string joined;
    for (std::uint64_t q : state.errored_qubits[root]) {
      if (!joined.empty()) joined += ';';
      joined += std::to_string(q);
    }
    const bool sparse =
        forest_sparse(state.errored_qubits[root], 1, layout.level, layout.code.qubits_per_block);
    rep.rows.push_back(
        Json::array({root, state.errored_qubits[root].size(), joined, sparse}));
  }

  std::string failed;
  for (const FailedBlock& b : state.failed_blocks) {
    if (!failed.empty()) failed += ' ';
    failed += std::to_string(b.root) + ":" + std::to_string(b.height) + ":" +
              std::to_string(b.index);
  }
  rep.extras.emplace_back("state_sparse", state_is_sparse(state, layout) ? "true" : "false");
  rep.extras.emplace_back("failed_blocks", failed.empty() ? "none" : failed);
}

void handle_threshold(const Json& p, std::uint64_t, Report& rep) {
  std::vector<int> values;
  const Json& raw = require(p, "locations_per_rectangle");
  if (raw.is_array()) {
    for (const Json& v : raw) values.push_back(as_int(v, "locations_per_rectangle"));
  } else {
    values.push_back(as_int(raw, "locations_per_rectangle"));
  }
  const bool empirical = get_bool(p, "empirical", false);
  const BaseRule rule = parse_base_rule(p);
  const double tol = get_double(p, "tol", 1e-9);

  bool ok = true;
  if (empirical) {
    rep.columns = {"locations_per_rectangle", "threshold", "empirical_threshold"};
    for (int a_c : values) {
      const double thr = threshold_value(a_c);
      const double emp = empirical_threshold(a_c, rule, tol);
      rep.rows.push_back(Json::array({a_c, thr, emp}));
      if (emp < thr) ok = false;
    }
    rep.verdicts.push_back({"empirical-at-least-formula", ok,
                            "recursion boundary never undercuts 1/(e*A_C*(A_C-1))"});
  } else {
    rep.columns = {"locations_per_rectangle", "threshold"};
    for (int a_c : values) rep.rows.push_back(Json::array({a_c, threshold_value(a_c)}));
  }
}

void handle_recursion(const Json& p, std::uint64_t, Report& rep) {
  ThresholdParams tp = threshold_params_from(p);
  if (!find(p, "eta")) throw CliConfigError("missing required parameter 'eta'");
  const int r_max = get_int(p, "r_max", 20);
  const BaseRule rule = parse_base_rule(p);

  const RecursionTrace trace = iterate_recursion(tp, r_max, rule);
  rep.columns = {"level", "bad_norm", "log_bad_norm"};
  for (const RecursionLevel& lvl : trace.levels)
    rep.rows.push_back(Json::array({lvl.level, lvl.x, lvl.log_x}));
  rep.extras.emplace_back("converged", trace.converged ? "true" : "false");
  rep.extras.emplace_back("diverged", trace.diverged ? "true" : "false");
}

void handle_level(const Json& p, std::uint64_t, Report& rep) {
  ThresholdParams tp = threshold_params_from(p);
  if (!find(p, "eta")) throw CliConfigError("missing required parameter 'eta'");
  const BaseRule rule = parse_base_rule(p);
  const LevelReport r = required_level(tp, rule);
  rep.columns = {"level", "total_locations", "eps_prime"};
  rep.rows.push_back(Json::array({r.level, r.total_locations, r.eps_prime}));
}

void handle_spinboson(const Json& p, std::uint64_t, Report& rep) {
  const SpectralDensity j = spectral_density_from_json(require(p, "spectral_density"));

  rep.columns = {"quantity", "value", "note"};
  rep.rows.push_back(Json::array({"reorg_integral", reorg_integral(j), ""}));
  if (find(p, "bath_energy")) {
    const double e = as_double(*find(p, "bath_energy"), "bath_energy");
    rep.rows.push_back(Json::array({"energy_bound", energy_bound(j, e), ""}));
  }

  std::vector<std::string> methods;
  if (find(p, "methods")) {
    const Json& raw = *find(p, "methods");
    if (!raw.is_array()) throw CliConfigError("parameter 'methods' must be an array");
    for (const Json& v : raw) methods.push_back(as_string(v, "methods"));
  } else if (j.beta_eff) {
    methods = j.kind == SpectralKind::Ohmic
                  ? std::vector<std::string>{"quadrature", "closed", "series"}
                  : std::vector<std::string>{"quadrature"};
  }

  for (const std::string& name : methods) {
    CoolingMethod method;
    if (name == "quadrature")
      method = CoolingMethod::Quadrature;
    else if (name == "closed")
      method = CoolingMethod::Closed;
    else if (name == "series")
      method = CoolingMethod::Series;
    else
      throw CliConfigError("parameter 'methods' entries must be quadrature, closed, or series");
    const CoolingBound bound = cooling_bound(j, method);
    rep.rows.push_back(Json::array({"cooling_" + name, bound.value,
                                    bound.outside_expansion_regime ? "outside expansion regime"
                                                                   : ""}));
  }
}

void handle_hyperfine(const Json& p, std::uint64_t, Report& rep) {
  std::vector<double> weights;
  const Json& raw = require(p, "weights");
  if (!raw.is_array()) throw CliConfigError("parameter 'weights' must be an array");
  for (const Json& v : raw) weights.push_back(as_double(v, "weights"));

  const HyperfineModel model =
      make_hyperfine_model(as_double(require(p, "coupling_constant"), "coupling_constant"),
                           as_double(require(p, "cell_volume"), "cell_volume"), weights);
  const double kappa = get_double(p, "kappa", kHyperfineKappa);

  const double site_norm = op_norm(single_site_spin_coupling());
  double weight_sum = 0.0;
  for (double w : model.weights) weight_sum += w;
  const double bound = hyperfine_bound(model, kappa);
  const double cap = kappa * model.coupling_constant * model.cell_volume;

  rep.columns = {"quantity", "value"};
  rep.rows.push_back(Json::array({"site_operator_norm", site_norm}));
  rep.rows.push_back(Json::array({"weight_sum", weight_sum}));
  rep.rows.push_back(Json::array({"bound", bound}));
  rep.rows.push_back(Json::array({"cap", cap}));

  rep.verdicts.push_back({"site-norm-exact", std::abs(site_norm - 1.5) <= 1e-12,
                          "operator norm of the single-site coupling is 3/2"});
  rep.verdicts.push_back(
      {"bound-within-cap", bound <= cap + 1e-12, "bound never exceeds kappa*A_hf*v0"});
}

struct CommandEntry {
  const char* name;
  const char* help;
  void (*handler)(const Json&, std::uint64_t, Report&);
};

constexpr CommandEntry kCommands[] = {
    {"spectral-width",
     "Eigenvalue spread of a Hermitian operator and the norm-minimizing shift. "
     "Params: matrix | random_dim (+count), shift_scan.",
     handle_spectral_width},
    {"fidelity",
     "Worst-case fidelity decay cos(delta*t) versus sampled states. "
     "Params: t, samples, model ('pauli-zz' or object) | random_models (+bath_dim; "
     "random models are normalized to unit width, making t the decay angle).",
     handle_fidelity},
    {"verify-bounds",
     "Randomized sweep of the gate fault-norm bound. "
     "Params: trials, system_qubits (1|2|'both'), bath_dim, t0_min, t0_max, slack, bound_scale.",
     handle_verify_bounds},
    {"spread-identity",
     "Interaction-picture spread identity on random interval circuits. "
     "Params: count, intervals, system_qubits, bath_dim, max_faults, tolerance, coupling_scale.",
     handle_spread_identity},
    {"sparse-check",
     "Recursive sparseness of a fault set over a concatenated layout. "
     "Params: layout{...}, faults[], level.",
     handle_sparse_check},
    {"propagate",
     "Working-period error propagation for a phased fault set. "
     "Params: layout{...}, faults[], phases[] ('pre'/'during').",
     handle_propagate},
    {"threshold",
     "Threshold 1/(e*A_C*(A_C-1)), optionally with the empirical recursion boundary. "
     "Params: locations_per_rectangle (int or array), empirical, base_rule, tol.",
     handle_threshold},
    {"recursion",
     "Level-by-level bad-norm recursion trace. "
     "Params: locations_per_rectangle, eta, r_max, epsilon_target, base_rule.",
     handle_recursion},
    {"level",
     "Smallest concatenation level meeting an output-accuracy target. "
     "Params: locations_per_rectangle, eta, base_locations, epsilon_target, base_rule.",
     handle_level},
    {"spinboson",
     "Reorganization integral, bath-energy bound, and cooling bounds for a spectral density. "
     "Params: spectral_density{...}, bath_energy, methods[].",
     handle_spinboson},
    {"hyperfine",
     "Hyperfine coupling-strength bound kappa*A_hf*v0*sum(weights). "
     "Params: coupling_constant, cell_volume, weights[], kappa.",
     handle_hyperfine},
};

}  // namespace

Report execute(const RunConfig& config) {
  Report rep;
  rep.command = config.command;
  rep.config_echo = config.parameters;
  rep.seed = config.seed;
  for (const CommandEntry& entry : kCommands) {
    if (config.command == entry.name) {
      entry.handler(config.parameters, config.seed, rep);
      return rep;
    }
  }
  throw CliConfigError("unknown command '" + config.command + "'");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"ftnm: numerical verification of fault-tolerance noise bounds"};
  app.require_subcommand(1);

  std::string config_path, out_path, format_name = "csv";
  std::uint64_t seed_override = 0;
  bool seed_given = false;

  for (const CommandEntry& entry : kCommands) {
    CLI::App* sub = app.add_subcommand(entry.name, entry.help);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--format", format_name, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { seed_given = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig config;
    config.command = app.get_subcommands().front()->get_name();

    std::ifstream in(config_path);
    if (!in) throw CliConfigError("cannot open config file '" + config_path + "'");
    try {
      config.parameters = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw CliConfigError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!config.parameters.is_object())
      throw CliConfigError("config file must hold a JSON object");

    const Json* cfg_seed = find(config.parameters, "seed");
    if (cfg_seed) {
      if (!cfg_seed->is_number_integer() && !cfg_seed->is_number_unsigned())
        throw CliConfigError("parameter 'seed' must be an integer");
      config.seed = cfg_seed->get<std::uint64_t>();
    }
    if (seed_given) config.seed = seed_override;
    config.format = format_name == "json" ? ReportFormat::Json : ReportFormat::Csv;
    config.output_path = out_path;

    const Report rep = execute(config);
    const std::string body = rep.render(config.format);
    if (config.output_path.empty()) {
      std::cout << body;
    } else {
      std::ofstream out(config.output_path, std::ios::binary);
      if (!out) throw CliConfigError("cannot write report to '" + config.output_path + "'");
      out << body;
    }
    return rep.all_passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "ftnm: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ftnm

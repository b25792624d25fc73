#include "dimwit/io.hpp"

#include <cctype>

#include "dimwit/errors.hpp"

namespace dimwit {

namespace {

int get_int(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number_integer()) {
    throw StructuralError(std::string("missing or non-integer field '") + key + "'");
  }
  return j.at(key).get<int>();
}

const json& get_array(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
    throw StructuralError(std::string("missing or non-array field '") + key + "'");
  }
  return j.at(key);
}

// Flattens a nested array of the given shape, tracking which number forms appear.
class ScalarCollector {
 public:
  void collect(const json& j, const std::vector<std::size_t>& shape, std::size_t depth,
               std::vector<Scalar>& out, const std::string& what) {
    if (depth == shape.size()) {
      Scalar s = scalar_from_json(j);
      (s.is_exact() ? saw_exact_ : saw_float_) = true;
      if (saw_exact_ && saw_float_) {
        throw StructuralError(what + " mixes float numbers and rational strings");
      }
      out.push_back(std::move(s));
      return;
    }
    if (!j.is_array() || j.size() != shape[depth]) {
      throw StructuralError(what + ": expected an array of length " + std::to_string(shape[depth]) +
                            " at depth " + std::to_string(depth));
    }
    for (const auto& e : j) collect(e, shape, depth + 1, out, what);
  }

 private:
  bool saw_exact_ = false;
  bool saw_float_ = false;
};

std::vector<Scalar> collect(const json& j, const std::vector<std::size_t>& shape,
                            const std::string& what) {
  std::vector<Scalar> out;
  ScalarCollector().collect(j, shape, 0, out, what);
  return out;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  return Matrix(rows, cols, collect(j, {rows, cols}, what));
}

json pm_scenario_json(const PMScenario& s) {
  return {{"n_inputs_a", s.n_inputs_a}, {"n_inputs_b", s.n_inputs_b}, {"n_outputs", 2}};
}

PMScenario pm_scenario_from_json(const json& j) {
  if (!j.is_object()) throw StructuralError("scenario must be an object");
  PMScenario s{get_int(j, "n_inputs_a"), get_int(j, "n_inputs_b")};
  if (j.contains("n_outputs") && (!j["n_outputs"].is_number_integer() || j["n_outputs"] != 2)) {
    throw StructuralError("only binary-output prepare-and-measure behaviours are supported");
  }
  s.check();
  return s;
}

json bell_scenario_json(const BellScenario& s) { return {{"m", s.m}, {"n", s.n}}; }

BellScenario bell_scenario_from_json(const json& j) {
  BellScenario s{get_int(j, "m"), get_int(j, "n")};
  s.check();
  return s;
}

std::vector<std::vector<CMatrix>> operators_from_json(const json& j, int settings, int outcomes,
                                                      const std::string& what) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(settings)) {
    throw StructuralError(what + " must list " + std::to_string(settings) + " settings");
  }
  std::vector<std::vector<CMatrix>> out;
  for (const auto& setting : j) {
    if (!setting.is_array() || setting.size() != static_cast<std::size_t>(outcomes)) {
      throw StructuralError(what + ": each setting needs " + std::to_string(outcomes) + " operators");
    }
    std::vector<CMatrix> ops;
    for (const auto& op : setting) ops.push_back(cmatrix_from_json(op));
    out.push_back(std::move(ops));
  }
  return out;
}

json operators_to_json(const std::vector<std::vector<CMatrix>>& ops) {
  json out = json::array();
  for (const auto& setting : ops) {
    json s = json::array();
    for (const auto& op : setting) s.push_back(cmatrix_to_json(op));
    out.push_back(std::move(s));
  }
  return out;
}

template <class Opt>
json optional_json(const Opt& o) {
  return o ? json(*o) : json(nullptr);
}

}  // namespace

json scalar_to_json(const Scalar& s) {
  if (s.is_exact()) return s.to_string();
  return s.to_double();
}

Scalar scalar_from_json(const json& j) {
  if (j.is_string()) return Scalar::parse_rational(j.get<std::string>());
  if (j.is_number()) return Scalar(j.get<double>());
  throw StructuralError("expected a number or a rational string, got " + j.dump());
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const PMBehaviour& beh) {
  const auto& s = beh.scenario();
  json probs = json::array();
  for (int b = 0; b < 2; ++b) {
    json xs = json::array();
    for (int x = 0; x < s.n_inputs_a; ++x) {
      json ys = json::array();
      for (int y = 0; y < s.n_inputs_b; ++y) ys.push_back(scalar_to_json(beh(b, x, y)));
      xs.push_back(std::move(ys));
    }
    probs.push_back(std::move(xs));
  }
  return {{"kind", "pm"}, {"scenario", pm_scenario_json(s)}, {"probs", std::move(probs)}};
}

json to_json(const BellBehaviour& beh) {
  const auto& s = beh.scenario();
  json probs = json::array();
  for (int a = 0; a < s.n; ++a) {
    json bs = json::array();
    for (int b = 0; b < s.n; ++b) {
      json xs = json::array();
      for (int x = 0; x < s.m; ++x) {
        json ys = json::array();
        for (int y = 0; y < s.m; ++y) ys.push_back(scalar_to_json(beh(a, b, x, y)));
        xs.push_back(std::move(ys));
      }
      bs.push_back(std::move(xs));
    }
    probs.push_back(std::move(bs));
  }
  return {{"kind", "bell"}, {"scenario", bell_scenario_json(s)}, {"probs", std::move(probs)}};
}

json to_json(const AnyBehaviour& beh) {
  return std::visit([](const auto& b) { return to_json(b); }, beh);
}

AnyBehaviour behaviour_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw StructuralError("behaviour must be an object with a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  if (!j.contains("scenario")) throw StructuralError("behaviour has no 'scenario'");
  if (kind == "pm") {
    const auto sc = pm_scenario_from_json(j["scenario"]);
    const auto& probs = get_array(j, "probs");
    return PMBehaviour(sc, collect(probs,
                                   {2, static_cast<std::size_t>(sc.n_inputs_a),
                                    static_cast<std::size_t>(sc.n_inputs_b)},
                                   "probs"));
  }
  if (kind == "bell") {
    const auto sc = bell_scenario_from_json(j["scenario"]);
    const auto m = static_cast<std::size_t>(sc.m);
    const auto n = static_cast<std::size_t>(sc.n);
    return BellBehaviour(sc, collect(get_array(j, "probs"), {n, n, m, m}, "probs"));
  }
  throw StructuralError("unknown behaviour kind '" + kind + "'");
}

json cmatrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix cmatrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw StructuralError("complex matrix must be a nonempty array of rows");
  }
  const auto rows = j.size();
  const auto cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw StructuralError("ragged complex matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& e = j[r][c];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = {e[0].get<double>(), e[1].get<double>()};
      } else {
        throw StructuralError("complex entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

json to_json(const ClassicalPMStrategy& st) {
  json responder = json::array();
  for (int m = 0; m < st.d; ++m) {
    json ys = json::array();
    for (int y = 0; y < st.scenario.n_inputs_b; ++y) {
      ys.push_back({scalar_to_json(st.t(m, y, 0)), scalar_to_json(st.t(m, y, 1))});
    }
    responder.push_back(std::move(ys));
  }
  return {{"kind", "classical_pm"},
          {"d", st.d},
          {"scenario", pm_scenario_json(st.scenario)},
          {"sender", matrix_to_json(st.sender)},
          {"responder", std::move(responder)}};
}

json to_json(const QuantumPMStrategy& st) {
  json states = json::array();
  for (const auto& s : st.states) states.push_back(cmatrix_to_json(s));
  return {{"kind", "quantum_pm"},
          {"d", st.d},
          {"scenario", pm_scenario_json(st.scenario)},
          {"states", std::move(states)},
          {"povms", operators_to_json(st.povms)},
          {"povm_law", st.povm_law}};
}

json to_json(const BellQuantumStrategy& st) {
  return {{"kind", "bell_quantum"},
          {"dA", st.dA},
          {"dB", st.dB},
          {"scenario", bell_scenario_json(st.scenario)},
          {"state", cmatrix_to_json(st.state)},
          {"meas_a", operators_to_json(st.meas_a)},
          {"meas_b", operators_to_json(st.meas_b)},
          {"povm_law", st.povm_law}};
}

AnyStrategy strategy_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw StructuralError("strategy must be an object with a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  const std::string law = j.value("povm_law", std::string("explicit"));
  if (kind == "classical_pm") {
    ClassicalPMStrategy st;
    st.d = get_int(j, "d");
    st.scenario = pm_scenario_from_json(j.at("scenario"));
    if (st.d < 1) throw StructuralError("classical strategy needs d >= 1");
    const auto nx = static_cast<std::size_t>(st.scenario.n_inputs_a);
    const auto ny = static_cast<std::size_t>(st.scenario.n_inputs_b);
    const auto d = static_cast<std::size_t>(st.d);
    // One collector for both tables keeps the no-mixing rule file-wide.
    json both = json::array({get_array(j, "sender"), get_array(j, "responder")});
    std::vector<Scalar> sender = collect(both[0], {nx, d}, "sender");
    std::vector<Scalar> responder = collect(both[1], {d, ny, 2}, "responder");
    if (!sender.empty() && !responder.empty() &&
        sender.front().is_exact() != responder.front().is_exact()) {
      throw StructuralError("strategy mixes float numbers and rational strings");
    }
    st.sender = Matrix(nx, d, std::move(sender));
    st.responder = std::move(responder);
    st.validate();
    return st;
  }
  if (kind == "quantum_pm") {
    QuantumPMStrategy st;
    st.d = get_int(j, "d");
    st.scenario = pm_scenario_from_json(j.at("scenario"));
    for (const auto& s : get_array(j, "states")) st.states.push_back(cmatrix_from_json(s));
    st.povms = operators_from_json(get_array(j, "povms"), st.scenario.n_inputs_b, 2, "povms");
    st.povm_law = law;
    st.validate();
    return st;
  }
  if (kind == "bell_quantum") {
    BellQuantumStrategy st;
    st.dA = get_int(j, "dA");
    st.dB = get_int(j, "dB");
    st.scenario = bell_scenario_from_json(j.at("scenario"));
    st.state = cmatrix_from_json(j.at("state"));
    st.meas_a = operators_from_json(get_array(j, "meas_a"), st.scenario.m, st.scenario.n, "meas_a");
    st.meas_b = operators_from_json(get_array(j, "meas_b"), st.scenario.m, st.scenario.n, "meas_b");
    st.povm_law = law;
    st.validate();
    return st;
  }
  throw StructuralError("unknown strategy kind '" + kind + "'");
}

json to_json(const NoiseModel& model) {
  if (const auto* pm = std::get_if<PMMeasurementNoise>(&model)) {
    return {{"kind", "pm_measurement"}, {"table", matrix_to_json(pm->table)}};
  }
  const auto& b = std::get<BellProductNoise>(model);
  return {{"kind", "bell_product"},
          {"alice", matrix_to_json(b.alice)},
          {"bob", matrix_to_json(b.bob)}};
}

NoiseModel noise_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw StructuralError("noise model must be an object with a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  auto shape_of = [](const json& t) -> std::pair<std::size_t, std::size_t> {
    if (!t.is_array() || t.empty() || !t[0].is_array()) throw StructuralError("noise table must be a 2-d array");
    return {t.size(), t[0].size()};
  };
  if (kind == "pm_measurement") {
    const auto& t = get_array(j, "table");
    const auto [r, c] = shape_of(t);
    return PMMeasurementNoise{matrix_from_json(t, r, c, "table")};
  }
  if (kind == "bell_product") {
    const auto& a = get_array(j, "alice");
    const auto& b = get_array(j, "bob");
    const auto [ra, ca] = shape_of(a);
    const auto [rb, cb] = shape_of(b);
    return BellProductNoise{matrix_from_json(a, ra, ca, "alice"), matrix_from_json(b, rb, cb, "bob")};
  }
  throw StructuralError("unknown noise kind '" + kind + "'");
}

json to_json(const ValidationReport& r) {
  json v = json::array();
  for (const auto& viol : r.violations) {
    v.push_back({{"constraint", viol.constraint},
                 {"indices", viol.indices},
                 {"magnitude", viol.magnitude},
                 {"message", viol.message}});
  }
  return {{"valid", r.valid()},
          {"mode", to_string(r.mode)},
          {"tolerance", r.tolerance},
          {"violations", std::move(v)}};
}

json to_json(const RankResult& r) {
  return {{"rank", r.rank},
          {"mode", to_string(r.mode)},
          {"singular_values", optional_json(r.singular_values)},
          {"tolerance_used", optional_json(r.tolerance_used)}};
}

json to_json(const WitnessVerdict& v) {
  return {{"classical_lb", optional_json(v.classical_lb)},
          {"quantum_lb", optional_json(v.quantum_lb)},
          {"rank", v.rank_used},
          {"mode", to_string(v.mode)},
          {"source", to_string(v.source)},
          {"certified", v.certified()}};
}

json to_json(const AppendixRelation& r) {
  return {{"rank_w", r.rank_w},
          {"rank_p", r.rank_p},
          {"holds", r.holds},
          {"mode", to_string(r.mode)},
          {"elimination_preserves_rank", r.elimination_preserves_rank},
          {"reduced_matches_w", r.reduced_matches_w},
          {"rank_reduced", r.rank_reduced}};
}

json to_json(const FactorizationResult& r) {
  return {{"status", r.status == FactorizationStatus::found ? "found" : "not_found"},
          {"residual", r.residual},
          {"iterations", r.iterations},
          {"restarts", r.restarts},
          {"best_restart", r.best_restart},
          {"model", r.model ? to_json(*r.model) : json(nullptr)}};
}

json to_json(const MembershipCertificate& c) {
  json weights = json::array();
  for (const auto& w : c.weights) {
    weights.push_back({{"index", w.index},
                       {"sender", w.strategy.sender},
                       {"responder", w.strategy.responder},
                       {"weight", scalar_to_json(w.weight)}});
  }
  return {{"feasible", c.feasible},
          {"mode", c.mode == LpMode::exact ? "exact" : "float"},
          {"lp_tolerance", c.lp_tolerance},
          {"weights", std::move(weights)},
          {"max_reconstruction_error", c.max_reconstruction_error},
          {"strategy_count", c.strategy_count},
          {"iterations", c.iterations}};
}

json to_json(const SeparationReport& r) {
  return {{"k", r.k},
          {"m", r.m},
          {"rank", r.rank},
          {"classical_lb", optional_json(r.verdict.classical_lb)},
          {"quantum_lb", optional_json(r.verdict.quantum_lb)},
          {"mode", to_string(r.verdict.mode)},
          {"shared_randomness_d", 2},
          {"certificate", to_json(r.certificate)},
          {"reconstruction_exact", r.reconstruction_exact},
          {"behaviour", to_json(r.behaviour)}};
}

json to_json(const RobustnessReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"eta", scalar_to_json(row.eta)},
                    {"rank", row.rank},
                    {"ok", row.ok},
                    {"sigma_above_tol", optional_json(row.margin_above)},
                    {"sigma_below_tol", optional_json(row.margin_below)}});
  }
  return {{"kind", r.bell ? "bell" : "pm"},
          {"claim", r.bell ? "rank P - 1 <= rank P_eta <= rank P + 1" : "rank P_eta == rank P"},
          {"base_rank", r.base_rank},
          {"mode", to_string(r.mode)},
          {"tolerance_used", optional_json(r.tolerance_used)},
          {"all_ok", r.all_ok()},
          {"rows", std::move(rows)}};
}

Scalar parse_exact_decimal(const std::string& text) {
  if (text.find('/') != std::string::npos) return Scalar::parse_rational(text);
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
  std::string digits;
  int scale = 0;
  bool any = false, dot = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits += ch;
      any = true;
      if (dot) ++scale;
    } else if (ch == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  int exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    const std::string rest = text.substr(i);
    if (rest.empty()) throw StructuralError("malformed number '" + text + "'");
    std::size_t used = 0;
    try {
      exponent = std::stoi(rest, &used);
    } catch (const std::exception&) {
      throw StructuralError("malformed number '" + text + "'");
    }
    i += used;
  }
  if (!any || i != text.size()) throw StructuralError("malformed number '" + text + "'");
  Rational value(Integer(digits, 10));
  Integer ten_pow;
  const int net = exponent - scale;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
  if (net < 0) {
    value /= Rational(ten_pow);
  } else {
    value *= Rational(ten_pow);
  }
  if (neg) value = -value;
  return Scalar(value);
}

}  // namespace dimwit

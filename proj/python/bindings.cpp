// JSON-in, JSON-out bindings; the Python package decodes the strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dimwit/cli.hpp"
#include "dimwit/constructions.hpp"
#include "dimwit/experiments.hpp"
#include "dimwit/io.hpp"
#include "dimwit/linalg.hpp"
#include "dimwit/noise.hpp"
#include "dimwit/search.hpp"
#include "dimwit/strategy.hpp"
#include "dimwit/witness.hpp"

namespace py = pybind11;
using namespace dimwit;

namespace {

AnyBehaviour load(const std::string& text) { return behaviour_from_json(json::parse(text)); }

std::string validate(const std::string& text, double tol) {
  const auto beh = load(text);
  if (const auto* p = std::get_if<PMBehaviour>(&beh)) return to_json(validate_pm(*p, tol)).dump();
  return to_json(validate_bell(std::get<BellBehaviour>(beh), tol)).dump();
}

std::string rank_of(const std::string& text, const std::string& which, bool force_float,
                    std::optional<double> tol) {
  const auto beh = load(text);
  Matrix m;
  if (const auto* p = std::get_if<PMBehaviour>(&beh)) {
    if (which == "w") m = w_matrix(*p);
    else if (which == "pm" || which == "auto") m = pm_matrix(*p);
    else throw PreconditionError("matrix '" + which + "' does not apply to a prepare-and-measure behaviour");
  } else {
    if (which != "bell" && which != "auto") throw PreconditionError("matrix '" + which + "' does not apply to a Bell behaviour");
    m = bell_matrix(std::get<BellBehaviour>(beh));
  }
  const auto r = force_float ? rank_float(m, tol) : rank(m, tol);
  return to_json(r).dump();
}

std::string witness(const std::string& text, bool force_float, std::optional<double> tol) {
  WitnessOptions o;
  o.force_float = force_float;
  o.rank_tol = tol;
  const auto beh = load(text);
  if (const auto* p = std::get_if<PMBehaviour>(&beh)) return to_json(witness_pm(*p, o)).dump();
  return to_json(witness_bell(std::get<BellBehaviour>(beh), o)).dump();
}

std::string simulate(const std::string& text) {
  const auto st = strategy_from_json(json::parse(text));
  if (const auto* c = std::get_if<ClassicalPMStrategy>(&st)) return to_json(simulate_classical_pm(*c)).dump();
  if (const auto* q = std::get_if<QuantumPMStrategy>(&st)) return to_json(simulate_quantum_pm(*q)).dump();
  return to_json(simulate_bell(std::get<BellQuantumStrategy>(st))).dump();
}

std::string robustness(const std::string& text, const std::vector<std::string>& etas) {
  const auto beh = load(text);
  std::vector<Scalar> values;
  for (const auto& e : etas) values.push_back(parse_exact_decimal(e));
  if (const auto* p = std::get_if<PMBehaviour>(&beh)) {
    return to_json(rank_robustness_check(*p, uniform_measurement_noise(p->scenario()), values)).dump();
  }
  const auto& b = std::get<BellBehaviour>(beh);
  return to_json(rank_robustness_check(b, uniform_product_noise(b.scenario()), values)).dump();
}

std::string negligibility(bool bell, int x, int y, int m, int n, int samples, Seed seed, unsigned threads) {
  ExperimentConfig cfg;
  cfg.name = "negligibility";
  cfg.bell = bell;
  cfg.n_inputs_a = x;
  cfg.n_inputs_b = y;
  cfg.m = m;
  cfg.n = n;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.threads = threads;
  return negligibility_experiment(cfg).dump();
}

py::tuple run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_dimwit, mod) {
  mod.doc() = "Dimension witnesses from behaviour ranks";
  auto& base = py::register_exception<Error>(mod, "DimwitError", PyExc_RuntimeError);
  py::register_exception<StructuralError>(mod, "StructuralError", base.ptr());
  py::register_exception<ConstraintError>(mod, "ConstraintError", base.ptr());
  py::register_exception<PreconditionError>(mod, "PreconditionError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const json::exception& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });

  mod.def("version", [] { return version(); });
  mod.def("validate", &validate, py::arg("behaviour"), py::arg("tol") = kDefaultValidationTol);
  mod.def("rank", &rank_of, py::arg("behaviour"), py::arg("matrix") = "auto", py::arg("force_float") = false,
          py::arg("tol") = py::none());
  mod.def("witness", &witness, py::arg("behaviour"), py::arg("force_float") = false, py::arg("tol") = py::none());
  mod.def("simulate", &simulate, py::arg("strategy"));
  mod.def("robustness", &robustness, py::arg("behaviour"), py::arg("etas"));
  mod.def("p_k", [](int m, int k) { return to_json(p_k(m, k)).dump(); });
  mod.def("d_zero", [](int m, int k) { return to_json(d_zero(m, k)).dump(); });
  mod.def("d_block", [](int m, int k, int i, int j) { return to_json(d_block(m, k, i, j)).dump(); });
  mod.def("l_star", [](int m, int n) { return to_json(l_star(m, n)).dump(); });
  mod.def("separation", [](int k, int m) { return to_json(separation_report(k, m)).dump(); });
  mod.def("negligibility", &negligibility, py::arg("bell") = false, py::arg("x") = 4, py::arg("y") = 3,
          py::arg("m") = 2, py::arg("n") = 2, py::arg("samples") = 1000, py::arg("seed") = 0,
          py::arg("threads") = 0);
  mod.def("nonconvexity", [](int m, int n) { return nonconvexity_report(m, n).dump(); });
  mod.def("run", &run, py::arg("args"));
}

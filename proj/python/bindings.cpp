#include "markovmono/chain.hpp"
#include "markovmono/coupling.hpp"
#include "markovmono/errors.hpp"
#include "markovmono/hitting.hpp"
#include "markovmono/io.hpp"
#include "markovmono/montecarlo.hpp"
#include "markovmono/perturbation.hpp"
#include "markovmono/sensitivity.hpp"
#include "markovmono/stationary.hpp"
#include "markovmono/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace markovmono;

namespace {

CouplingSpec coupling(std::size_t s0, std::size_t donor) {
  return CouplingSpec{StateIndex{s0}, StateIndex{donor}};
}

py::object to_python(const io::Json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

}  // namespace

PYBIND11_MODULE(markovmono, m) {
  m.doc() = "Finite Markov chains: invariant distributions, hitting times, and the "
            "monotonicity of pi(s0) under mass shifted into column s0.";

  auto base = py::register_exception<Error>(m, "Error");
  auto invalid = py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", invalid.ptr());
  py::register_exception<TooSmall>(m, "TooSmall", base.ptr());
  py::register_exception<NotSquare>(m, "NotSquare", base.ptr());
  py::register_exception<NegativeEntry>(m, "NegativeEntry", base.ptr());
  py::register_exception<RowSumViolation>(m, "RowSumViolation", base.ptr());
  py::register_exception<NotIrreducible>(m, "NotIrreducible", base.ptr());
  py::register_exception<NotAperiodic>(m, "NotAperiodic", base.ptr());
  py::register_exception<NoConvergence>(m, "NoConvergence", base.ptr());
  py::register_exception<SingularSystem>(m, "SingularSystem", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<InfeasibleAmount>(m, "InfeasibleAmount", base.ptr());
  py::register_exception<InfeasibleStep>(m, "InfeasibleStep", base.ptr());
  py::register_exception<ConditionsViolated>(m, "ConditionsViolated", base.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
  py::register_exception<SameState>(m, "SameState", base.ptr());
  py::register_exception<InfeasibleFloor>(m, "InfeasibleFloor", base.ptr());

  py::class_<TransitionMatrix>(m, "TransitionMatrix")
      .def_property_readonly("n", &TransitionMatrix::size)
      .def_property_readonly("entries", &TransitionMatrix::entries)
      .def_property_readonly("labels", &TransitionMatrix::labels)
      .def("__getitem__",
           [](const TransitionMatrix& p, std::pair<std::size_t, std::size_t> ij) {
             if (ij.first >= p.size() || ij.second >= p.size()) throw py::index_error();
             return p(ij.first, ij.second);
           })
      .def("__len__", &TransitionMatrix::size)
      .def("__eq__", [](const TransitionMatrix& a, const TransitionMatrix& b) { return a == b; })
      .def("__repr__", [](const TransitionMatrix& p) {
        return "TransitionMatrix(n=" + std::to_string(p.size()) + ")";
      });

  m.def("validate",
        [](const Eigen::MatrixXd& raw, double tolerance, std::vector<std::string> labels) {
          return validate(raw, tolerance, std::move(labels));
        },
        py::arg("matrix"), py::arg("tolerance") = kDefaultRowTolerance,
        py::arg("labels") = std::vector<std::string>{});

  m.def("structure", [](const TransitionMatrix& p) {
    const StructureReport r = structure(p);
    py::dict d;
    d["irreducible"] = r.irreducible;
    d["aperiodic"] = r.aperiodic;
    d["period"] = r.irreducible ? py::object(py::int_(r.period)) : py::object(py::none());
    d["communicating_classes"] = r.communicating_classes;
    return d;
  });

  m.def("stationary_linear", [](const TransitionMatrix& p) { return stationary_linear(p).probs; });
  m.def("stationary_power",
        [](const TransitionMatrix& p, double tol, std::size_t max_iters) {
          return stationary_power(p, tol, max_iters).probs;
        },
        py::arg("matrix"), py::arg("tol") = 1e-12,
        py::arg("max_iters") = kDefaultPowerIterations);
  m.def("stationary_via_return_time",
        [](const TransitionMatrix& p, std::size_t s0) {
          return stationary_via_return_time(p, StateIndex{s0});
        },
        py::arg("matrix"), py::arg("s0"));

  m.def("expected_hitting_times",
        [](const TransitionMatrix& p, std::size_t s0) {
          return expected_hitting_times(p, StateIndex{s0}).hit;
        },
        py::arg("matrix"), py::arg("s0"));
  m.def("expected_return_time",
        [](const TransitionMatrix& p, std::size_t s0) {
          return expected_return_time(p, StateIndex{s0});
        },
        py::arg("matrix"), py::arg("s0"));

  m.def("coupled_derivative_direct",
        [](const TransitionMatrix& p, std::size_t s0, std::size_t donor) {
          return coupled_derivative_direct(p, coupling(s0, donor)).d_mu;
        },
        py::arg("matrix"), py::arg("s0"), py::arg("donor"));
  m.def("coupled_derivative_series",
        [](const TransitionMatrix& p, std::size_t s0, std::size_t donor, std::size_t terms) {
          return coupled_derivative_series(p, coupling(s0, donor), terms).d_mu;
        },
        py::arg("matrix"), py::arg("s0"), py::arg("donor"), py::arg("terms"));
  m.def("finite_difference_check",
        [](const TransitionMatrix& p, std::size_t s0, std::size_t donor, std::size_t row,
           double h) { return finite_difference_check(p, coupling(s0, donor), StateIndex{row}, h); },
        py::arg("matrix"), py::arg("s0"), py::arg("donor"), py::arg("row"),
        py::arg("h") = kDefaultFiniteDifferenceStep);
  m.def("stationary_derivative",
        [](const TransitionMatrix& p, std::size_t s0, std::size_t donor) {
          const CouplingSpec spec = coupling(s0, donor);
          return stationary_derivative(coupled_derivative_direct(p, spec),
                                       expected_return_time(p, spec.target));
        },
        py::arg("matrix"), py::arg("s0"), py::arg("donor"));

  m.def("apply_elementary",
        [](const TransitionMatrix& p, std::size_t s0, std::size_t donor,
           const Eigen::VectorXd& c) {
          return apply_elementary(p, ElementaryPerturbation{coupling(s0, donor), c});
        },
        py::arg("matrix"), py::arg("s0"), py::arg("donor"), py::arg("c"));
  m.def("check_theorem_conditions",
        [](const TransitionMatrix& p, const TransitionMatrix& q, std::size_t s0) {
          const TheoremConditionReport r = check_theorem_conditions(p, q, StateIndex{s0});
          py::list violations;
          for (const auto& v : r.violations) {
            violations.append(py::dict(py::arg("row") = v.row, py::arg("column") = v.column,
                                       py::arg("p") = v.p_value,
                                       py::arg("p_prime") = v.p_prime_value));
          }
          py::dict d;
          d["holds"] = r.holds;
          d["strict"] = r.strict;
          d["violations"] = violations;
          d["strict_rows"] = r.strict_rows;
          return d;
        },
        py::arg("p"), py::arg("p_prime"), py::arg("s0"));
  m.def("decompose",
        [](const TransitionMatrix& p, const TransitionMatrix& q, std::size_t s0) {
          py::list moves;
          for (const auto& mv : decompose(p, q, StateIndex{s0})) {
            moves.append(py::make_tuple(mv.spec.donor.value, mv.c));
          }
          return moves;
        },
        py::arg("p"), py::arg("p_prime"), py::arg("s0"));
  m.def("max_entry_difference", &max_entry_difference);

  m.def("simulate_return_time",
        [](const TransitionMatrix& p, std::size_t s0, std::uint64_t trajectories,
           std::uint64_t seed, unsigned threads) {
          SimulationOptions opts;
          opts.threads = threads;
          SimulationEstimate e;
          {
            py::gil_scoped_release release;
            e = simulate_return_time(p, StateIndex{s0}, trajectories, seed, opts);
          }
          return py::make_tuple(e.mean, e.std_error);
        },
        py::arg("matrix"), py::arg("s0"), py::arg("trajectories"), py::arg("seed") = 1,
        py::arg("threads") = 1);
  m.def("simulate_hitting_time",
        [](const TransitionMatrix& p, std::size_t from, std::size_t s0,
           std::uint64_t trajectories, std::uint64_t seed, unsigned threads) {
          SimulationOptions opts;
          opts.threads = threads;
          SimulationEstimate e;
          {
            py::gil_scoped_release release;
            e = simulate_hitting_time(p, StateIndex{from}, StateIndex{s0}, trajectories, seed, opts);
          }
          return py::make_tuple(e.mean, e.std_error);
        },
        py::arg("matrix"), py::arg("start"), py::arg("s0"), py::arg("trajectories"),
        py::arg("seed") = 1, py::arg("threads") = 1);

  m.def("run_suite",
        [](std::size_t trials, std::size_t n_min, std::size_t n_max, double min_entry,
           std::uint64_t seed, unsigned threads) {
          TrialConfig config;
          config.trials = trials;
          config.n_min = n_min;
          config.n_max = n_max;
          config.min_entry = min_entry;
          config.seed = seed;
          config.threads = threads;
          VerificationReport report;
          {
            py::gil_scoped_release release;
            report = run_suite(config);
          }
          return to_python(io::report_to_json(report));
        },
        py::arg("trials") = 1000, py::arg("n_min") = 2, py::arg("n_max") = 8,
        py::arg("min_entry") = 0.01, py::arg("seed") = 42, py::arg("threads") = 1);
}

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zenoest/bayes.hpp"
#include "zenoest/errors.hpp"
#include "zenoest/fisher.hpp"
#include "zenoest/measurement.hpp"
#include "zenoest/quantum.hpp"

namespace py = pybind11;
using namespace zenoest;

namespace {

const MeasurementBasis& two_level_basis() {
  static const MeasurementBasis b = MeasurementBasis::two_level();
  return b;
}

TwoLevelParams params(double omega, double delta, double gamma, double gamma_spont) {
  return {omega, delta, gamma, gamma_spont};
}

py::dict plan_dict(const HybridPlan& p) {
  py::dict d;
  d["q"] = p.q;
  d["tau_s"] = p.tau_s;
  d["tau_opt"] = p.tau_opt;
  d["n_total"] = p.n_total;
  d["epsilon"] = p.epsilon;
  d["distance"] = p.distance;
  d["trace_distance"] = p.trace_distance;
  d["eta"] = p.eta;
  d["opposite_omega"] = p.opposite_omega;
  d["tau_opt_capped"] = p.tau_opt_capped;
  std::vector<std::pair<double, std::size_t>> sched;
  for (const auto& s : p.schedule()) sched.emplace_back(s.tau, s.count);
  d["schedule"] = sched;
  return d;
}

Schedule to_schedule(const std::vector<std::pair<double, std::size_t>>& s) {
  Schedule out;
  for (const auto& [tau, count] : s) out.push_back({tau, count});
  return out;
}

}  // namespace

PYBIND11_MODULE(_zenoest, m) {
  m.doc() = "Repeated projective measurements, Fisher information and Bayesian estimation";
  m.attr("__version__") = ZENOEST_VERSION;

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());
  py::register_exception<AmbiguityError>(m, "AmbiguityError", base.ptr());
  py::register_exception<DivergentInformation>(m, "DivergentInformation", base.ptr());
  py::register_exception<UnsupportedClosedForm>(m, "UnsupportedClosedForm", base.ptr());
  py::register_exception<OutOfRegime>(m, "OutOfRegime", base.ptr());
  py::register_exception<ImpossibleRecord>(m, "ImpossibleRecord", base.ptr());

  py::class_<LindbladModel>(m, "LindbladModel")
      .def(py::init<ComplexMatrix, std::vector<ComplexMatrix>>(), py::arg("hamiltonian"),
           py::arg("collapse_ops") = std::vector<ComplexMatrix>{})
      .def_property_readonly("hamiltonian", &LindbladModel::hamiltonian)
      .def_property_readonly("collapse_ops", &LindbladModel::collapse_ops)
      .def_property_readonly("dim", &LindbladModel::dim);

  m.def("two_level_model", py::overload_cast<double, double, double, double>(&two_level_model),
        py::arg("omega"), py::arg("delta") = 0.0, py::arg("gamma") = 0.0,
        py::arg("gamma_spont") = 0.0);

  m.def("liouvillian", [](const LindbladModel& model) { return build_liouvillian(model).matrix(); },
        "Column-stacking superoperator matrix.");

  m.def("propagate",
        [](const LindbladModel& model, const ComplexMatrix& rho, double t) {
          return propagate(model, DensityOperator(rho), t).matrix();
        },
        py::arg("model"), py::arg("rho"), py::arg("t"));

  m.def("transition_kernel",
        [](const LindbladModel& model, double tau) {
          return transition_kernel(model, two_level_basis(), tau).matrix;
        },
        py::arg("model"), py::arg("tau"), "K[m, l] = P(m | l) in the {g, e} basis.");

  m.def("stationary_distribution",
        [](const RealMatrix& k) { return stationary_distribution({k, 0.0, {}}); });

  m.def("analytic_pgg", &analytic_pgg, py::arg("omega"), py::arg("delta"), py::arg("gamma"),
        py::arg("tau"));
  m.def("analytic_fisher", &analytic_fisher, py::arg("omega"), py::arg("delta"),
        py::arg("gamma"), py::arg("tau"));
  m.def("fisher_binary", &fisher_binary, py::arg("p"), py::arg("dp"));
  m.def("strong_drive_fisher_rate", &strong_drive_fisher_rate);

  m.def("fisher_rabi",
        [](double omega, double delta, double gamma, double gamma_spont, double tau) {
          return fisher_general(rabi_family(params(omega, delta, gamma, gamma_spont)), omega,
                                two_level_basis(), tau);
        },
        py::arg("omega"), py::arg("delta"), py::arg("gamma"), py::arg("gamma_spont"),
        py::arg("tau"), "Numerical Fisher information per measurement for the Rabi frequency.");

  m.def("zeno_coefficients",
        [](const LindbladModel& model, const std::string& initial) {
          const auto& b = two_level_basis();
          const auto c = zeno_coefficients(model, b.state(b.index_of(initial)));
          return std::make_pair(c.a, c.b);
        },
        py::arg("model"), py::arg("initial") = "g", "Returns (a, b).");

  m.def("optimal_tau",
        [](double omega, double delta, double gamma, double lo, double hi, std::size_t points) {
          return optimal_tau(omega, delta, gamma, {lo, hi}, points);
        },
        py::arg("omega"), py::arg("delta"), py::arg("gamma"), py::arg("lo"), py::arg("hi"),
        py::arg("points") = 1000, "Returns (tau*, F/T at tau*).");

  m.def("simulate",
        [](const LindbladModel& model, const std::vector<std::pair<double, std::size_t>>& schedule,
           std::uint64_t seed, std::size_t samples_per_interval, const std::string& initial) {
          const auto t = simulate_schedule(model, two_level_basis(), to_schedule(schedule), seed,
                                           samples_per_interval, initial);
          py::dict d;
          d["outcomes"] = t.record.outcomes;
          d["pair_counts"] = RealMatrix(t.record.pair_counts.cast<double>());
          d["times"] = t.series.times;
          d["populations"] = t.series.populations;
          return d;
        },
        py::arg("model"), py::arg("schedule"), py::arg("seed"),
        py::arg("samples_per_interval") = 0, py::arg("initial") = "g",
        "schedule is a list of (tau, count); outcomes are 0 = g, 1 = e.");

  m.def("run_filter",
        [](const std::vector<std::size_t>& outcomes,
           const std::vector<std::pair<double, std::size_t>>& schedule,
           const std::vector<double>& candidates, double delta, double gamma,
           double gamma_spont) {
          MeasurementRecord rec;
          rec.labels = two_level_basis().labels();
          rec.outcomes = outcomes;
          rec.pair_counts = count_pairs(0, outcomes, 2);
          rec.schedule = to_schedule(schedule);
          const PosteriorGrid prior(candidates, std::vector<double>(candidates.size(),
                                                                    1.0 / candidates.size()));
          const auto traj = run_filter(rec, prior, rabi_family(params(1.0, delta, gamma, gamma_spont)),
                                       two_level_basis(), to_schedule(schedule));
          RealMatrix w(static_cast<Eigen::Index>(traj.size()),
                       static_cast<Eigen::Index>(candidates.size()));
          for (std::size_t j = 0; j < traj.size(); ++j)
            for (std::size_t i = 0; i < candidates.size(); ++i)
              w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = traj[j].weight_at(i);
          return w;
        },
        py::arg("outcomes"), py::arg("schedule"), py::arg("candidates"), py::arg("delta") = 0.0,
        py::arg("gamma") = 0.0, py::arg("gamma_spont") = 0.0,
        "Posterior weights after each measurement (row 0 is the flat prior); records start in g.");

  m.def("posterior_stats",
        [](const std::vector<double>& candidates, const std::vector<double>& weights) {
          const auto s = posterior_stats(PosteriorGrid(candidates, weights));
          py::dict d;
          d["map"] = s.map;
          d["mean"] = s.mean;
          d["variance"] = s.variance;
          d["peaks"] = s.peaks;
          return d;
        },
        py::arg("candidates"), py::arg("weights"));

  m.def("ambiguous_candidates", &ambiguous_candidates, py::arg("omega0"), py::arg("gamma"),
        py::arg("tau"), py::arg("omega_max"));

  m.def("plan_hybrid",
        [](double total_time, double gamma, double omega0, double omega_max, double eta) {
          return plan_dict(plan_hybrid(total_time, gamma, omega0, omega_max, eta));
        },
        py::arg("total_time"), py::arg("gamma"), py::arg("omega0"), py::arg("omega_max"),
        py::arg("eta") = 0.1);

  m.def("state_distance",
        [](const ComplexMatrix& a, const ComplexMatrix& b) { return state_distance(a, b); });
}

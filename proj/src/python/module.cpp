#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chanem/em.hpp"
#include "chanem/error.hpp"
#include "chanem/expfam.hpp"
#include "chanem/harness.hpp"
#include "chanem/likelihood.hpp"
#include "chanem/markov.hpp"
#include "chanem/observation.hpp"

namespace py = pybind11;
using namespace chanem;

namespace {

std::vector<int> to_ints(const StateSequence& s) {
  std::vector<int> out;
  out.reserve(s.size());
  for (auto x : s) out.push_back(static_cast<int>(index(x)));
  return out;
}

StateSequence to_states(const std::vector<int>& v) {
  StateSequence out;
  out.reserve(v.size());
  for (int x : v) {
    if (x != 0 && x != 1) throw Error(ErrorKind::invalid_argument, "states must be 0 or 1");
    out.push_back(static_cast<SlotState>(x));
  }
  return out;
}

ObservedDataset make_dataset(std::vector<std::int64_t> times, const std::vector<int>& states) {
  ObservedDataset d{std::move(times), to_states(states)};
  validate(d);
  return d;
}

ObservationSchedule make_schedule(py::object L, std::uint64_t seed) {
  if (py::isinstance<py::int_>(L)) return ObservationSchedule::fixed(L.cast<std::int64_t>());
  return ObservationSchedule::random_uniform(L.cast<std::vector<std::int64_t>>(), seed);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "E-M estimation of two-state Markov channel parameters";
  m.attr("__version__") = std::string(kToolVersion);

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::exception<Error>(m, "ChanemError", PyExc_RuntimeError); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      py::object value = type(e.what());
      value.attr("kind") = e.name();
      py::set_error(type, value);
    }
  });

  py::class_<ChannelParams>(m, "ChannelParams")
      .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
      .def(py::init([](const py::tuple& t) {
        if (t.size() != 2) throw py::value_error("expected (alpha, beta)");
        return ChannelParams{t[0].cast<double>(), t[1].cast<double>()};
      }))
      .def_readwrite("alpha", &ChannelParams::alpha)
      .def_readwrite("beta", &ChannelParams::beta)
      .def("__eq__", [](const ChannelParams& a, const ChannelParams& b) { return a == b; })
      .def("__iter__", [](const ChannelParams& p) {
        return py::iter(py::make_tuple(p.alpha, p.beta));
      })
      .def("__repr__", [](const ChannelParams& p) {
        return "ChannelParams(alpha=" + format_double(p.alpha) + ", beta=" + format_double(p.beta) + ")";
      });
  py::implicitly_convertible<py::tuple, ChannelParams>();

  py::class_<SufficientStats>(m, "SufficientStats")
      .def(py::init<double, double, double, double>(), py::arg("t01"), py::arg("t10"),
           py::arg("T0"), py::arg("T1"))
      .def_readwrite("t01", &SufficientStats::t01)
      .def_readwrite("t10", &SufficientStats::t10)
      .def_readwrite("T0", &SufficientStats::T0)
      .def_readwrite("T1", &SufficientStats::T1)
      .def("__iter__", [](const SufficientStats& s) {
        return py::iter(py::make_tuple(s.t01, s.t10, s.T0, s.T1));
      });

  py::class_<ObservedDataset>(m, "ObservedDataset")
      .def(py::init(&make_dataset), py::arg("times"), py::arg("states"))
      .def_readonly("times", &ObservedDataset::times)
      .def_property_readonly("states", [](const ObservedDataset& d) { return to_ints(d.states); })
      .def("__len__", &ObservedDataset::size);

  py::class_<EmConfig>(m, "EmConfig")
      .def(py::init([](int max_iterations, double param_tolerance, double clamp_epsilon,
                       bool record_trajectory) {
             EmConfig c{max_iterations, param_tolerance, clamp_epsilon, record_trajectory};
             validate(c);
             return c;
           }),
           py::arg("max_iterations") = 100, py::arg("param_tolerance") = 0.0,
           py::arg("clamp_epsilon") = 1e-9, py::arg("record_trajectory") = false)
      .def_readwrite("max_iterations", &EmConfig::max_iterations)
      .def_readwrite("param_tolerance", &EmConfig::param_tolerance)
      .def_readwrite("clamp_epsilon", &EmConfig::clamp_epsilon)
      .def_readwrite("record_trajectory", &EmConfig::record_trajectory);

  py::class_<EmStep>(m, "EmStep")
      .def_readonly("p", &EmStep::p)
      .def_readonly("alpha", &EmStep::alpha)
      .def_readonly("beta", &EmStep::beta)
      .def_readonly("loglik", &EmStep::loglik);

  py::class_<EstimateReport>(m, "EstimateReport")
      .def_readonly("estimate", &EstimateReport::estimate)
      .def_readonly("start", &EstimateReport::start)
      .def_readonly("iterations_run", &EstimateReport::iterations_run)
      .def_readonly("se_db", &EstimateReport::se_db)
      .def_readonly("gamma_percent", &EstimateReport::gamma_percent)
      .def_readonly("log_likelihood", &EstimateReport::log_likelihood)
      .def_property_readonly("trajectory", [](const EstimateReport& r) {
        return r.trajectory ? py::cast(r.trajectory->steps) : py::none();
      });

  py::class_<MultiStartResult>(m, "MultiStartResult")
      .def_readonly("winner", &MultiStartResult::winner)
      .def_readonly("runs", &MultiStartResult::runs)
      .def_readonly("errors", &MultiStartResult::errors)
      .def("best", &MultiStartResult::best);

  m.def("transition_matrix", [](const ChannelParams& p) { return transition_matrix(p).p; },
        py::arg("params"));
  m.def("utilization", &utilization, py::arg("params"));
  m.def("simulate_chain",
        [](const ChannelParams& p, std::int64_t length, std::uint64_t seed,
           std::optional<int> initial) {
          std::optional<SlotState> s;
          if (initial) s = to_states({*initial}).front();
          return to_ints(simulate_chain(p, length, seed, s));
        },
        py::arg("params"), py::arg("length"), py::arg("seed"), py::arg("initial") = py::none());
  m.def("rank_channels", [](const std::vector<ChannelParams>& ps) { return rank_channels(ps); },
        py::arg("params"));

  m.def("count_statistics", [](const std::vector<int>& s) { return count_statistics(to_states(s)); },
        py::arg("sequence"));
  m.def("mle_complete", &mle_complete, py::arg("stats"));
  m.def("complete_log_likelihood", &complete_log_likelihood, py::arg("stats"), py::arg("params"));

  m.def("observe",
        [](const std::vector<int>& s, py::object L, std::uint64_t seed) {
          return observe(to_states(s), make_schedule(L, seed));
        },
        py::arg("sequence"), py::arg("L"), py::arg("seed") = 0,
        "L is a skip length, or a list of lengths drawn uniformly per gap.");

  m.def("n_step_matrix", [](const ChannelParams& p, std::int64_t n) { return n_step_matrix(p, n).p; },
        py::arg("params"), py::arg("n"));
  m.def("incomplete_log_likelihood",
        py::overload_cast<const ObservedDataset&, const ChannelParams&>(&incomplete_log_likelihood),
        py::arg("dataset"), py::arg("params"));
  m.def("brute_force_likelihood", &brute_force_likelihood, py::arg("dataset"), py::arg("params"));
  m.def("squared_error_db",
        [](const ObservedDataset& d, const ChannelParams& est, const ChannelParams& truth,
           const std::string& scale) {
          if (scale != "per_transition" && scale != "raw") {
            throw Error(ErrorKind::invalid_argument, "scale must be 'per_transition' or 'raw'");
          }
          return squared_error_db(d, est, truth,
                                  scale == "raw" ? SeScale::raw : SeScale::per_transition);
        },
        py::arg("dataset"), py::arg("estimate"), py::arg("truth"),
        py::arg("scale") = "per_transition");

  m.def("e_step", py::overload_cast<const ObservedDataset&, const ChannelParams&>(&e_step),
        py::arg("dataset"), py::arg("params"));
  m.def("m_step", &m_step, py::arg("expected"), py::arg("clamp_epsilon") = 1e-9);
  m.def("run_em",
        py::overload_cast<const ObservedDataset&, const ChannelParams&, const EmConfig&,
                          std::optional<ChannelParams>>(&run_em),
        py::arg("dataset"), py::arg("start"), py::arg("config") = EmConfig{},
        py::arg("truth") = py::none());
  m.def("multi_start",
        [](const ObservedDataset& d, const std::vector<ChannelParams>& starts,
           const EmConfig& config, std::optional<ChannelParams> truth) {
          return multi_start(d, starts, config, truth);
        },
        py::arg("dataset"), py::arg("starts"), py::arg("config") = EmConfig{},
        py::arg("truth") = py::none());
  m.def("heuristic_starts", &heuristic_starts, py::arg("dataset"), py::arg("count"),
        py::arg("clamp_epsilon") = 1e-9);
  m.def("relative_error", &relative_error, py::arg("estimate"), py::arg("truth"));
}

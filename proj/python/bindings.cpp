// Python bindings for the monohire core.

#include "monohire/dynamics.hpp"
#include "monohire/equilibrium.hpp"
#include "monohire/estimation.hpp"
#include "monohire/io.hpp"
#include "monohire/simulation.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace monohire;

namespace {

using IntervalList = std::vector<std::pair<double, double>>;

Strategy make_strategy(const IntervalList& intervals, const ScoreDistribution& dist) {
    std::vector<Interval> iv;
    for (auto [lo, hi] : intervals) iv.push_back({lo, hi});
    return Strategy(std::move(iv), dist);
}

IntervalList intervals_of(const Strategy& s) {
    IntervalList out;
    for (const auto& iv : s.intervals()) out.emplace_back(iv.lo, iv.hi);
    return out;
}

py::dict trace_dict(const DynamicsTrace& trace) {
    py::list steps;
    for (const auto& s : trace.steps) {
        py::dict d;
        d["round"] = s.round;
        d["firm"] = s.firm;
        d["u_before"] = s.utility_before;
        d["u_after"] = s.utility_after;
        d["p_before"] = s.potential_before;
        d["p_after"] = s.potential_after;
        steps.append(d);
    }
    py::dict out;
    out["steps"] = steps;
    out["converged"] = trace.converged;
    out["rounds_used"] = trace.rounds_used;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Capacity-constrained hiring under a shared scoring algorithm";

    // Translators run newest first, so subclasses are registered after bases.
    auto argument_error = py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    auto numerical_error =
        py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<RangeError>(m, "RangeError", argument_error.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", argument_error.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", argument_error.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", numerical_error.ptr());
    py::register_exception<SearchError>(m, "SearchError", numerical_error.ptr());

    py::enum_<DecisionScheme>(m, "DecisionScheme")
        .value("correlated", DecisionScheme::correlated)
        .value("independent", DecisionScheme::independent);

    py::enum_<EquilibriumKind>(m, "EquilibriumKind")
        .value("equal_utility", EquilibriumKind::equal_utility)
        .value("variable_utility", EquilibriumKind::variable_utility);

    py::class_<ScoreDistribution>(m, "ScoreDistribution")
        .def_static("uniform", &ScoreDistribution::uniform)
        .def_static("piecewise_constant", &ScoreDistribution::piecewise_constant,
                    py::arg("breakpoints"), py::arg("values"))
        .def_static("piecewise_linear", &ScoreDistribution::piecewise_linear,
                    py::arg("breakpoints"), py::arg("values"))
        .def_static("from_config", [](const std::string& text) {
            return parse_distribution_config(text);
        })
        .def_property_readonly("kind", [](const ScoreDistribution& d) { return to_string(d.kind()); })
        .def_property_readonly("delta", &ScoreDistribution::delta)
        .def("density", &ScoreDistribution::density)
        .def("cdf", &ScoreDistribution::cdf)
        .def("mass", &ScoreDistribution::mass, py::arg("a"), py::arg("b"))
        .def("top_mass_threshold", &ScoreDistribution::top_mass_threshold, py::arg("c"))
        .def("quantile", &ScoreDistribution::quantile)
        .def("integrate_weighted", &ScoreDistribution::integrate_weighted, py::arg("g"),
             py::arg("a"), py::arg("b"))
        .def("expected_score", &ScoreDistribution::expected_score)
        .def("to_config", [](const ScoreDistribution& d) { return format_distribution_config(d); });

    py::class_<Instance>(m, "Instance")
        .def(py::init<int, double, ScoreDistribution, DecisionScheme>(), py::arg("n"),
             py::arg("c"), py::arg("dist") = ScoreDistribution::uniform(),
             py::arg("scheme") = DecisionScheme::correlated)
        .def_readonly("n", &Instance::n_firms)
        .def_readonly("c", &Instance::capacity)
        .def_readonly("dist", &Instance::dist)
        .def_readonly("scheme", &Instance::scheme);

    py::class_<Strategy>(m, "Strategy")
        .def(py::init(&make_strategy), py::arg("intervals"), py::arg("dist"))
        .def_property_readonly("intervals", &intervals_of)
        .def_property_readonly("mass", &Strategy::mass)
        .def("contains", &Strategy::contains);

    py::class_<StrategyProfile>(m, "StrategyProfile")
        .def(py::init([](std::vector<Strategy> s) { return StrategyProfile(std::move(s)); }))
        .def_static("from_intervals",
                    [](const std::vector<IntervalList>& firms, const ScoreDistribution& dist) {
                        std::vector<Strategy> s;
                        for (const auto& f : firms) s.push_back(make_strategy(f, dist));
                        return StrategyProfile(std::move(s));
                    })
        .def_static("parse", [](const std::string& text, const ScoreDistribution& dist) {
            return parse_profile(text, dist);
        })
        .def("__len__", &StrategyProfile::size)
        .def("strategy", &StrategyProfile::strategy)
        .def("intervals", [](const StrategyProfile& p) {
            std::vector<IntervalList> out;
            for (const auto& s : p.strategies()) out.push_back(intervals_of(s));
            return out;
        })
        .def("bands", [](const StrategyProfile& p) {
            std::vector<std::tuple<double, double, int>> out;
            for (const auto& b : p.bands()) out.emplace_back(b.lo, b.hi, b.multiplicity);
            return out;
        })
        .def("to_text", [](const StrategyProfile& p) { return format_profile_text(p); })
        .def("to_json", [](const StrategyProfile& p) { return dump_json(profile_to_json(p)); });

    py::class_<ThresholdSet>(m, "ThresholdSet")
        .def_readonly("level", &ThresholdSet::level)
        .def_readonly("thresholds", &ThresholdSet::thresholds)
        .def_readonly("m_max", &ThresholdSet::m_max)
        .def("tau", &ThresholdSet::tau);

    py::class_<EquilibriumSolution>(m, "EquilibriumSolution")
        .def_readonly("thresholds", &EquilibriumSolution::thresholds)
        .def_readonly("profile", &EquilibriumSolution::profile)
        .def_readonly("kind", &EquilibriumSolution::kind)
        .def_property_readonly("method",
                               [](const EquilibriumSolution& s) { return to_string(s.method); });

    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("is_equilibrium", &VerificationReport::is_equilibrium)
        .def_readonly("max_deviation_gain", &VerificationReport::max_deviation_gain)
        .def_readonly("deviation_gains", &VerificationReport::deviation_gains)
        .def_readonly("notes", &VerificationReport::notes)
        .def_readonly("extracted", &VerificationReport::extracted)
        .def_property_readonly("violations", [](const VerificationReport& r) {
            std::vector<std::tuple<int, double, std::string>> out;
            for (const auto& v : r.condition_violations) out.emplace_back(v.condition, v.location, v.detail);
            return out;
        });

    m.def("utility", &utility, py::arg("n"), py::arg("s"), py::arg("scheme"));
    m.def("inverse_utility", &inverse_utility, py::arg("n"), py::arg("t"), py::arg("scheme"));
    m.def("firm_utility", &firm_utility);
    m.def("social_welfare", &social_welfare);
    m.def("naive_profile", &naive_profile);

    m.def("solve_equal_utility_thresholds", &solve_equal_utility_thresholds);
    m.def("assign_firms", &assign_firms);
    m.def("solve", [](const Instance& inst) {
        return assign_firms(solve_equal_utility_thresholds(inst), inst);
    });
    m.def("verify_equilibrium",
          [](const StrategyProfile& p, const Instance& inst, double eps, bool structural_only) {
              return verify_equilibrium(p, inst, eps,
                                        structural_only ? VerifyMode::structural : VerifyMode::full);
          },
          py::arg("profile"), py::arg("inst"), py::arg("epsilon") = 1e-6,
          py::arg("structural_only") = false);
    m.def("classify", py::overload_cast<const ThresholdSet&>(&classify));

    m.def("sw_naive", &sw_naive);
    m.def("sw_ne", &sw_ne);
    m.def("sw_max", &sw_max, py::arg("inst"), py::arg("grid") = kDefaultGreedyGrid);
    m.def("pons", &pons);
    m.def("poa", &poa, py::arg("inst"), py::arg("grid") = kDefaultGreedyGrid);
    m.def("welfare_summary",
          [](const Instance& inst, std::size_t grid) {
              const auto w = welfare_summary(inst, grid);
              py::dict d;
              d["sw_naive"] = w.sw_naive;
              d["sw_ne"] = w.sw_ne;
              d["sw_max"] = w.sw_max;
              d["pons"] = w.pons;
              d["poa"] = w.poa;
              return d;
          },
          py::arg("inst"), py::arg("grid") = kDefaultGreedyGrid);
    m.def("naive_capacity_for_welfare", &naive_capacity_for_welfare);
    m.def("ne_with_capacity_over_n",
          [](double w, int n, const ScoreDistribution& dist, DecisionScheme scheme) {
              const auto r = ne_with_capacity_over_n(w, n, dist, scheme);
              py::dict d;
              d["solution"] = r.solution;
              d["threshold"] = r.threshold;
              d["total_capacity"] = r.total_capacity;
              d["naive_capacity"] = r.naive_capacity;
              d["welfare"] = r.welfare;
              d["is_equilibrium"] = r.report.is_equilibrium;
              return d;
          });

    m.def("potential", &potential);
    m.def("best_response", &best_response);
    m.def("run_best_response_dynamics",
          [](const Instance& inst, const StrategyProfile& init, double eps, int max_rounds) {
              const auto r = run_best_response_dynamics(inst, init, eps, max_rounds);
              return py::make_tuple(r.profile, trace_dict(r.trace));
          },
          py::arg("inst"), py::arg("init"), py::arg("epsilon") = 1e-6, py::arg("max_rounds") = 200);
    m.def("run_one_turn_dynamics",
          [](const Instance& inst, bool enforce_bounds) {
              const auto r = run_one_turn_dynamics(inst, OneTurnOptions{enforce_bounds});
              return py::make_tuple(r.solution, trace_dict(r.trace));
          },
          py::arg("inst"), py::arg("enforce_bounds") = true);
    m.def("c0_bound", &c0_bound, py::arg("n_total"), py::arg("delta"));

    m.def("simulate_hiring",
          [](const StrategyProfile& p, const Instance& inst, std::int64_t applicants,
             std::uint64_t seed, unsigned threads) {
              SimulationResult r;
              {
                  py::gil_scoped_release release;
                  r = simulate_hiring(p, inst, applicants, seed, threads);
              }
              py::dict d;
              d["hire_rate"] = r.hire_rate;
              d["hire_se"] = r.hire_se;
              d["welfare"] = r.welfare;
              d["welfare_se"] = r.welfare_se;
              return d;
          },
          py::arg("profile"), py::arg("inst"), py::arg("applicants"), py::arg("seed") = 1,
          py::arg("threads") = 0);

    m.def("prob_correct", &prob_correct, py::arg("k"), py::arg("p1"), py::arg("p2"));
    m.def("min_samples", &min_samples, py::arg("p1"), py::arg("p2"), py::arg("q"),
          py::arg("k_max") = kDefaultSampleLimit);
    m.def("sweep_sample_complexity",
          [](double p1, double start, double stop, double step, const std::vector<double>& qs,
             long long k_max) {
              std::vector<std::tuple<double, double, double, py::object>> out;
              for (const auto& r : sweep_sample_complexity(p1, start, stop, step, qs, k_max)) {
                  out.emplace_back(r.p1, r.p2, r.q,
                                   r.resolved() ? py::object(py::int_(r.k)) : py::object(py::none()));
              }
              return out;
          },
          py::arg("p1"), py::arg("start"), py::arg("stop"), py::arg("step"), py::arg("q_list"),
          py::arg("k_max") = kDefaultSampleLimit);
}

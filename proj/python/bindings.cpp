#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "fragmenta/discrete.hpp"
#include "fragmenta/empirics.hpp"
#include "fragmenta/fragmentation.hpp"
#include "fragmenta/split_law.hpp"
#include "fragmenta/stationary.hpp"
#include "fragmenta/tree_profile.hpp"
#include "fragmenta/verify.hpp"

namespace py = pybind11;
using namespace fragmenta;

PYBIND11_MODULE(_core, m) {
    m.doc() = "greedy interval splitting, stationary spacing laws, and subtree profiles";
#ifdef FRAGMENTA_VERSION
    m.attr("__version__") = FRAGMENTA_VERSION;
#endif

    py::enum_<Scheme>(m, "Scheme")
        .value("greedy", Scheme::greedy)
        .value("random_order", Scheme::random_order);

    py::class_<SplitLaw>(m, "SplitLaw")
        .def_static("kakutani", &SplitLaw::kakutani)
        .def_static("b_uniform", &SplitLaw::b_uniform, py::arg("b"))
        .def_static("m_ary_density", &SplitLaw::m_ary_density, py::arg("m"))
        .def_static("heavy_tail", &SplitLaw::heavy_tail, py::arg("alpha"))
        .def_static("catalan_fringe", &SplitLaw::catalan_fringe)
        .def_static(
            "parse", [](const std::string& token) { return SplitLaw::parse(token); },
            py::arg("token"))
        .def_property_readonly("continuous", &SplitLaw::continuous)
        .def_property_readonly("name", &SplitLaw::name)
        .def("branching", &SplitLaw::branching)
        .def("alpha", &SplitLaw::alpha)
        .def("expected_count", &SplitLaw::expected_count, py::arg("x"))
        .def("density", &SplitLaw::density, py::arg("x"))
        .def("piece_pmf", &SplitLaw::piece_pmf, py::arg("parent_size"))
        .def("symmetric_pmf", &SplitLaw::symmetric_pmf, py::arg("parent_size"))
        .def("__repr__",
             [](const SplitLaw& law) { return "<SplitLaw " + law.name() + ">"; });

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("x_c", &RunResult::x_c)
        .def_readonly("seed", &RunResult::seed)
        .def_readonly("partition_points", &RunResult::partition_points)
        .def_readonly("maxima", &RunResult::maxima)
        .def_property_readonly("spacings",
                               [](const RunResult& r) {
                                   std::vector<std::pair<double, double>> v;
                                   v.reserve(r.spacings.size());
                                   for (const auto& s : r.spacings)
                                       v.emplace_back(s.left, s.length);
                                   return v;
                               })
        .def("n_steps", &RunResult::n_steps)
        .def("total_length", &RunResult::total_length);

    m.def("run_to_cutoff", &run_to_cutoff, py::arg("law"), py::arg("x_c"),
          py::arg("seed"), py::arg("scheme") = Scheme::greedy);

    py::class_<YTrackResult>(m, "YTrackResult")
        .def_readonly("y", &YTrackResult::y)
        .def_readonly("n_cuts", &YTrackResult::n_cuts)
        .def_readonly("ratios", &YTrackResult::ratios)
        .def_readonly("final_length", &YTrackResult::final_length);

    m.def("track_y_interval", &track_y_interval, py::arg("law"), py::arg("y"),
          py::arg("x_c"), py::arg("seed"));

    py::class_<EmpiricalCdf>(m, "EmpiricalCdf")
        .def(py::init<std::vector<double>>(), py::arg("values"))
        .def("__call__", &EmpiricalCdf::operator(), py::arg("x"))
        .def_property_readonly("sorted", &EmpiricalCdf::sorted)
        .def("__len__", &EmpiricalCdf::size);

    m.def(
        "ks_uniform",
        [](const std::vector<double>& sorted_points) { return ks_uniform(sorted_points); },
        py::arg("sorted_points"), "sup |F_n - x| for an ascending sample in [0,1]");
    m.def("spacing_cdf", &spacing_cdf, py::arg("run"), py::arg("x_c"));
    m.def("point_cdf_deviation", &point_cdf_deviation, py::arg("run"));

    py::class_<StationarySolution>(m, "StationarySolution")
        .def_readonly("b", &StationarySolution::b)
        .def_readonly("C", &StationarySolution::C)
        .def_readonly("beta", &StationarySolution::beta)
        .def("cdf", &StationarySolution::cdf, py::arg("x"))
        .def("mean_spacing_scaled", &StationarySolution::mean_spacing_scaled);

    m.def("solve_stationary", &solve_stationary, py::arg("law"));
    m.def("solve_stationary_constant", &solve_stationary_constant, py::arg("law"),
          py::arg("b"));

    py::class_<ProfileSolution>(m, "ProfileSolution")
        .def_property_readonly("grid", &ProfileSolution::grid)
        .def_property_readonly("values", &ProfileSolution::values)
        .def_property_readonly("richardson_error", &ProfileSolution::richardson_error)
        .def("at", &ProfileSolution::at, py::arg("y"))
        .def("integrate", &ProfileSolution::integrate, py::arg("a"), py::arg("b"));

    m.def("solve_volterra_H", &solve_volterra_H, py::arg("law"), py::arg("y_min"),
          py::arg("grid_size"));

    py::class_<RootSet>(m, "RootSet")
        .def_readonly("m", &RootSet::m)
        .def_readonly("roots", &RootSet::roots)
        .def_readonly("residuals", &RootSet::residuals);

    py::class_<StationarityClass>(m, "StationarityClass")
        .def_readonly("m", &StationarityClass::m)
        .def_readonly("re_z2", &StationarityClass::re_z2)
        .def_readonly("stationary", &StationarityClass::stationary)
        .def_readonly("margin", &StationarityClass::margin);

    py::class_<CauchyEulerSolution>(m, "CauchyEulerSolution")
        .def_readonly("m", &CauchyEulerSolution::m)
        .def_readonly("roots", &CauchyEulerSolution::roots)
        .def_readonly("coeff", &CauchyEulerSolution::coeff)
        .def_readonly("condition_number", &CauchyEulerSolution::condition_number)
        .def("value", &CauchyEulerSolution::value, py::arg("y"));

    m.def("characteristic_roots", &characteristic_roots, py::arg("m"));
    m.def("classify_stationarity", &classify_stationarity, py::arg("m"));
    m.def("cauchy_euler_solution", &cauchy_euler_solution, py::arg("m"));
    m.def("subtree_profile", &subtree_profile, py::arg("m"), py::arg("n"), py::arg("k"));

    py::class_<DiscreteRun::Arrival>(m, "Arrival")
        .def_readonly("size", &DiscreteRun::Arrival::size)
        .def_readonly("count", &DiscreteRun::Arrival::count)
        .def_readonly("total_pieces", &DiscreteRun::Arrival::total_pieces);

    py::class_<DiscreteRun::Snapshot>(m, "Snapshot")
        .def_readonly("milestone", &DiscreteRun::Snapshot::milestone)
        .def_readonly("max_size", &DiscreteRun::Snapshot::max_size)
        .def_readonly("step", &DiscreteRun::Snapshot::step)
        .def_readonly("counts", &DiscreteRun::Snapshot::counts);

    py::class_<DiscreteRun>(m, "DiscreteRun")
        .def_readonly("n", &DiscreteRun::n)
        .def_readonly("stop_size", &DiscreteRun::stop_size)
        .def_readonly("seed", &DiscreteRun::seed)
        .def_readonly("steps", &DiscreteRun::steps)
        .def_readonly("final_counts", &DiscreteRun::final_counts)
        .def_readonly("arrivals", &DiscreteRun::arrivals)
        .def_readonly("snapshots", &DiscreteRun::snapshots)
        .def("arrival_count", &DiscreteRun::arrival_count, py::arg("size"))
        .def("total_mass", &DiscreteRun::total_mass);

    m.def(
        "simulate_discrete",
        [](const SplitLaw& law, std::int64_t n, std::int64_t stop_size,
           std::uint64_t seed, std::vector<std::int64_t> milestones) {
            return simulate_discrete(law, n, stop_size, seed, std::move(milestones));
        },
        py::arg("law"), py::arg("n"), py::arg("stop_size"), py::arg("seed"),
        py::arg("milestones") = std::vector<std::int64_t>{});
    m.def(
        "simulate_discrete",
        [](std::int64_t n, double alpha, std::int64_t stop_size, std::uint64_t seed,
           std::vector<std::int64_t> milestones) {
            return simulate_discrete(n, alpha, stop_size, seed, std::move(milestones));
        },
        py::arg("n"), py::arg("alpha"), py::arg("stop_size"), py::arg("seed"),
        py::arg("milestones") = std::vector<std::int64_t>{});

    m.def(
        "detect_critical_size",
        [](const DiscreteRun& run, double theta, std::int64_t w_min, std::int64_t w_frac) {
            return detect_critical_size(run, {theta, w_min, w_frac});
        },
        py::arg("run"), py::arg("theta") = 0.7, py::arg("w_min") = 32,
        py::arg("w_frac") = 4);

    py::class_<HtSeries>(m, "HtSeries")
        .def_readonly("H", &HtSeries::H)
        .def_readonly("alpha", &HtSeries::alpha);

    py::class_<PlateauStats>(m, "PlateauStats")
        .def_readonly("gamma_hat", &PlateauStats::gamma_hat)
        .def_readonly("rel_variation", &PlateauStats::rel_variation);

    py::class_<CriticalPoints>(m, "CriticalPoints")
        .def_readonly("M_c", &CriticalPoints::M_c)
        .def_readonly("count_at_Mc", &CriticalPoints::count_at_Mc)
        .def_readonly("M_c_prime", &CriticalPoints::M_c_prime)
        .def_readonly("count_at_Mc_prime", &CriticalPoints::count_at_Mc_prime);

    m.def("solve_Ht_recurrence", &solve_Ht_recurrence, py::arg("alpha"), py::arg("T"));
    m.def(
        "measure_plateau",
        [](const std::vector<double>& H, std::size_t t_lo, std::size_t t_hi) {
            return measure_plateau(H, t_lo, t_hi);
        },
        py::arg("H"), py::arg("t_lo"), py::arg("t_hi"));
    m.def("predict_critical_points", &predict_critical_points, py::arg("n"),
          py::arg("alpha") = 1.5);
    m.def("reverse_recurrence", &reverse_recurrence, py::arg("n"), py::arg("law"),
          py::arg("k_max"));
    m.def("reverse_system_matrix", &reverse_system_matrix, py::arg("law"), py::arg("k"));

    py::class_<HkRow>(m, "HkRow")
        .def_readonly("k", &HkRow::k)
        .def_readonly("h", &HkRow::h)
        .def_readonly("conjectured", &HkRow::conjectured)
        .def_readonly("ratio", &HkRow::ratio);

    m.def("make_hk_table", &make_hk_table, py::arg("run"), py::arg("alpha"),
          py::arg("ks"));
    m.def("test_Hk_conjecture", &test_Hk_conjecture, py::arg("n"), py::arg("alpha"),
          py::arg("k_range"), py::arg("seed"));

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("id", &CheckResult::id)
        .def_readonly("title", &CheckResult::title)
        .def_readonly("pass_", &CheckResult::pass)
        .def_readonly("detail", &CheckResult::detail);

    m.def(
        "verify_uniformity",
        [](const SplitLaw& law, double x_c, int replicates, std::uint64_t seed) {
            return verify_uniformity(law, x_c, replicates, seed);
        },
        py::arg("law"), py::arg("x_c") = 1e-3, py::arg("replicates") = 20,
        py::arg("seed") = 7);
}

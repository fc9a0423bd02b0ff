#include "iwf/config_io.hpp"
#include "iwf/contraction.hpp"
#include "iwf/engine.hpp"
#include "iwf/expharness.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace iwf;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Iterative water-filling power control for MIMO interference channels";

  auto config_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DegenerateChannelError>(m, "DegenerateChannelError", PyExc_ValueError);
  py::register_exception<SvdError>(m, "SvdError", PyExc_ArithmeticError);
  py::register_exception<SpectralRadiusError>(m, "SpectralRadiusError", PyExc_ArithmeticError);
  (void)config_error;

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init<>())
      .def_readwrite("users", &NetworkConfig::users)
      .def_readwrite("tx_antennas", &NetworkConfig::tx_antennas)
      .def_readwrite("rx_antennas", &NetworkConfig::rx_antennas)
      .def_readwrite("power_budget", &NetworkConfig::power_budget)
      .def_readwrite("noise_power", &NetworkConfig::noise_power)
      .def_readwrite("direct_distance", &NetworkConfig::direct_distance)
      .def_readwrite("cross_distance", &NetworkConfig::cross_distance)
      .def_readwrite("pathloss_exponent", &NetworkConfig::pathloss_exponent)
      .def("streams", &NetworkConfig::streams, py::arg("q"))
      .def("__repr__", [](const NetworkConfig& c) {
        return "<NetworkConfig users=" + std::to_string(c.users) + ">";
      });

  m.def("validate_config", &validate_config, py::arg("raw"));
  m.def("uniform_config", &uniform_config, py::arg("users"), py::arg("tx_antennas"), py::arg("rx_antennas"),
        py::arg("power_budget"), py::arg("noise_power"), py::arg("direct_distance"), py::arg("cross_distance"),
        py::arg("pathloss_exponent"));
  m.def("pathloss_power_gain", &pathloss_power_gain, py::arg("distance"), py::arg("exponent"));

  py::class_<ChannelRealization>(m, "ChannelRealization")
      .def_readonly("H", &ChannelRealization::H)
      .def_readonly("seed", &ChannelRealization::seed)
      .def("link", &ChannelRealization::link, py::arg("r"), py::arg("q"));
  m.def("sample_channels", &sample_channels, py::arg("config"), py::arg("seed"));
  m.def("make_realization", &make_realization, py::arg("config"), py::arg("H"));

  py::class_<LinkSVD>(m, "LinkSVD")
      .def_readonly("U", &LinkSVD::U)
      .def_readonly("sigma", &LinkSVD::sigma)
      .def_readonly("V", &LinkSVD::V);
  m.def("svd_decompose", &svd_decompose, py::arg("H"));

  py::class_<EffectiveNetwork>(m, "EffectiveNetwork")
      .def_readonly("config", &EffectiveNetwork::config)
      .def_readonly("svd", &EffectiveNetwork::svd)
      .def_readonly("gain", &EffectiveNetwork::gain)
      .def_readonly("sigma_sq", &EffectiveNetwork::sigma_sq)
      .def_readonly("noise_floor", &EffectiveNetwork::noise_floor)
      .def("users", &EffectiveNetwork::users);
  m.def("build_effective_network", &build_effective_network, py::arg("realization"), py::arg("config"));

  py::class_<PowerProfile>(m, "PowerProfile")
      .def(py::init<>())
      .def(py::init([](std::vector<Eigen::VectorXd> power) { return PowerProfile{std::move(power)}; }),
           py::arg("power"))
      .def_readwrite("power", &PowerProfile::power)
      .def("stacked", &PowerProfile::stacked)
      .def("distance", &PowerProfile::distance, py::arg("other"));
  m.def("is_feasible", &is_feasible, py::arg("profile"), py::arg("config"), py::arg("slack") = 1e-9);
  m.def("uniform_profile", &uniform_profile, py::arg("config"));
  m.def("strongest_mode_profile", &strongest_mode_profile, py::arg("config"));
  m.def(
      "random_profile",
      [](const NetworkConfig& config, std::uint64_t seed) {
        Rng rng(seed);
        return random_profile(config, rng);
      },
      py::arg("config"), py::arg("seed"));

  py::class_<WaterfillResult>(m, "WaterfillResult")
      .def_readonly("power", &WaterfillResult::power)
      .def_readonly("level", &WaterfillResult::level)
      .def_readonly("active", &WaterfillResult::active);
  m.def("water_level", &water_level, py::arg("floors"), py::arg("budget"));
  m.def("interference_plus_noise", &interference_plus_noise, py::arg("net"), py::arg("profile"), py::arg("q"));
  m.def("best_response", &best_response, py::arg("net"), py::arg("profile"), py::arg("q"));
  m.def("user_rate", &user_rate, py::arg("power"), py::arg("floors"));
  m.def("user_rates", &user_rates, py::arg("net"), py::arg("profile"));
  m.def("sum_rate", &sum_rate, py::arg("net"), py::arg("profile"));

  m.def("interference_matrix", [](const EffectiveNetwork& net) { return build_interference_matrix(net).M; },
        py::arg("net"));
  m.def("max_row_sum", &max_row_sum, py::arg("M"));
  m.def("max_col_sum", &max_col_sum, py::arg("M"));
  m.def("spectral_radius", &spectral_radius, py::arg("M"), py::arg("tol") = 1e-9);

  py::class_<UniquenessCertificate>(m, "UniquenessCertificate")
      .def_readonly("row_norm", &UniquenessCertificate::row_norm)
      .def_readonly("col_norm", &UniquenessCertificate::col_norm)
      .def_readonly("spectral_radius", &UniquenessCertificate::spectral_radius)
      .def_readonly("sum_13", &UniquenessCertificate::sum_13)
      .def_readonly("sum_14", &UniquenessCertificate::sum_14)
      .def_readonly("cond_13", &UniquenessCertificate::cond_13)
      .def_readonly("cond_14", &UniquenessCertificate::cond_14)
      .def_readonly("norm_unique", &UniquenessCertificate::norm_unique)
      .def_readonly("spectral_unique", &UniquenessCertificate::spectral_unique)
      .def_readonly("modulus", &UniquenessCertificate::modulus);
  m.def("certify", &certify, py::arg("net"), py::arg("spectral_tol") = 1e-9);

  py::enum_<ScheduleKind>(m, "ScheduleKind")
      .value("jacobi", ScheduleKind::jacobi)
      .value("gauss_seidel", ScheduleKind::gauss_seidel)
      .value("random_async", ScheduleKind::random_async);

  py::class_<Schedule>(m, "Schedule")
      .def_readonly("kind", &Schedule::kind)
      .def_readonly("users", &Schedule::users)
      .def_readonly("it_max", &Schedule::it_max)
      .def_readonly("delay_bound", &Schedule::delay_bound)
      .def_readonly("update_bound", &Schedule::update_bound)
      .def("updates_at", &Schedule::updates_at, py::arg("n"), py::arg("q"))
      .def("read_time", &Schedule::read_time, py::arg("n"), py::arg("q"), py::arg("r"));
  m.def("make_schedule", &make_schedule, py::arg("kind"), py::arg("users"), py::arg("it_max"), py::arg("seed") = 0,
        py::arg("delay_bound") = 0, py::arg("update_bound") = 1);

  py::class_<GameTrace>(m, "GameTrace")
      .def_readonly("profiles", &GameTrace::profiles)
      .def_readonly("step_change", &GameTrace::step_change)
      .def_readonly("residual", &GameTrace::residual)
      .def_readonly("converged", &GameTrace::converged)
      .def_readonly("iterations_used", &GameTrace::iterations_used)
      .def_readonly("steps_executed", &GameTrace::steps_executed)
      .def_readonly("final_rates", &GameTrace::final_rates)
      .def_readonly("nash_gap", &GameTrace::nash_gap)
      .def_property_readonly("final_profile", &GameTrace::final_profile);
  m.def("run_game", &run_game, py::arg("net"), py::arg("schedule"), py::arg("p0"), py::arg("epsilon") = 1e-6);
  m.def("check_nash", &check_nash, py::arg("net"), py::arg("profile"));

  py::enum_<SweepVariable>(m, "SweepVariable")
      .value("cross_distance", SweepVariable::cross_distance)
      .value("power_budget_db", SweepVariable::power_budget_db);

  py::class_<SweepSpec>(m, "SweepSpec")
      .def(py::init<>())
      .def_readwrite("users", &SweepSpec::users)
      .def_readwrite("tx_antennas", &SweepSpec::tx_antennas)
      .def_readwrite("rx_antennas", &SweepSpec::rx_antennas)
      .def_readwrite("direct_distance", &SweepSpec::direct_distance)
      .def_readwrite("pathloss_exponent", &SweepSpec::pathloss_exponent)
      .def_readwrite("noise_power", &SweepSpec::noise_power)
      .def_readwrite("power_budget_db", &SweepSpec::power_budget_db)
      .def_readwrite("cross_distance", &SweepSpec::cross_distance)
      .def_readwrite("normalized_pathloss_db", &SweepSpec::normalized_pathloss_db)
      .def_readwrite("literal_pathloss_ratio", &SweepSpec::literal_pathloss_ratio)
      .def_readwrite("variable", &SweepSpec::variable)
      .def_readwrite("values", &SweepSpec::values)
      .def_readwrite("trials", &SweepSpec::trials)
      .def_readwrite("it_max", &SweepSpec::it_max)
      .def_readwrite("schedule", &SweepSpec::schedule)
      .def_readwrite("delay_bound", &SweepSpec::delay_bound)
      .def_readwrite("update_bound", &SweepSpec::update_bound)
      .def_readwrite("base_seed", &SweepSpec::base_seed)
      .def_readwrite("epsilon", &SweepSpec::epsilon)
      .def_readwrite("agreement_tol", &SweepSpec::agreement_tol)
      .def_readwrite("max_resamples", &SweepSpec::max_resamples);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("value", &SweepRow::value)
      .def_readonly("p_norm_cond", &SweepRow::p_norm_cond)
      .def_readonly("p_paper_cond", &SweepRow::p_paper_cond)
      .def_readonly("p_spectral", &SweepRow::p_spectral)
      .def_readonly("p_empirical_unique", &SweepRow::p_empirical_unique)
      .def_readonly("mean_sum_rate", &SweepRow::mean_sum_rate)
      .def_readonly("mean_iterations", &SweepRow::mean_iterations)
      .def_readonly("excluded_trials", &SweepRow::excluded_trials)
      .def_readonly("sum_rate_stderr", &SweepRow::sum_rate_stderr)
      .def_readonly("valid_trials", &SweepRow::valid_trials);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("spec", &SweepResult::spec)
      .def_readonly("rows", &SweepResult::rows);

  m.def("sweep_uniqueness", &sweep_uniqueness, py::arg("spec"), py::arg("jobs") = 1, py::arg("keep_trials") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def("sweep_sumrate", &sweep_sumrate, py::arg("spec"), py::arg("jobs") = 1, py::arg("keep_trials") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def("write_csv", &write_csv, py::arg("result"), py::arg("path"));
  m.def("read_csv", &read_csv, py::arg("path"));

  m.def(
      "load_sweep_spec", [](const std::filesystem::path& path) { return parse_sweep_document(load_json_file(path)); },
      py::arg("path"));
}

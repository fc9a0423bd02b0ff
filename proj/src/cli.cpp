#include "iwf/cli.hpp"

#include "iwf/config_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace iwf {

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> schedule;
  std::size_t jobs = 1;
  std::optional<std::size_t> trials;
  bool quiet = false;
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

void add_common(CLI::App* sub, Options& o, bool sweep) {
  sub->add_option("--config", o.config, "JSON configuration document")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, sweep ? "CSV output path" : "optional CSV export path");
  sub->add_option("--seed", o.seed, "override the seed in the document");
  sub->add_option("--schedule", o.schedule, "jacobi | gauss-seidel | async");
  sub->add_flag("--quiet", o.quiet, "suppress timing lines");
  if (sweep) {
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--trials", o.trials, "override realizations per point")->check(CLI::PositiveNumber);
  }
}

NetworkDocument load_network(const Options& o) {
  NetworkDocument doc = parse_network_document(load_json_file(o.config));
  if (o.seed) doc.seed = *o.seed;
  if (o.schedule) doc.game.schedule = parse_schedule_kind(*o.schedule);
  return doc;
}

int cmd_certify(const Options& o, std::ostream& out) {
  const NetworkDocument doc = load_network(o);
  const EffectiveNetwork net = build_effective_network(document_channels(doc), doc.config);
  const UniquenessCertificate c = certify(net);
  out << "row_norm " << fmt(c.row_norm) << '\n'
      << "col_norm " << fmt(c.col_norm) << '\n'
      << "spectral_radius " << fmt(c.spectral_radius) << '\n'
      << "sum_13 " << fmt(c.sum_13) << '\n'
      << "sum_14 " << fmt(c.sum_14) << '\n'
      << "cond_13 " << yes_no(c.cond_13) << '\n'
      << "cond_14 " << yes_no(c.cond_14) << '\n'
      << "norm_unique " << yes_no(c.norm_unique) << '\n'
      << "spectral_unique " << yes_no(c.spectral_unique) << '\n'
      << "modulus " << (c.modulus ? fmt(*c.modulus) : std::string("none")) << '\n'
      << "unique " << yes_no(c.spectral_unique) << '\n';
  if (!o.out.empty()) write_matrix_csv(build_interference_matrix(net).M, o.out);
  return 0;
}

int cmd_play(const Options& o, std::ostream& out) {
  const NetworkDocument doc = load_network(o);
  const EffectiveNetwork net = build_effective_network(document_channels(doc), doc.config);
  const Schedule schedule = make_schedule(doc.game.schedule, doc.config.users, doc.game.it_max,
                                          mix_seed(doc.seed, 0xA5), doc.game.delay_bound, doc.game.update_bound);
  const PowerProfile p0 = initial_profile(doc.config, doc.game.init, doc.seed);
  const GameTrace trace = run_game(net, schedule, p0, doc.game.epsilon);

  double total = 0.0;
  out << "schedule " << to_string(schedule.kind) << '\n'
      << "converged " << yes_no(trace.converged) << '\n'
      << "iterations " << trace.iterations_used << '\n'
      << "steps " << trace.steps_executed << '\n'
      << "nash_gap " << fmt(trace.nash_gap) << '\n';
  for (std::size_t q = 0; q < trace.final_rates.size(); ++q) {
    out << "rate[" << q << "] " << fmt(trace.final_rates[q]) << '\n';
    total += trace.final_rates[q];
  }
  out << "sum_rate " << fmt(total) << '\n';
  for (std::size_t q = 0; q < net.users(); ++q) {
    out << "power[" << q << "]";
    for (Eigen::Index i = 0; i < trace.final_profile().power[q].size(); ++i) {
      out << ' ' << fmt(trace.final_profile().power[q](i));
    }
    out << '\n';
  }
  if (!o.out.empty()) write_trace_csv(trace, o.out);
  return 0;
}

int cmd_sweep(const Options& o, bool uniqueness, std::ostream& out) {
  SweepSpec spec = parse_sweep_document(load_json_file(o.config));
  if (o.seed) spec.base_seed = *o.seed;
  if (o.schedule) spec.schedule = parse_schedule_kind(*o.schedule);
  if (o.trials) spec.trials = *o.trials;
  const SweepResult result = uniqueness ? sweep_uniqueness(spec, o.jobs) : sweep_sumrate(spec, o.jobs);

  write_csv(result, o.out);
  {
    const std::string meta_path = o.out + ".meta.json";
    std::ofstream meta(meta_path);
    if (!meta) throw std::runtime_error("cannot open '" + meta_path + "' for writing");
    meta << to_json(result.spec).dump(2) << '\n';
  }

  out << kSweepCsvHeader << '\n';
  for (const auto& r : result.rows) {
    out << fmt(r.value) << ',' << fmt(r.p_norm_cond) << ',' << fmt(r.p_paper_cond) << ',' << fmt(r.p_spectral) << ','
        << fmt(r.p_empirical_unique) << ',' << fmt(r.mean_sum_rate) << ',' << fmt(r.mean_iterations) << ','
        << r.excluded_trials << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterative water-filling power control for MIMO interference channels"};
  app.name("iwfsim");
  app.require_subcommand(1);

  Options o;
  auto* play = app.add_subcommand("play", "run one power-control game and report rates");
  auto* cert = app.add_subcommand("certify", "evaluate the equilibrium uniqueness certificates");
  auto* su = app.add_subcommand("sweep-uniqueness", "Monte Carlo uniqueness probability vs cross distance");
  auto* ss = app.add_subcommand("sweep-sumrate", "Monte Carlo mean sum-rate vs power budget");
  add_common(play, o, false);
  add_common(cert, o, false);
  add_common(su, o, true);
  add_common(ss, o, true);
  su->get_option("--out")->required();
  ss->get_option("--out")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  int status = 0;
  try {
    if (*play) status = cmd_play(o, out);
    else if (*cert) status = cmd_certify(o, out);
    else if (*su) status = cmd_sweep(o, true, out);
    else status = cmd_sweep(o, false, out);
  } catch (const ConfigError& e) {
    err << "iwfsim: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "iwfsim: invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "iwfsim: " << e.what() << '\n';
    return 1;
  }
  if (!o.quiet) {
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    err << "elapsed " << fmt(took.count()) << " s\n";
  }
  return status;
}

}  // namespace iwf

#include "iwf/expharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace iwf {

SweepVariable parse_sweep_variable(std::string_view name) {
  if (name == "cross_distance") return SweepVariable::cross_distance;
  if (name == "power_budget_db") return SweepVariable::power_budget_db;
  throw ConfigError("'sweep_variable' must be cross_distance or power_budget_db, got '" + std::string(name) + "'");
}

std::string_view to_string(SweepVariable v) {
  return v == SweepVariable::cross_distance ? "cross_distance" : "power_budget_db";
}

void validate_sweep_spec(const SweepSpec& spec) {
  if (spec.users < 1) throw ConfigError("'users' must be at least 1");
  if (spec.tx_antennas < 1) throw ConfigError("'tx_antennas' must be at least 1");
  if (spec.rx_antennas < 1) throw ConfigError("'rx_antennas' must be at least 1");
  if (!(spec.direct_distance > 0.0)) throw ConfigError("'direct_distance' must be positive");
  if (!(spec.pathloss_exponent >= 0.0)) throw ConfigError("'pathloss_exponent' must be non-negative");
  if (!(spec.noise_power > 0.0)) throw ConfigError("'noise_power' must be positive");
  if (!std::isfinite(spec.power_budget_db)) throw ConfigError("'power_budget_db' must be finite");
  if (spec.cross_distance && !(*spec.cross_distance > 0.0)) throw ConfigError("'cross_distance' must be positive");
  if (spec.trials < 1) throw ConfigError("'trials' must be at least 1");
  if (spec.it_max < 1) throw ConfigError("'it_max' must be at least 1");
  if (spec.values.empty()) throw ConfigError("'sweep_values' must not be empty");
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    if (!std::isfinite(spec.values[i])) throw ConfigError("'sweep_values' must be finite");
    if (i > 0 && !(spec.values[i] > spec.values[i - 1])) {
      throw ConfigError("'sweep_values' must be strictly increasing");
    }
  }
  if (spec.variable == SweepVariable::cross_distance && !(spec.values.front() > 0.0)) {
    throw ConfigError("'sweep_values' are distances and must be positive");
  }
  if (spec.schedule == ScheduleKind::random_async && spec.update_bound < 1) {
    throw ConfigError("'update_bound' must be at least 1");
  }
  if (!(spec.epsilon > 0.0)) throw ConfigError("'epsilon' must be positive");
  if (!(spec.agreement_tol > 0.0)) throw ConfigError("'agreement_tol' must be positive");
}

double sumrate_cross_distance(const SweepSpec& spec) {
  if (spec.cross_distance) return *spec.cross_distance;
  if (spec.pathloss_exponent == 0.0) return spec.direct_distance;
  const double exponent = (spec.literal_pathloss_ratio ? -1.0 : 1.0) * spec.normalized_pathloss_db / 10.0;
  return spec.direct_distance * std::pow(10.0, exponent / spec.pathloss_exponent);
}

NetworkConfig point_config(const SweepSpec& spec, std::size_t point) {
  const double value = spec.values.at(point);
  double power_db = spec.power_budget_db;
  double cross = 0.0;
  if (spec.variable == SweepVariable::cross_distance) {
    cross = value;
  } else {
    power_db = value;
    cross = sumrate_cross_distance(spec);
  }
  return uniform_config(spec.users, spec.tx_antennas, spec.rx_antennas, std::pow(10.0, power_db / 10.0),
                        spec.noise_power, spec.direct_distance, cross, spec.pathloss_exponent);
}

TrialRecord run_trial(const SweepSpec& spec, std::size_t point, std::size_t trial) {
  TrialRecord rec;
  rec.point = point;
  rec.trial = trial;
  const NetworkConfig config = point_config(spec, point);
  const std::uint64_t trial_seed = mix_seed(mix_seed(spec.base_seed, point), trial);

  std::optional<EffectiveNetwork> net;
  for (std::size_t attempt = 0; attempt <= spec.max_resamples && !net; ++attempt) {
    const std::uint64_t seed = attempt == 0 ? trial_seed : mix_seed(trial_seed, attempt);
    try {
      net = build_effective_network(sample_channels(config, seed), config);
      rec.seed = seed;
      rec.resamples = attempt;
    } catch (const DegenerateChannelError&) {
    }
  }
  if (!net) {
    rec.error = "degenerate channel after " + std::to_string(spec.max_resamples) + " resamples";
    return rec;
  }

  try {
    rec.certificate = certify(*net);
  } catch (const SpectralRadiusError& e) {
    rec.error = e.what();
    return rec;
  }

  const Schedule schedule = make_schedule(spec.schedule, config.users, spec.it_max, mix_seed(rec.seed, 0xA5),
                                          spec.delay_bound, spec.update_bound);
  Rng start_rng(mix_seed(rec.seed, 0x5EED));
  const PowerProfile starts[] = {uniform_profile(config), strongest_mode_profile(config),
                                 random_profile(config, start_rng)};

  std::vector<GameTrace> traces;
  for (const auto& p0 : starts) traces.push_back(run_game(*net, schedule, p0, spec.epsilon));

  rec.converged = std::all_of(traces.begin(), traces.end(), [](const GameTrace& t) { return t.converged; });
  for (std::size_t a = 0; a < traces.size(); ++a) {
    rec.nash_gap = std::max(rec.nash_gap, traces[a].nash_gap);
    for (std::size_t b = a + 1; b < traces.size(); ++b) {
      rec.max_disagreement =
          std::max(rec.max_disagreement, traces[a].final_profile().distance(traces[b].final_profile()));
    }
  }
  rec.empirical_unique = rec.converged && rec.max_disagreement <= spec.agreement_tol;
  for (double r : traces[0].final_rates) rec.sum_rate += r;
  rec.iterations = static_cast<double>(traces[0].iterations_used);
  rec.ok = true;
  return rec;
}

namespace {

SweepRow aggregate(double value, const TrialRecord* first, std::size_t count) {
  SweepRow row;
  row.value = value;
  std::size_t norm = 0, literal = 0, spectral = 0, unique = 0;
  double rate_sum = 0.0, rate_sq = 0.0, iter_sum = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const TrialRecord& t = first[k];
    if (!t.ok) {
      ++row.excluded_trials;
      continue;
    }
    ++row.valid_trials;
    if (t.empirical_unique) {
      ++unique;
      if (t.certificate.norm_unique) ++norm;
      if (t.certificate.cond_13 || t.certificate.cond_14) ++literal;
      if (t.certificate.spectral_unique) ++spectral;
    }
    rate_sum += t.sum_rate;
    rate_sq += t.sum_rate * t.sum_rate;
    iter_sum += t.iterations;
  }
  const double n = static_cast<double>(row.valid_trials);
  if (row.valid_trials == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.p_norm_cond = row.p_paper_cond = row.p_spectral = row.p_empirical_unique = nan;
    row.mean_sum_rate = row.mean_iterations = row.sum_rate_stderr = nan;
    return row;
  }
  row.p_norm_cond = static_cast<double>(norm) / n;
  row.p_paper_cond = static_cast<double>(literal) / n;
  row.p_spectral = static_cast<double>(spectral) / n;
  row.p_empirical_unique = static_cast<double>(unique) / n;
  row.mean_sum_rate = rate_sum / n;
  row.mean_iterations = iter_sum / n;
  if (row.valid_trials > 1) {
    const double var = std::max(0.0, (rate_sq - rate_sum * rate_sum / n) / (n - 1.0));
    row.sum_rate_stderr = std::sqrt(var / n);
  }
  return row;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, std::size_t jobs, bool keep_trials) {
  validate_sweep_spec(spec);
  const std::size_t points = spec.values.size();
  const std::size_t total = points * spec.trials;
  std::vector<TrialRecord> records(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      records[k] = run_trial(spec, k / spec.trials, k % spec.trials);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(total, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  SweepResult result;
  result.spec = spec;
  for (std::size_t p = 0; p < points; ++p) {
    result.rows.push_back(aggregate(spec.values[p], records.data() + p * spec.trials, spec.trials));
  }
  if (keep_trials) result.trials = std::move(records);
  return result;
}

SweepResult sweep_uniqueness(const SweepSpec& spec, std::size_t jobs, bool keep_trials) {
  if (spec.variable != SweepVariable::cross_distance) {
    throw ConfigError("'sweep_variable' must be cross_distance for a uniqueness sweep");
  }
  return run_sweep(spec, jobs, keep_trials);
}

SweepResult sweep_sumrate(const SweepSpec& spec, std::size_t jobs, bool keep_trials) {
  if (spec.variable != SweepVariable::power_budget_db) {
    throw ConfigError("'sweep_variable' must be power_budget_db for a sum-rate sweep");
  }
  return run_sweep(spec, jobs, keep_trials);
}

void write_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << kSweepCsvHeader << '\n';
  char buf[512];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%zu", r.value, r.p_norm_cond, r.p_paper_cond,
                  r.p_spectral, r.p_empirical_unique, r.mean_sum_rate, r.mean_iterations, r.excluded_trials);
    out << buf << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<SweepRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) {
    throw std::runtime_error("'" + path.string() + "' does not start with the sweep CSV header");
  }
  std::vector<SweepRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 8) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 8 columns");
    }
    auto num = [&](std::size_t i) { return std::strtod(cells[i].c_str(), nullptr); };
    SweepRow r;
    r.value = num(0);
    r.p_norm_cond = num(1);
    r.p_paper_cond = num(2);
    r.p_spectral = num(3);
    r.p_empirical_unique = num(4);
    r.mean_sum_rate = num(5);
    r.mean_iterations = num(6);
    r.excluded_trials = std::strtoull(cells[7].c_str(), nullptr, 10);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace iwf

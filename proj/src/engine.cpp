#include "iwf/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

namespace iwf {

ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "jacobi") return ScheduleKind::jacobi;
  if (name == "gauss_seidel" || name == "gauss-seidel") return ScheduleKind::gauss_seidel;
  if (name == "random_async" || name == "async") return ScheduleKind::random_async;
  throw std::invalid_argument("unknown schedule kind '" + std::string(name) +
                              "' (expected jacobi, gauss-seidel or async)");
}

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::jacobi: return "jacobi";
    case ScheduleKind::gauss_seidel: return "gauss_seidel";
    case ScheduleKind::random_async: return "random_async";
  }
  return "unknown";
}

std::size_t Schedule::read_time(std::size_t n, std::size_t q, std::size_t r) const {
  if (staleness.empty() || q == r) return n;
  return n - staleness[n][q][r];
}

Schedule make_schedule(ScheduleKind kind, std::size_t users, std::size_t it_max, std::uint64_t seed,
                       std::size_t delay_bound, std::size_t update_bound) {
  if (users == 0) throw std::invalid_argument("make_schedule: need at least one user");
  if (it_max == 0) throw std::invalid_argument("make_schedule: it_max must be at least 1");

  Schedule s;
  s.kind = kind;
  s.users = users;
  s.it_max = it_max;
  s.seed = seed;
  s.updates.assign(it_max, std::vector<char>(users, 0));

  switch (kind) {
    case ScheduleKind::jacobi:
      s.delay_bound = 0;
      s.update_bound = 1;
      for (auto& row : s.updates) std::fill(row.begin(), row.end(), 1);
      break;

    case ScheduleKind::gauss_seidel:
      s.delay_bound = 0;
      s.update_bound = users;
      for (std::size_t n = 0; n < it_max; ++n) s.updates[n][n % users] = 1;
      break;

    case ScheduleKind::random_async: {
      if (update_bound == 0) throw std::invalid_argument("make_schedule: update_bound must be at least 1");
      s.delay_bound = delay_bound;
      s.update_bound = update_bound;
      Rng rng(seed);
      std::vector<std::size_t> idle(users, 0);
      s.staleness.assign(it_max, std::vector<std::vector<std::size_t>>(users, std::vector<std::size_t>(users, 0)));
      for (std::size_t n = 0; n < it_max; ++n) {
        for (std::size_t q = 0; q < users; ++q) {
          const bool coin = rng.uniform() < 0.5;
          const bool forced = idle[q] + 1 >= update_bound;
          if (coin || forced) {
            s.updates[n][q] = 1;
            idle[q] = 0;
          } else {
            ++idle[q];
          }
          const std::size_t max_delay = std::min(delay_bound, n);
          for (std::size_t r = 0; r < users; ++r) {
            const std::size_t d = rng.below(max_delay + 1);
            s.staleness[n][q][r] = (r == q || !s.updates[n][q]) ? 0 : d;
          }
        }
      }
      break;
    }
  }
  return s;
}

GameTrace run_game(const EffectiveNetwork& net, const Schedule& schedule, const PowerProfile& p0, double epsilon) {
  const std::size_t Q = net.users();
  if (schedule.users != Q) throw std::invalid_argument("run_game: schedule user count does not match network");
  if (!is_feasible(p0, net.config)) throw std::invalid_argument("run_game: start profile is not feasible");
  if (!(epsilon > 0.0)) throw std::invalid_argument("run_game: epsilon must be positive");

  GameTrace trace;
  trace.profiles.reserve(schedule.it_max + 1);
  trace.profiles.push_back(p0);

  constexpr std::size_t never = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> last_update(Q, never);

  for (std::size_t n = 0; n < schedule.it_max; ++n) {
    const PowerProfile& current = trace.profiles.back();
    PowerProfile next = current;
    std::vector<std::size_t> who;
    for (std::size_t q = 0; q < Q; ++q) {
      if (!schedule.updates_at(n, q)) continue;
      PowerProfile view = current;
      for (std::size_t r = 0; r < Q; ++r) {
        if (r != q) view.power[r] = trace.profiles[schedule.read_time(n, q, r)].power[r];
      }
      next.power[q] = best_response(net, view, q);
      who.push_back(q);
      last_update[q] = n;
    }

    trace.step_change.push_back(next.distance(current));
    trace.updated.push_back(std::move(who));
    trace.profiles.push_back(std::move(next));
    trace.steps_executed = n + 1;

    double residual = std::numeric_limits<double>::infinity();
    std::size_t window_start = never;
    if (std::none_of(last_update.begin(), last_update.end(), [](auto t) { return t == never; })) {
      window_start = *std::min_element(last_update.begin(), last_update.end());
      if (n >= schedule.delay_bound) window_start = std::min(window_start, n - schedule.delay_bound);
      else window_start = never;
    }
    if (window_start != never) {
      residual = *std::max_element(trace.step_change.begin() + static_cast<std::ptrdiff_t>(window_start),
                                   trace.step_change.end());
    }
    trace.residual.push_back(residual);
    if (residual < epsilon) {
      trace.converged = true;
      trace.iterations_used = window_start;
      break;
    }
  }
  if (!trace.converged) trace.iterations_used = trace.steps_executed;

  trace.final_rates = user_rates(net, trace.final_profile());
  trace.nash_gap = check_nash(net, trace.final_profile());
  return trace;
}

double check_nash(const EffectiveNetwork& net, const PowerProfile& profile) {
  double gap = 0.0;
  for (std::size_t q = 0; q < net.users(); ++q) {
    gap = std::max(gap, (profile.power[q] - best_response(net, profile, q)).cwiseAbs().maxCoeff());
  }
  return gap;
}

PowerProfile uniform_profile(const NetworkConfig& config) {
  PowerProfile p;
  for (std::size_t q = 0; q < config.users; ++q) {
    const int nt = config.tx_antennas[q];
    p.power.push_back(Eigen::VectorXd::Constant(nt, config.power_budget[q] / nt));
  }
  return p;
}

PowerProfile strongest_mode_profile(const NetworkConfig& config) {
  PowerProfile p;
  for (std::size_t q = 0; q < config.users; ++q) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(config.tx_antennas[q]);
    v(0) = config.power_budget[q];
    p.power.push_back(std::move(v));
  }
  return p;
}

PowerProfile random_profile(const NetworkConfig& config, Rng& rng) {
  PowerProfile p;
  for (std::size_t q = 0; q < config.users; ++q) {
    Eigen::VectorXd w(config.tx_antennas[q]);
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = -std::log1p(-rng.uniform());
    const double fraction = 1.0 - rng.uniform();
    const double total = w.sum();
    if (total > 0.0) {
      w *= fraction * config.power_budget[q] / total;
    } else {
      w.setConstant(fraction * config.power_budget[q] / static_cast<double>(w.size()));
    }
    p.power.push_back(std::move(w));
  }
  return p;
}

void write_trace_csv(const GameTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << "iteration,user,antenna,power,residual\n";
  char buf[128];
  for (std::size_t n = 0; n < trace.profiles.size(); ++n) {
    const auto& prof = trace.profiles[n];
    for (std::size_t q = 0; q < prof.users(); ++q) {
      for (Eigen::Index i = 0; i < prof.power[q].size(); ++i) {
        if (n == 0) {
          std::snprintf(buf, sizeof buf, "%zu,%zu,%td,%.9g,", n, q, static_cast<std::ptrdiff_t>(i), prof.power[q](i));
        } else {
          std::snprintf(buf, sizeof buf, "%zu,%zu,%td,%.9g,%.9g", n, q, static_cast<std::ptrdiff_t>(i),
                        prof.power[q](i), trace.residual[n - 1]);
        }
        out << buf << '\n';
      }
    }
  }
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace iwf

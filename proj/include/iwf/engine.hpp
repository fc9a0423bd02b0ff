#pragma once

#include "iwf/rng.hpp"
#include "iwf/waterfill.hpp"

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

namespace iwf {

enum class ScheduleKind { jacobi, gauss_seidel, random_async };

/// Accepts "jacobi", "gauss_seidel"/"gauss-seidel", "random_async"/"async".
ScheduleKind parse_schedule_kind(std::string_view name);
std::string_view to_string(ScheduleKind kind);

/// Who updates at each step and how stale their view of the others is.
///
/// Steps are numbered n = 0 .. it_max-1; step n produces profile n+1.
/// A user updating at step n reads user r's powers as of profile
/// read_time(n, q, r) = n - staleness, never older than n - delay_bound.
struct Schedule {
  ScheduleKind kind = ScheduleKind::jacobi;
  std::size_t users = 0;
  std::size_t it_max = 0;
  std::size_t delay_bound = 0;
  std::size_t update_bound = 1;
  std::uint64_t seed = 0;
  std::vector<std::vector<char>> updates;                      // [n][q]
  std::vector<std::vector<std::vector<std::size_t>>> staleness;  // [n][q][r], async only

  bool updates_at(std::size_t n, std::size_t q) const { return updates[n][q] != 0; }
  std::size_t read_time(std::size_t n, std::size_t q, std::size_t r) const;
};

/// Builds the update pattern.
///
/// jacobi: everyone every step, no delay (delay_bound and update_bound are
/// forced to 0 and 1). gauss_seidel: user n mod Q at step n, reading the
/// latest values (forced to 0 and Q). random_async: each user updates with
/// probability 1/2, forced when it has been idle for update_bound - 1 steps;
/// staleness is uniform on 0..min(delay_bound, n).
/// Throws std::invalid_argument for users == 0, it_max == 0, or an async
/// update_bound of 0.
Schedule make_schedule(ScheduleKind kind, std::size_t users, std::size_t it_max, std::uint64_t seed = 0,
                       std::size_t delay_bound = 0, std::size_t update_bound = 1);

struct GameTrace {
  std::vector<PowerProfile> profiles;             // profiles[0] is the start point
  std::vector<std::vector<std::size_t>> updated;  // users updating at step n
  std::vector<double> step_change;                // ||p(n+1) - p(n)||_inf
  std::vector<double> residual;                   // max step_change over the window ending at n; inf if none
  bool converged = false;
  /// Steps taken before the confirming window began.
  std::size_t iterations_used = 0;
  std::size_t steps_executed = 0;
  std::vector<double> final_rates;
  double nash_gap = 0.0;

  const PowerProfile& final_profile() const { return profiles.back(); }
};

/// Plays the water-filling game under schedule from p0.
///
/// Convergence is declared at step n when there is a window of steps ending
/// at n, at least delay_bound + 1 long, in which every user updated and no
/// step moved the profile by epsilon or more. Running out of steps is
/// reported through converged == false.
GameTrace run_game(const EffectiveNetwork& net, const Schedule& schedule, const PowerProfile& p0,
                   double epsilon = 1e-6);

/// max_q ||p_q - best_response_q(profile)||_inf; zero exactly at a Nash point.
double check_nash(const EffectiveNetwork& net, const PowerProfile& profile);
inline bool is_nash(const EffectiveNetwork& net, const PowerProfile& profile, double tol) {
  return check_nash(net, profile) <= tol;
}

// Start points.
PowerProfile uniform_profile(const NetworkConfig& config);
PowerProfile strongest_mode_profile(const NetworkConfig& config);
/// A random direction on the simplex scaled by a random fraction of the budget.
PowerProfile random_profile(const NetworkConfig& config, Rng& rng);

/// Long format: iteration,user,antenna,power,residual. Row block n is profile n;
/// residual is that of the step that produced it (blank for the start point).
void write_trace_csv(const GameTrace& trace, const std::filesystem::path& path);

}  // namespace iwf

#pragma once

#include "iwf/contraction.hpp"
#include "iwf/engine.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace iwf {

enum class SweepVariable { cross_distance, power_budget_db };

SweepVariable parse_sweep_variable(std::string_view name);
std::string_view to_string(SweepVariable v);

/// A Monte Carlo sweep over one network parameter.
///
/// Every user shares the (tx_antennas, rx_antennas) scenario, budget and
/// noise. Powers in dB are relative to unit noise power.
struct SweepSpec {
  std::size_t users = 4;
  int tx_antennas = 2;
  int rx_antennas = 2;
  double direct_distance = 15.0;
  double pathloss_exponent = 2.5;
  double noise_power = 1.0;
  /// Budget used by cross_distance sweeps.
  double power_budget_db = 10.0;
  /// Cross distance used by power_budget_db sweeps, derived from
  /// normalized_pathloss_db unless set explicitly.
  std::optional<double> cross_distance;
  /// Cross links are this many dB weaker than direct links in power sweeps.
  double normalized_pathloss_db = 10.0;
  /// Read the normalized path loss as (d_qq/d_rq)^gamma = +10 dB literally,
  /// which makes cross links the stronger ones.
  bool literal_pathloss_ratio = false;

  SweepVariable variable = SweepVariable::cross_distance;
  std::vector<double> values{15.0, 25.0, 35.0, 45.0, 55.0};
  std::size_t trials = 300;
  std::size_t it_max = 100;
  ScheduleKind schedule = ScheduleKind::jacobi;
  std::size_t delay_bound = 0;
  std::size_t update_bound = 1;
  std::uint64_t base_seed = 1;

  double epsilon = 1e-6;         // game convergence threshold
  double agreement_tol = 1e-5;   // cross-initialization agreement
  std::size_t max_resamples = 16;
};

/// Throws ConfigError naming the offending field.
void validate_sweep_spec(const SweepSpec& spec);

/// Cross distance in power sweeps: (d_qq / d_rq)^gamma = 10^(-dB/10), or
/// +dB/10 under the literal reading.
double sumrate_cross_distance(const SweepSpec& spec);

/// Network at sweep point `point`.
NetworkConfig point_config(const SweepSpec& spec, std::size_t point);

struct TrialRecord {
  std::size_t point = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // seed of the channel draw actually used
  std::size_t resamples = 0;
  bool ok = false;
  std::string error;

  UniquenessCertificate certificate;
  bool converged = false;          // every initialization converged
  bool empirical_unique = false;   // ... and all limits agree within agreement_tol
  double max_disagreement = 0.0;   // pairwise max-norm spread of the limits
  double sum_rate = 0.0;           // at the limit reached from the uniform start
  double iterations = 0.0;         // iterations_used from the uniform start
  double nash_gap = 0.0;           // worst over the initializations
};

/// Runs one channel draw: certificate plus the game from three starts
/// (uniform split, all power on the strongest mode, random). Seeds derive
/// from (base_seed, point, trial); a rank-deficient draw is redrawn up to
/// max_resamples times before the record is marked failed.
TrialRecord run_trial(const SweepSpec& spec, std::size_t point, std::size_t trial);

struct SweepRow {
  double value = 0.0;
  double p_norm_cond = 0.0;
  double p_paper_cond = 0.0;
  double p_spectral = 0.0;
  double p_empirical_unique = 0.0;
  double mean_sum_rate = 0.0;
  double mean_iterations = 0.0;
  std::size_t excluded_trials = 0;
  // Not part of the CSV.
  double sum_rate_stderr = 0.0;
  std::size_t valid_trials = 0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  /// Every trial, point-major, when requested.
  std::vector<TrialRecord> trials;
};

/// Runs every (point, trial) with up to `jobs` worker threads. Output does
/// not depend on jobs.
SweepResult run_sweep(const SweepSpec& spec, std::size_t jobs = 1, bool keep_trials = false);
/// Probability of a certified-and-reached unique equilibrium vs cross distance.
SweepResult sweep_uniqueness(const SweepSpec& spec, std::size_t jobs = 1, bool keep_trials = false);
/// Mean equilibrium sum-rate vs per-user power budget in dB.
SweepResult sweep_sumrate(const SweepSpec& spec, std::size_t jobs = 1, bool keep_trials = false);

/// Column order of the sweep CSV.
inline constexpr const char* kSweepCsvHeader =
    "sweep_value,p_norm_cond,p_paper_cond,p_spectral,p_empirical_unique,mean_sum_rate,mean_iterations,"
    "excluded_trials";

void write_csv(const SweepResult& result, const std::filesystem::path& path);
std::vector<SweepRow> read_csv(const std::filesystem::path& path);

}  // namespace iwf

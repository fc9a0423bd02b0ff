#pragma once

#include "iwf/precode.hpp"

#include <vector>

namespace iwf {

/// Per-user transmit powers over the precoded streams, linear units.
///
/// power[q] has length nt[q]. Entry i is the power on the i-th column of V_q,
/// i.e. the i-th strongest eigen-channel of the direct link.
struct PowerProfile {
  std::vector<Eigen::VectorXd> power;

  std::size_t users() const { return power.size(); }
  /// Concatenation over users in index order.
  Eigen::VectorXd stacked() const;
  static PowerProfile from_stacked(const Eigen::VectorXd& stacked, const NetworkConfig& config);
  /// Max-norm distance to another profile of the same shape.
  double distance(const PowerProfile& other) const;
};

/// Non-negative entries, per-user sum within budget + slack, shapes matching config.
bool is_feasible(const PowerProfile& profile, const NetworkConfig& config, double slack = 1e-9);

struct WaterfillResult {
  Eigen::VectorXd power;  // (level - floor)^+, same order as the input floors
  double level = 0.0;
  std::vector<Eigen::Index> active;  // indices with positive power, ascending
};

/// Exact water-filling over parallel channels with floors c and budget P.
///
/// Sorts the floors ascending and takes the largest k whose candidate level
/// (P + c_1 + ... + c_k) / k still exceeds c_k. The budget is always spent in
/// full. Throws std::invalid_argument for empty or non-finite floors or a
/// non-positive budget.
WaterfillResult water_level(const Eigen::VectorXd& floors, double budget);

/// Normalized interference-plus-noise c_q seen by user q under profile.
Eigen::VectorXd interference_plus_noise(const EffectiveNetwork& net, const PowerProfile& profile, std::size_t q);

/// Water-filling response of user q to the other users' powers in profile.
/// Antennas beyond the nu_q eigen-channels get zero power.
Eigen::VectorXd best_response(const EffectiveNetwork& net, const PowerProfile& profile, std::size_t q);

/// sum_i log2(1 + p_i / c_i) over the eigen-channels. p may be longer than c;
/// the extra antennas carry no rate.
double user_rate(const Eigen::VectorXd& power, const Eigen::VectorXd& floors);

std::vector<double> user_rates(const EffectiveNetwork& net, const PowerProfile& profile);
double sum_rate(const EffectiveNetwork& net, const PowerProfile& profile);

}  // namespace iwf

#include "iwf/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace iwf {

Eigen::VectorXd PowerProfile::stacked() const {
  Eigen::Index total = 0;
  for (const auto& p : power) total += p.size();
  Eigen::VectorXd out(total);
  Eigen::Index at = 0;
  for (const auto& p : power) {
    out.segment(at, p.size()) = p;
    at += p.size();
  }
  return out;
}

PowerProfile PowerProfile::from_stacked(const Eigen::VectorXd& stacked, const NetworkConfig& config) {
  if (stacked.size() != config.total_tx_antennas()) {
    throw std::invalid_argument("stacked profile length does not match total transmit antennas");
  }
  PowerProfile out;
  Eigen::Index at = 0;
  for (std::size_t q = 0; q < config.users; ++q) {
    out.power.push_back(stacked.segment(at, config.tx_antennas[q]));
    at += config.tx_antennas[q];
  }
  return out;
}

double PowerProfile::distance(const PowerProfile& other) const {
  double d = 0.0;
  for (std::size_t q = 0; q < power.size(); ++q) {
    if (power[q].size() > 0) d = std::max(d, (power[q] - other.power[q]).cwiseAbs().maxCoeff());
  }
  return d;
}

bool is_feasible(const PowerProfile& profile, const NetworkConfig& config, double slack) {
  if (profile.users() != config.users) return false;
  for (std::size_t q = 0; q < config.users; ++q) {
    const auto& p = profile.power[q];
    if (p.size() != config.tx_antennas[q]) return false;
    if (!p.allFinite() || (p.array() < 0.0).any()) return false;
    if (p.sum() > config.power_budget[q] + slack) return false;
  }
  return true;
}

WaterfillResult water_level(const Eigen::VectorXd& floors, double budget) {
  const Eigen::Index n = floors.size();
  if (n == 0) throw std::invalid_argument("water_level: no channels");
  if (!(budget > 0.0) || !std::isfinite(budget)) throw std::invalid_argument("water_level: budget must be positive");
  if (!floors.allFinite()) throw std::invalid_argument("water_level: floors must be finite");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return floors(a) < floors(b); });

  double running = 0.0;
  double level = budget + floors(order[0]);
  for (Eigen::Index k = 1; k <= n; ++k) {
    running += floors(order[static_cast<std::size_t>(k - 1)]);
    const double candidate = (budget + running) / static_cast<double>(k);
    if (candidate > floors(order[static_cast<std::size_t>(k - 1)])) level = candidate;
  }

  WaterfillResult out;
  out.level = level;
  out.power = (level - floors.array()).cwiseMax(0.0).matrix();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (out.power(i) > 0.0) out.active.push_back(i);
  }
  return out;
}

Eigen::VectorXd interference_plus_noise(const EffectiveNetwork& net, const PowerProfile& profile, std::size_t q) {
  Eigen::VectorXd received = Eigen::VectorXd::Zero(net.streams(q));
  for (std::size_t r = 0; r < net.users(); ++r) {
    if (r == q) continue;
    received.noalias() += net.gain[r][q] * profile.power[r];
  }
  return received.cwiseQuotient(net.sigma_sq[q]) + net.noise_floor[q];
}

Eigen::VectorXd best_response(const EffectiveNetwork& net, const PowerProfile& profile, std::size_t q) {
  const Eigen::VectorXd floors = interference_plus_noise(net, profile, q);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(net.config.tx_antennas[q]);
  out.head(floors.size()) = water_level(floors, net.config.power_budget[q]).power;
  return out;
}

double user_rate(const Eigen::VectorXd& power, const Eigen::VectorXd& floors) {
  if (power.size() < floors.size()) throw std::invalid_argument("user_rate: fewer powers than channels");
  double rate = 0.0;
  for (Eigen::Index i = 0; i < floors.size(); ++i) rate += std::log2(1.0 + power(i) / floors(i));
  return rate;
}

std::vector<double> user_rates(const EffectiveNetwork& net, const PowerProfile& profile) {
  std::vector<double> out;
  out.reserve(net.users());
  for (std::size_t q = 0; q < net.users(); ++q) {
    out.push_back(user_rate(profile.power[q], interference_plus_noise(net, profile, q)));
  }
  return out;
}

double sum_rate(const EffectiveNetwork& net, const PowerProfile& profile) {
  const auto rates = user_rates(net, profile);
  return std::accumulate(rates.begin(), rates.end(), 0.0);
}

}  // namespace iwf

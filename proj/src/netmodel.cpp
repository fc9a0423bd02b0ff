#include "iwf/netmodel.hpp"

#include "iwf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iwf {

Eigen::Index NetworkConfig::streams(std::size_t q) const {
  return std::min(tx_antennas[q], rx_antennas[q]);
}

Eigen::Index NetworkConfig::total_tx_antennas() const {
  Eigen::Index total = 0;
  for (int nt : tx_antennas) total += nt;
  return total;
}

double NetworkConfig::distance(std::size_t r, std::size_t q) const {
  return r == q ? direct_distance[q] : cross_distance[r][q];
}

namespace {

void require_length(std::size_t got, std::size_t users, const char* field, const char* kind) {
  if (got != users) {
    throw ConfigError(std::string(kind) + " array length mismatch: '" + field + "' has " +
                      std::to_string(got) + " entries, expected " + std::to_string(users));
  }
}

void require_positive(const std::vector<double>& values, const char* field) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw ConfigError(std::string("'") + field + "[" + std::to_string(i) +
                        "]' must be positive and finite");
    }
  }
}

}  // namespace

NetworkConfig validate_config(NetworkConfig raw) {
  if (raw.users < 1) throw ConfigError("'users' must be at least 1");
  const std::size_t Q = raw.users;

  require_length(raw.tx_antennas.size(), Q, "tx_antennas", "antenna");
  require_length(raw.rx_antennas.size(), Q, "rx_antennas", "antenna");
  for (std::size_t q = 0; q < Q; ++q) {
    if (raw.tx_antennas[q] < 1) {
      throw ConfigError("'tx_antennas[" + std::to_string(q) + "]' must be at least 1");
    }
    if (raw.rx_antennas[q] < 1) {
      throw ConfigError("'rx_antennas[" + std::to_string(q) + "]' must be at least 1");
    }
  }

  require_length(raw.power_budget.size(), Q, "power_budget", "power");
  require_length(raw.noise_power.size(), Q, "noise_power", "noise");
  require_length(raw.direct_distance.size(), Q, "direct_distance", "distance");
  require_positive(raw.power_budget, "power_budget");
  require_positive(raw.noise_power, "noise_power");
  require_positive(raw.direct_distance, "direct_distance");

  require_length(raw.cross_distance.size(), Q, "cross_distance", "distance");
  for (std::size_t r = 0; r < Q; ++r) {
    require_length(raw.cross_distance[r].size(), Q, "cross_distance row", "distance");
    for (std::size_t q = 0; q < Q; ++q) {
      if (r == q) {
        raw.cross_distance[r][q] = raw.direct_distance[q];
        continue;
      }
      const double d = raw.cross_distance[r][q];
      if (!(d > 0.0) || !std::isfinite(d)) {
        throw ConfigError("'cross_distance[" + std::to_string(r) + "][" + std::to_string(q) +
                          "]' must be positive and finite");
      }
    }
  }

  if (!(raw.pathloss_exponent >= 0.0) || !std::isfinite(raw.pathloss_exponent)) {
    throw ConfigError("'pathloss_exponent' must be non-negative and finite");
  }
  return raw;
}

NetworkConfig uniform_config(std::size_t users, int tx_antennas, int rx_antennas, double power_budget,
                             double noise_power, double direct_distance, double cross_distance,
                             double pathloss_exponent) {
  NetworkConfig c;
  c.users = users;
  c.tx_antennas.assign(users, tx_antennas);
  c.rx_antennas.assign(users, rx_antennas);
  c.power_budget.assign(users, power_budget);
  c.noise_power.assign(users, noise_power);
  c.direct_distance.assign(users, direct_distance);
  c.cross_distance.assign(users, std::vector<double>(users, cross_distance));
  c.pathloss_exponent = pathloss_exponent;
  return validate_config(std::move(c));
}

double pathloss_power_gain(double distance, double exponent) {
  if (!(distance > 0.0)) throw std::invalid_argument("path-loss distance must be positive");
  return std::pow(distance, -exponent);
}

ChannelRealization sample_channels(const NetworkConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t Q = config.users;
  ChannelRealization out;
  out.seed = seed;
  out.H.resize(Q);
  for (std::size_t r = 0; r < Q; ++r) {
    out.H[r].resize(Q);
    for (std::size_t q = 0; q < Q; ++q) {
      const double amplitude =
          std::sqrt(pathloss_power_gain(config.distance(r, q), config.pathloss_exponent));
      CMatrix h(config.rx_antennas[q], config.tx_antennas[r]);
      for (Eigen::Index i = 0; i < h.rows(); ++i) {
        for (Eigen::Index j = 0; j < h.cols(); ++j) h(i, j) = amplitude * rng.complex_gaussian();
      }
      out.H[r][q] = std::move(h);
    }
  }
  return out;
}

ChannelRealization make_realization(const NetworkConfig& config, std::vector<std::vector<CMatrix>> H) {
  const std::size_t Q = config.users;
  if (H.size() != Q) throw ConfigError("'channels' must cover every transmitter");
  for (std::size_t r = 0; r < Q; ++r) {
    if (H[r].size() != Q) throw ConfigError("'channels' must cover every receiver");
    for (std::size_t q = 0; q < Q; ++q) {
      if (H[r][q].rows() != config.rx_antennas[q] || H[r][q].cols() != config.tx_antennas[r]) {
        throw ConfigError("channel " + std::to_string(r) + "->" + std::to_string(q) + " has shape " +
                          std::to_string(H[r][q].rows()) + "x" + std::to_string(H[r][q].cols()) +
                          ", expected " + std::to_string(config.rx_antennas[q]) + "x" +
                          std::to_string(config.tx_antennas[r]));
      }
    }
  }
  ChannelRealization out;
  out.H = std::move(H);
  return out;
}

}  // namespace iwf

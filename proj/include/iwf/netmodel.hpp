#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwf {

using CMatrix = Eigen::MatrixXcd;

/// Invalid network or sweep configuration. The message names the field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Topology and link budget of a Q-pair interference channel.
///
/// Powers are linear. Distances are dimensionless; only their ratios and the
/// path-loss exponent matter. cross_distance[r][q] is the distance from
/// transmitter r to receiver q; its diagonal mirrors direct_distance.
struct NetworkConfig {
  std::size_t users = 0;
  std::vector<int> tx_antennas;
  std::vector<int> rx_antennas;
  std::vector<double> power_budget;
  std::vector<double> noise_power;
  std::vector<double> direct_distance;
  std::vector<std::vector<double>> cross_distance;
  double pathloss_exponent = 0.0;

  /// Number of parallel eigen-channels of user q, min(nt, nr).
  Eigen::Index streams(std::size_t q) const;
  Eigen::Index total_tx_antennas() const;
  /// Transmitter r to receiver q; direct distance when r == q.
  double distance(std::size_t r, std::size_t q) const;
};

/// Checks every invariant of a candidate config and returns it with the
/// cross-distance diagonal set to the direct distances.
/// Throws ConfigError naming the offending field.
NetworkConfig validate_config(NetworkConfig raw);

/// Homogeneous network: every user has the same antennas, budget and noise,
/// and every cross link has the same length.
NetworkConfig uniform_config(std::size_t users, int tx_antennas, int rx_antennas, double power_budget,
                             double noise_power, double direct_distance, double cross_distance,
                             double pathloss_exponent);

/// Mean power attenuation d^-gamma of a link of length d.
double pathloss_power_gain(double distance, double exponent);

/// One draw of every channel matrix in the network.
struct ChannelRealization {
  /// H[r][q] maps transmitter r to receiver q, shape nr[q] x nt[r].
  std::vector<std::vector<CMatrix>> H;
  std::uint64_t seed = 0;

  const CMatrix& link(std::size_t r, std::size_t q) const { return H[r][q]; }
};

/// Draws Rayleigh-faded channels with path loss folded into the amplitude.
///
/// Entries are CN(0,1) scaled by d_rq^(-gamma/2). The draw order is r outer,
/// q inner, row-major within each matrix, so (config, seed) fixes the result.
ChannelRealization sample_channels(const NetworkConfig& config, std::uint64_t seed);

/// Wraps caller-supplied matrices after checking their shapes against config.
ChannelRealization make_realization(const NetworkConfig& config, std::vector<std::vector<CMatrix>> H);

}  // namespace iwf

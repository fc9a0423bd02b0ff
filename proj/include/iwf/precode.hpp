#pragma once

#include "iwf/netmodel.hpp"

#include <stdexcept>
#include <vector>

namespace iwf {

class SvdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A direct channel has a zero singular value, so its normalized noise floor
/// is undefined. Callers resample the realization.
class DegenerateChannelError : public std::runtime_error {
 public:
  DegenerateChannelError(std::size_t user, const std::string& what)
      : std::runtime_error(what), user_(user) {}
  std::size_t user() const { return user_; }

 private:
  std::size_t user_;
};

/// Full SVD H = U * diag(sigma) * V^H with sigma sorted non-increasing.
struct LinkSVD {
  CMatrix U;              // nr x nr
  Eigen::VectorXd sigma;  // min(nr, nt)
  CMatrix V;              // nt x nt
};

LinkSVD svd_decompose(const CMatrix& H);

/// Squared magnitudes of the first nu_q rows of U_q^H H_rq V_r.
Eigen::MatrixXd cross_gains(const CMatrix& H_rq, const LinkSVD& receiver, const LinkSVD& transmitter);

/// The network as seen after SVD precoding at every transmitter and SVD
/// decoding at every receiver.
struct EffectiveNetwork {
  NetworkConfig config;
  std::vector<LinkSVD> svd;
  /// gain[r][q] is nu_q x nt[r], |[U_q^H H_rq V_r]_ij|^2. Empty when r == q.
  std::vector<std::vector<Eigen::MatrixXd>> gain;
  std::vector<Eigen::VectorXd> sigma_sq;
  /// N0_q / sigma_q^i^2 for each eigen-channel.
  std::vector<Eigen::VectorXd> noise_floor;

  std::size_t users() const { return config.users; }
  Eigen::Index streams(std::size_t q) const { return sigma_sq[q].size(); }
};

/// Throws DegenerateChannelError if any direct channel is rank deficient
/// (smallest singular value at round-off level relative to the largest).
EffectiveNetwork build_effective_network(const ChannelRealization& realization, const NetworkConfig& config);

}  // namespace iwf

#include "iwf/precode.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace iwf {

LinkSVD svd_decompose(const CMatrix& H) {
  if (H.size() == 0) throw std::invalid_argument("svd_decompose: empty matrix");
  if (!H.allFinite()) throw SvdError("svd_decompose: matrix has non-finite entries");

  Eigen::JacobiSVD<CMatrix> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw SvdError("svd_decompose: iteration did not converge");

  // Eigen already orders singular values non-increasing with matched columns.
  LinkSVD out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  if (!out.U.allFinite() || !out.V.allFinite() || !out.sigma.allFinite()) {
    throw SvdError("svd_decompose: non-finite factors");
  }
  return out;
}

Eigen::MatrixXd cross_gains(const CMatrix& H_rq, const LinkSVD& receiver, const LinkSVD& transmitter) {
  const Eigen::Index nu = receiver.sigma.size();
  const CMatrix rotated = receiver.U.adjoint().topRows(nu) * H_rq * transmitter.V;
  return rotated.cwiseAbs2();
}

EffectiveNetwork build_effective_network(const ChannelRealization& realization, const NetworkConfig& config) {
  const std::size_t Q = config.users;
  EffectiveNetwork net;
  net.config = config;
  net.svd.reserve(Q);
  net.sigma_sq.resize(Q);
  net.noise_floor.resize(Q);

  for (std::size_t q = 0; q < Q; ++q) {
    LinkSVD s = svd_decompose(realization.link(q, q));
    const double largest = s.sigma(0);
    const double cutoff = static_cast<double>(s.sigma.size()) * std::numeric_limits<double>::epsilon() * largest;
    for (Eigen::Index i = 0; i < s.sigma.size(); ++i) {
      if (!(s.sigma(i) > cutoff) || !(s.sigma(i) > 0.0)) {
        throw DegenerateChannelError(q, "direct channel of user " + std::to_string(q) +
                                            " is rank deficient (singular value " + std::to_string(i) +
                                            " = " + std::to_string(s.sigma(i)) + ")");
      }
    }
    net.sigma_sq[q] = s.sigma.cwiseAbs2();
    net.noise_floor[q] = config.noise_power[q] * net.sigma_sq[q].cwiseInverse();
    if (!net.noise_floor[q].allFinite()) {
      throw DegenerateChannelError(q, "noise floor of user " + std::to_string(q) + " is not finite");
    }
    net.svd.push_back(std::move(s));
  }

  net.gain.assign(Q, std::vector<Eigen::MatrixXd>(Q));
  for (std::size_t r = 0; r < Q; ++r) {
    for (std::size_t q = 0; q < Q; ++q) {
      if (r == q) continue;
      net.gain[r][q] = cross_gains(realization.link(r, q), net.svd[q], net.svd[r]);
    }
  }
  return net;
}

}  // namespace iwf

#pragma once

// Fixtures and independent oracles shared by the unit and acceptance tests.
// Oracles here deliberately avoid the library's own code paths.

#include "iwf/contraction.hpp"
#include "iwf/engine.hpp"
#include "iwf/netmodel.hpp"
#include "iwf/precode.hpp"
#include "iwf/rng.hpp"
#include "iwf/waterfill.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace iwf::testing {

/// Water level by bisection on sum_i (mu - c_i)^+ = P, to |residual| < 1e-12.
inline double bisection_water_level(const Eigen::VectorXd& c, double P) {
  double lo = c.minCoeff();
  double hi = c.maxCoeff() + P;
  auto excess = [&](double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) s += std::max(mu - c(i), 0.0);
    return s - P;
  };
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (excess(mid) > 0.0) hi = mid;
    else lo = mid;
  }
  return std::abs(excess(lo)) <= std::abs(excess(hi)) ? lo : hi;
}

/// |[U^H H V]_{ij}|^2 for i < nu by explicit triple sums.
inline Eigen::MatrixXd brute_cross_gains(const CMatrix& H, const CMatrix& U, const CMatrix& V, Eigen::Index nu) {
  Eigen::MatrixXd out(nu, V.cols());
  for (Eigen::Index i = 0; i < nu; ++i) {
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
      std::complex<double> acc = 0.0;
      for (Eigen::Index a = 0; a < H.rows(); ++a) {
        for (Eigen::Index b = 0; b < H.cols(); ++b) acc += std::conj(U(a, i)) * H(a, b) * V(b, j);
      }
      out(i, j) = std::norm(acc);
    }
  }
  return out;
}

/// c_q by the explicit double sum over interferers and their antennas.
inline Eigen::VectorXd brute_interference_plus_noise(const EffectiveNetwork& net, const PowerProfile& p,
                                                     std::size_t q) {
  const Eigen::Index nu = net.streams(q);
  Eigen::VectorXd c(nu);
  for (Eigen::Index i = 0; i < nu; ++i) {
    const double s2 = net.svd[q].sigma(i) * net.svd[q].sigma(i);
    double acc = 0.0;
    for (std::size_t r = 0; r < net.users(); ++r) {
      if (r == q) continue;
      for (Eigen::Index j = 0; j < p.power[r].size(); ++j) acc += net.gain[r][q](i, j) * p.power[r](j);
    }
    c(i) = acc / s2 + net.config.noise_power[q] / s2;
  }
  return c;
}

/// Largest eigenvalue magnitude from a dense eigen-solver.
inline double eigen_spectral_radius(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Dense eigen-solver applied per strongly connected block, blocks found by
/// Warshall transitive closure. Avoids the eps^(1/k) error a dense solver
/// shows on nilpotent Jordan blocks of reducible matrices.
inline double blockwise_spectral_radius(const Eigen::MatrixXd& M) {
  const Eigen::Index n = M.rows();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) reach[i][j] = M(i, j) > 0.0;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (Eigen::Index j = 0; j < n; ++j) reach[i][j] = reach[i][j] || reach[k][j];
    }
  }
  double rho = 0.0;
  std::vector<char> done(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (done[i]) continue;
    std::vector<Eigen::Index> block{i};
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (reach[i][j] && reach[j][i]) block.push_back(j);
    }
    for (auto b : block) done[b] = 1;
    if (block.size() == 1) {
      rho = std::max(rho, M(i, i));
      continue;
    }
    Eigen::MatrixXd B(block.size(), block.size());
    for (std::size_t a = 0; a < block.size(); ++a) {
      for (std::size_t b = 0; b < block.size(); ++b) B(a, b) = M(block[a], block[b]);
    }
    rho = std::max(rho, eigen_spectral_radius(B));
  }
  return rho;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& A) {
  return A.size() ? static_cast<double>(A.cwiseAbs().maxCoeff()) : 0.0;
}

/// Two single-antenna users with unit direct channels. User 0 hears user 1
/// with power gain a; user 1 hears user 0 with power gain b.
inline EffectiveNetwork scalar_network(double a, double b, double noise = 1.0, double budget = 1.0) {
  NetworkConfig cfg = uniform_config(2, 1, 1, budget, noise, 1.0, 1.0, 0.0);
  std::vector<std::vector<CMatrix>> H(2, std::vector<CMatrix>(2, CMatrix::Ones(1, 1)));
  H[1][0](0, 0) = std::sqrt(a);
  H[0][1](0, 0) = std::sqrt(b);
  return build_effective_network(make_realization(cfg, std::move(H)), cfg);
}

/// One member of the 4-user 2x2 ensemble: d_qq = 15, gamma = 2.5, budget
/// 10 (10 dB over unit noise), every cross distance uniform in [15, 60].
/// Redraws on a rank-deficient direct channel.
inline EffectiveNetwork ensemble_network(std::uint64_t seed, std::size_t users = 4, int nt = 2, int nr = 2) {
  Rng rng(mix_seed(seed, 0xE5));
  NetworkConfig cfg = uniform_config(users, nt, nr, 10.0, 1.0, 15.0, 15.0, 2.5);
  for (std::size_t r = 0; r < users; ++r) {
    for (std::size_t q = 0; q < users; ++q) {
      if (r != q) cfg.cross_distance[r][q] = 15.0 + 45.0 * rng.uniform();
    }
  }
  for (std::uint64_t attempt = 0;; ++attempt) {
    try {
      return build_effective_network(sample_channels(cfg, mix_seed(seed, attempt)), cfg);
    } catch (const DegenerateChannelError&) {
    }
  }
}

/// Random complex matrix with CN(0,1) entries.
inline CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.complex_gaussian();
  }
  return m;
}

/// Least-squares slope of log(residual) against step index, as a ratio.
/// Residuals at or below `floor` are dropped. Returns 0 with fewer than two points.
inline double geometric_rate(const std::vector<double>& residuals, double floor = 1e-13) {
  std::vector<double> xs, ys;
  for (std::size_t n = 0; n < residuals.size(); ++n) {
    if (residuals[n] > floor && std::isfinite(residuals[n])) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(std::log(residuals[n]));
    }
  }
  if (xs.size() < 2) return 0.0;
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return std::exp(slope);
}

}  // namespace iwf::testing

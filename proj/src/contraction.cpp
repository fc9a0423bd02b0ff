#include "iwf/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>

namespace iwf {

InterferenceMatrix build_interference_matrix(const EffectiveNetwork& net) {
  const auto& cfg = net.config;
  const std::size_t Q = net.users();
  InterferenceMatrix out;
  out.offset.resize(Q);
  out.padded_rows.resize(Q);
  Eigen::Index at = 0;
  for (std::size_t q = 0; q < Q; ++q) {
    out.offset[q] = at;
    out.padded_rows[q] = cfg.tx_antennas[q] - net.streams(q);
    at += cfg.tx_antennas[q];
  }
  out.M = Eigen::MatrixXd::Zero(at, at);

  for (std::size_t q = 0; q < Q; ++q) {
    for (std::size_t r = 0; r < Q; ++r) {
      if (r == q) continue;
      const Eigen::MatrixXd& g = net.gain[r][q];
      for (Eigen::Index i = 0; i < g.rows(); ++i) {
        out.M.block(out.offset[q] + i, out.offset[r], 1, g.cols()) = g.row(i) / net.sigma_sq[q](i);
      }
    }
  }
  return out;
}

double max_row_sum(const Eigen::MatrixXd& M) {
  return M.size() == 0 ? 0.0 : M.rowwise().sum().maxCoeff();
}

double max_col_sum(const Eigen::MatrixXd& M) {
  return M.size() == 0 ? 0.0 : M.colwise().sum().maxCoeff();
}

double weighted_max_norm(const Eigen::MatrixXd& M, const Eigen::VectorXd& v) {
  if (v.size() != M.cols() || M.rows() != M.cols()) {
    throw std::invalid_argument("weighted_max_norm: weight length must match the square matrix");
  }
  if (!(v.array() > 0.0).all()) throw std::invalid_argument("weighted_max_norm: weights must be positive");
  if (M.size() == 0) return 0.0;
  return (M * v).cwiseQuotient(v).maxCoeff();
}

namespace {

// Tarjan's algorithm on the support graph i -> j for M(i, j) > 0.
std::vector<std::vector<Eigen::Index>> strongly_connected_components(const Eigen::MatrixXd& M) {
  const Eigen::Index n = M.rows();
  std::vector<Eigen::Index> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<Eigen::Index> stack;
  std::vector<std::vector<Eigen::Index>> components;
  Eigen::Index counter = 0;

  std::function<void(Eigen::Index)> visit = [&](Eigen::Index v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (Eigen::Index w = 0; w < n; ++w) {
      if (!(M(v, w) > 0.0)) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<Eigen::Index> comp;
      Eigen::Index w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      components.push_back(std::move(comp));
    }
  };
  for (Eigen::Index v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  return components;
}

SpectralEstimate irreducible_root(const Eigen::MatrixXd& A, double tol, std::size_t max_iterations) {
  const Eigen::Index n = A.rows();
  // Shifting by a bound on rho keeps B primitive at the scale of A.
  const double shift = std::min(A.rowwise().sum().maxCoeff(), A.colwise().sum().maxCoeff());
  Eigen::MatrixXd B = A;
  B.diagonal().array() += shift;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  SpectralEstimate est;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    const Eigen::VectorXd y = B * x;
    const Eigen::ArrayXd ratio = y.array() / x.array();
    est.lower = std::max(ratio.minCoeff() - shift, 0.0);
    est.upper = ratio.maxCoeff() - shift;
    est.iterations = it;
    if (est.upper - est.lower <= tol * std::max(1.0, est.upper)) {
      est.value = 0.5 * (est.lower + est.upper);
      return est;
    }
    x = y / y.maxCoeff();
    if (!(x.array() > 0.0).all()) break;  // underflow; cannot happen for irreducible A at sane scales
  }
  throw SpectralRadiusError("spectral_radius: no convergence after " + std::to_string(est.iterations) +
                            " iterations (bracket [" + std::to_string(est.lower) + ", " +
                            std::to_string(est.upper) + "])");
}

}  // namespace

SpectralEstimate spectral_radius_estimate(const Eigen::MatrixXd& M, double tol, std::size_t max_iterations) {
  if (M.rows() != M.cols()) throw std::invalid_argument("spectral_radius: matrix must be square");
  if (!(tol > 0.0)) throw std::invalid_argument("spectral_radius: tolerance must be positive");
  if ((M.array() < 0.0).any() || !M.allFinite()) {
    throw std::invalid_argument("spectral_radius: matrix must be non-negative and finite");
  }

  SpectralEstimate total;
  for (const auto& comp : strongly_connected_components(M)) {
    const auto k = static_cast<Eigen::Index>(comp.size());
    SpectralEstimate est;
    if (k == 1) {
      const double d = M(comp[0], comp[0]);
      est.value = est.lower = est.upper = d;
    } else {
      Eigen::MatrixXd A(k, k);
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) A(a, b) = M(comp[a], comp[b]);
      }
      est = irreducible_root(A, tol, max_iterations);
    }
    total.value = std::max(total.value, est.value);
    total.lower = std::max(total.lower, est.lower);
    total.upper = std::max(total.upper, est.upper);
    total.iterations += est.iterations;
  }

  const double norm_bound = std::min(max_row_sum(M), max_col_sum(M));
  total.value = std::min(total.value, norm_bound);
  total.upper = std::min(total.upper, norm_bound);
  return total;
}

double spectral_radius(const Eigen::MatrixXd& M, double tol) {
  return spectral_radius_estimate(M, tol).value;
}

double paper_sum_13(const EffectiveNetwork& net) {
  const auto& cfg = net.config;
  const std::size_t Q = net.users();
  const int max_nt = *std::max_element(cfg.tx_antennas.begin(), cfg.tx_antennas.end());
  double total = 0.0;
  for (int j = 0; j < max_nt; ++j) {
    double worst = 0.0;
    for (std::size_t q = 0; q < Q; ++q) {
      for (Eigen::Index i = 0; i < net.streams(q); ++i) {
        double s = 0.0;
        for (std::size_t r = 0; r < Q; ++r) {
          if (r == q || j >= cfg.tx_antennas[r]) continue;
          s += net.gain[r][q](i, j) / net.sigma_sq[q](i);
        }
        worst = std::max(worst, s);
      }
    }
    total += worst;
  }
  return total;
}

double paper_sum_14(const EffectiveNetwork& net) {
  const auto& cfg = net.config;
  const std::size_t Q = net.users();
  Eigen::Index max_nu = 0;
  for (std::size_t q = 0; q < Q; ++q) max_nu = std::max(max_nu, net.streams(q));
  double total = 0.0;
  for (Eigen::Index i = 0; i < max_nu; ++i) {
    double worst = 0.0;
    for (std::size_t q = 0; q < Q; ++q) {
      for (int j = 0; j < cfg.tx_antennas[q]; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < Q; ++r) {
          if (r == q || i >= net.streams(r)) continue;
          s += net.gain[q][r](i, j) / net.sigma_sq[r](i);
        }
        worst = std::max(worst, s);
      }
    }
    total += worst;
  }
  return total;
}

bool paper_condition_13(const EffectiveNetwork& net) { return paper_sum_13(net) < 1.0; }
bool paper_condition_14(const EffectiveNetwork& net) { return paper_sum_14(net) < 1.0; }

UniquenessCertificate certify(const EffectiveNetwork& net, double spectral_tol) {
  const InterferenceMatrix im = build_interference_matrix(net);
  UniquenessCertificate c;
  c.row_norm = max_row_sum(im.M);
  c.col_norm = max_col_sum(im.M);
  c.spectral_radius = spectral_radius(im.M, spectral_tol);
  c.sum_13 = paper_sum_13(net);
  c.sum_14 = paper_sum_14(net);
  c.cond_13 = c.sum_13 < 1.0;
  c.cond_14 = c.sum_14 < 1.0;
  c.norm_unique = c.row_norm < 1.0 || c.col_norm < 1.0;
  c.spectral_unique = c.spectral_radius < 1.0;
  if (c.norm_unique) c.modulus = std::min(c.row_norm, c.col_norm);
  return c;
}

void write_matrix_csv(const Eigen::MatrixXd& M, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  char buf[64];
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", M(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace iwf

#pragma once

#include "iwf/precode.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

namespace iwf {

/// Square matrix of normalized cross gains that drives the interference
/// function I(p) = M p + const.
///
/// Rows and columns are both indexed by (user, antenna) pairs laid out user
/// by user, nt[q] slots per user. Row (q, i) for i < nu_q holds
/// gain[r][q](i, j) / sigma_q^i^2 in column (r, j); rows i >= nu_q are zero
/// padding for users with more transmit than receive antennas.
struct InterferenceMatrix {
  Eigen::MatrixXd M;
  std::vector<Eigen::Index> offset;       // first row/column of each user
  std::vector<Eigen::Index> padded_rows;  // nt[q] - nu_q

  Eigen::Index index(std::size_t q, Eigen::Index i) const { return offset[q] + i; }
};

InterferenceMatrix build_interference_matrix(const EffectiveNetwork& net);

/// ||M||_inf, the largest row sum.
double max_row_sum(const Eigen::MatrixXd& M);
/// ||M^T||_inf, the largest column sum.
double max_col_sum(const Eigen::MatrixXd& M);
/// max_i (1/v_i) sum_j M_ij v_j. Throws std::invalid_argument unless v > 0.
double weighted_max_norm(const Eigen::MatrixXd& M, const Eigen::VectorXd& v);

class SpectralRadiusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpectralEstimate {
  double value = 0.0;
  double lower = 0.0;  // certified Collatz-Wielandt bounds
  double upper = 0.0;
  std::size_t iterations = 0;
};

/// Perron root of a square non-negative matrix.
///
/// The matrix is split into strongly connected components. Each irreducible
/// component is iterated as (A + I), which is primitive, from the all-ones
/// vector; the Collatz-Wielandt ratios min/max (Ax)_i / x_i bracket the root
/// and iteration stops once the bracket is narrower than tol * max(1, upper).
/// Components without a cycle contribute 0. The estimate is clipped to the
/// row and column norms, which bound it from above.
/// Throws SpectralRadiusError when max_iterations is exhausted.
SpectralEstimate spectral_radius_estimate(const Eigen::MatrixXd& M, double tol = 1e-9,
                                          std::size_t max_iterations = 10000);
double spectral_radius(const Eigen::MatrixXd& M, double tol = 1e-9);

// The literal sum-of-maxima forms of the two norm conditions. Both are upper
// bounds on the matching induced norm, so either being < 1 implies the norm
// condition.
double paper_sum_13(const EffectiveNetwork& net);
double paper_sum_14(const EffectiveNetwork& net);
bool paper_condition_13(const EffectiveNetwork& net);
bool paper_condition_14(const EffectiveNetwork& net);

struct UniquenessCertificate {
  double row_norm = 0.0;
  double col_norm = 0.0;
  double spectral_radius = 0.0;
  double sum_13 = 0.0;
  double sum_14 = 0.0;
  bool cond_13 = false;
  bool cond_14 = false;
  bool norm_unique = false;      // row_norm < 1 or col_norm < 1
  bool spectral_unique = false;  // spectral_radius < 1
  std::optional<double> modulus;  // min(row_norm, col_norm) when below 1
};

UniquenessCertificate certify(const EffectiveNetwork& net, double spectral_tol = 1e-9);

/// Writes M as plain comma-separated rows, 17 significant digits.
void write_matrix_csv(const Eigen::MatrixXd& M, const std::filesystem::path& path);

}  // namespace iwf

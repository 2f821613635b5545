#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qrd/errors.hpp"

namespace qrd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Global numeric policy. All tolerances live here so they can be audited in
/// one place; none of them are runtime-configurable.
struct Tolerances {
  static constexpr double hermiticity = 1e-10;       // max |M - M†| entrywise
  static constexpr double trace_one = 1e-10;         // |tr(rho) - 1|
  static constexpr double eigenvalue_floor = -1e-10; // density matrix PSD slack
  static constexpr double state_norm = 1e-10;        // | ||psi||^2 - 1 |
  static constexpr double entropy_clip = 1e-12;      // eigenvalues below this count as 0
  static constexpr double trace_preserving = 1e-9;   // ||sum A†A - I||_max
  static constexpr double choi_psd = 1e-9;           // Choi min eigenvalue slack
  static constexpr double isometry = 1e-9;           // ||V†V - I||_max
  static constexpr double kraus_rank_drop = 1e-10;   // Choi eigenvalues dropped in Kraus extraction
  static constexpr double cross_check_fidelity = 1e-9;
  static constexpr double cross_check_entropy = 1e-8;
  static constexpr double prob_sum = 1e-12;          // weight/probability vectors
  static constexpr double range_slack = 1e-8;        // out-of-range beyond this is an error
};

/// Ordered tensor-factor dimensions of a composite space. Factor indices are
/// 1-based throughout (factor 1 is the leftmost/most significant factor).
class DimensionSpec {
public:
  explicit DimensionSpec(std::vector<int> factor_dims);
  static DimensionSpec uniform(int factor_dim, int count);
  static DimensionSpec single(int dim) { return uniform(dim, 1); }

  int count() const { return static_cast<int>(dims_.size()); }
  int factor(int index) const;  // 1-based
  int total() const { return total_; }
  const std::vector<int>& factors() const { return dims_; }

  bool operator==(const DimensionSpec& other) const { return dims_ == other.dims_; }

private:
  std::vector<int> dims_;
  int total_;
};

/// Hermitian, positive semidefinite, unit-trace operator together with its
/// tensor-factor structure. Invariants are checked at construction.
class DensityMatrix {
public:
  DensityMatrix(Matrix m, DimensionSpec dims);
  explicit DensityMatrix(Matrix m);

  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix pure(const Vector& amplitudes);
  /// Computational basis state |k><k| in the given dimension.
  static DensityMatrix basis_state(int dim, int k);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  const DimensionSpec& dims() const { return dims_; }

  /// Same operator, reinterpreted with a different factor structure.
  DensityMatrix with_dims(DimensionSpec dims) const;

private:
  Matrix m_;
  DimensionSpec dims_;
};

/// Normalized state vector.
class PureState {
public:
  explicit PureState(Vector amplitudes);
  int dim() const { return static_cast<int>(amp_.size()); }
  const Vector& amplitudes() const { return amp_; }
  Matrix projector() const { return amp_ * amp_.adjoint(); }

private:
  Vector amp_;
};

/// Kronecker product; (a⊗b)(c⊗d) = ac⊗bd for compatible shapes.
Matrix tensor(const Matrix& a, const Matrix& b);

/// Tensor product of states; factor structures concatenate.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix tensor_power(const DensityMatrix& rho, int n);

/// Trace out every factor not listed in `keep` (1-based, strictly ascending,
/// nonempty). The result acts on the kept factors in their original order.
Matrix partial_trace(const Matrix& m, const DimensionSpec& dims, const std::vector<int>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// Reorder tensor factors: new factor j is old factor order[j-1] (1-based
/// permutation of 1..n).
Matrix permute_factors(const Matrix& m, const DimensionSpec& dims, const std::vector<int>& order);

struct EigResult {
  RealVector values;  // descending
  Matrix vectors;     // orthonormal columns, vectors.col(k) pairs with values(k)
};

/// Spectral decomposition of a Hermitian matrix (checked within tolerance).
EigResult eig_hermitian(const Matrix& m);

/// Von Neumann entropy in bits. Eigenvalues below Tolerances::entropy_clip are
/// treated as exact zeros.
double von_neumann_entropy(const DensityMatrix& rho);

/// Canonical purification |psi> = sum_k sqrt(lambda_k) |k>_R |v_k>_Q on R⊗Q
/// with dim(R) = dim(Q); tracing out R (factor 1) recovers rho.
PureState purify(const DensityMatrix& rho);

namespace detail {

/// Entropy in bits of a Hermitian PSD matrix without DensityMatrix validation
/// overhead; negative eigenvalue noise is clipped like everything below
/// entropy_clip. Used for W-matrices, cross-checks, and optimizer inner loops.
double entropy_psd_bits(const Matrix& m);

double max_abs(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol);

/// Row-major flattening (the vec convention matching Choi = sum vec(A)vec(A)†).
Vector vec_row_major(const Matrix& m);
Matrix unvec_row_major(const Vector& v, int rows, int cols);

}  // namespace detail

}  // namespace qrd

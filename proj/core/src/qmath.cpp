#include "qrd/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace qrd {

namespace detail {

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

Vector vec_row_major(const Matrix& m) {
  Vector v(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v(r * m.cols() + c) = m(r, c);
  return v;
}

Matrix unvec_row_major(const Vector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols)
    throw DimensionError("unvec: vector length does not match rows*cols");
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = v(r * cols + c);
  return m;
}

double entropy_psd_bits(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    double lambda = solver.eigenvalues()(k);
    if (lambda < Tolerances::entropy_clip) continue;
    s -= lambda * std::log2(lambda);
  }
  return s;
}

}  // namespace detail

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": entries must be finite");
}

// Mixed-radix decomposition of a linear index into per-factor indices,
// factor 1 most significant.
std::vector<int> to_multi_index(int linear, const std::vector<int>& dims) {
  std::vector<int> idx(dims.size());
  for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
    idx[f] = linear % dims[f];
    linear /= dims[f];
  }
  return idx;
}

int to_linear_index(const std::vector<int>& idx, const std::vector<int>& dims) {
  int linear = 0;
  for (size_t f = 0; f < dims.size(); ++f) linear = linear * dims[f] + idx[f];
  return linear;
}

}  // namespace

DimensionSpec::DimensionSpec(std::vector<int> factor_dims) : dims_(std::move(factor_dims)) {
  if (dims_.empty()) throw ValidationError("DimensionSpec: at least one factor required");
  total_ = 1;
  for (int d : dims_) {
    if (d < 1) throw ValidationError("DimensionSpec: factor dimensions must be positive");
    total_ *= d;
  }
}

DimensionSpec DimensionSpec::uniform(int factor_dim, int count) {
  return DimensionSpec(std::vector<int>(static_cast<size_t>(count), factor_dim));
}

int DimensionSpec::factor(int index) const {
  if (index < 1 || index > count()) {
    std::ostringstream os;
    os << "DimensionSpec: factor index " << index << " out of range 1.." << count();
    throw DimensionError(os.str());
  }
  return dims_[static_cast<size_t>(index - 1)];
}

namespace {

void check_density_invariants(const Matrix& m, const DimensionSpec& dims) {
  if (m.rows() != m.cols()) throw DimensionError("DensityMatrix: matrix must be square");
  if (dims.total() != m.rows())
    throw DimensionError("DensityMatrix: product of factor dimensions must equal matrix dimension");
  require_finite(m, "DensityMatrix");
  if (!detail::is_hermitian(m, Tolerances::hermiticity))
    throw ValidationError("DensityMatrix: not Hermitian within tolerance");
  if (std::abs(m.trace().real() - 1.0) > Tolerances::trace_one ||
      std::abs(m.trace().imag()) > Tolerances::trace_one)
    throw ValidationError("DensityMatrix: trace must be 1 within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < Tolerances::eigenvalue_floor)
    throw ValidationError("DensityMatrix: negative eigenvalue beyond tolerance");
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix m, DimensionSpec dims)
    : m_(std::move(m)), dims_(std::move(dims)) {
  check_density_invariants(m_, dims_);
}

DensityMatrix::DensityMatrix(Matrix m)
    : m_(std::move(m)), dims_(DimensionSpec::single(static_cast<int>(m_.rows()))) {
  check_density_invariants(m_, dims_);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim),
                       DimensionSpec::single(dim));
}

DensityMatrix DensityMatrix::pure(const Vector& amplitudes) {
  PureState psi(amplitudes);
  return DensityMatrix(psi.projector(), DimensionSpec::single(psi.dim()));
}

DensityMatrix DensityMatrix::basis_state(int dim, int k) {
  if (k < 0 || k >= dim) throw DimensionError("basis_state: index out of range");
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return pure(v);
}

DensityMatrix DensityMatrix::with_dims(DimensionSpec dims) const {
  return DensityMatrix(m_, std::move(dims));
}

PureState::PureState(Vector amplitudes) : amp_(std::move(amplitudes)) {
  if (amp_.size() < 1) throw DimensionError("PureState: empty amplitude vector");
  if (!amp_.allFinite()) throw ValidationError("PureState: entries must be finite");
  if (std::abs(amp_.squaredNorm() - 1.0) > Tolerances::state_norm)
    throw ValidationError("PureState: squared norm must be 1 within tolerance");
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b);
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> dims = a.dims().factors();
  const auto& bd = b.dims().factors();
  dims.insert(dims.end(), bd.begin(), bd.end());
  return DensityMatrix(tensor(a.matrix(), b.matrix()), DimensionSpec(std::move(dims)));
}

DensityMatrix tensor_power(const DensityMatrix& rho, int n) {
  if (n < 1) throw DimensionError("tensor_power: n must be >= 1");
  DensityMatrix out = rho;
  for (int i = 1; i < n; ++i) out = tensor(out, rho);
  return out;
}

Matrix partial_trace(const Matrix& m, const DimensionSpec& dims, const std::vector<int>& keep) {
  if (m.rows() != m.cols()) throw DimensionError("partial_trace: matrix must be square");
  if (m.rows() != dims.total())
    throw DimensionError("partial_trace: matrix dimension does not match factor dimensions");
  if (keep.empty()) throw DimensionError("partial_trace: keep set must be nonempty");
  for (size_t i = 0; i < keep.size(); ++i) {
    dims.factor(keep[i]);  // range check, 1-based
    if (i > 0 && keep[i] <= keep[i - 1])
      throw DimensionError("partial_trace: keep set must be strictly ascending");
  }

  const auto& all = dims.factors();
  const int n = dims.count();
  std::vector<bool> kept(static_cast<size_t>(n), false);
  for (int k : keep) kept[static_cast<size_t>(k - 1)] = true;

  std::vector<int> keep_dims, trace_dims;
  for (int f = 0; f < n; ++f) (kept[f] ? keep_dims : trace_dims).push_back(all[f]);
  const int dk = std::accumulate(keep_dims.begin(), keep_dims.end(), 1, std::multiplies<>());
  const int dt = std::accumulate(trace_dims.begin(), trace_dims.end(), 1, std::multiplies<>());

  Matrix out = Matrix::Zero(dk, dk);
  std::vector<int> full_row(static_cast<size_t>(n)), full_col(static_cast<size_t>(n));
  for (int a = 0; a < dk; ++a) {
    const auto ai = to_multi_index(a, keep_dims);
    for (int b = 0; b < dk; ++b) {
      const auto bi = to_multi_index(b, keep_dims);
      Complex sum = 0.0;
      for (int t = 0; t < dt; ++t) {
        const auto ti = trace_dims.empty() ? std::vector<int>{} : to_multi_index(t, trace_dims);
        int ik = 0, it = 0;
        for (int f = 0; f < n; ++f) {
          if (kept[static_cast<size_t>(f)]) {
            full_row[static_cast<size_t>(f)] = ai[static_cast<size_t>(ik)];
            full_col[static_cast<size_t>(f)] = bi[static_cast<size_t>(ik)];
            ++ik;
          } else {
            full_row[static_cast<size_t>(f)] = ti[static_cast<size_t>(it)];
            full_col[static_cast<size_t>(f)] = ti[static_cast<size_t>(it)];
            ++it;
          }
        }
        sum += m(to_linear_index(full_row, all), to_linear_index(full_col, all));
      }
      out(a, b) = sum;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  Matrix reduced = partial_trace(rho.matrix(), rho.dims(), keep);
  std::vector<int> kept_dims;
  kept_dims.reserve(keep.size());
  for (int k : keep) kept_dims.push_back(rho.dims().factor(k));
  return DensityMatrix(std::move(reduced), DimensionSpec(std::move(kept_dims)));
}

Matrix permute_factors(const Matrix& m, const DimensionSpec& dims, const std::vector<int>& order) {
  const int n = dims.count();
  if (static_cast<int>(order.size()) != n)
    throw DimensionError("permute_factors: order must list every factor exactly once");
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (int o : order) {
    dims.factor(o);
    if (seen[static_cast<size_t>(o - 1)])
      throw DimensionError("permute_factors: duplicate factor index in order");
    seen[static_cast<size_t>(o - 1)] = true;
  }
  if (m.rows() != m.cols() || m.rows() != dims.total())
    throw DimensionError("permute_factors: matrix dimension does not match factor dimensions");

  const auto& old_dims = dims.factors();
  std::vector<int> new_dims(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) new_dims[static_cast<size_t>(j)] = old_dims[static_cast<size_t>(order[static_cast<size_t>(j)] - 1)];

  const int d = dims.total();
  Matrix out(d, d);
  std::vector<int> old_row(static_cast<size_t>(n)), old_col(static_cast<size_t>(n));
  for (int r = 0; r < d; ++r) {
    const auto ri = to_multi_index(r, new_dims);
    for (int c = 0; c < d; ++c) {
      const auto ci = to_multi_index(c, new_dims);
      for (int j = 0; j < n; ++j) {
        old_row[static_cast<size_t>(order[static_cast<size_t>(j)] - 1)] = ri[static_cast<size_t>(j)];
        old_col[static_cast<size_t>(order[static_cast<size_t>(j)] - 1)] = ci[static_cast<size_t>(j)];
      }
      out(r, c) = m(to_linear_index(old_row, old_dims), to_linear_index(old_col, old_dims));
    }
  }
  return out;
}

EigResult eig_hermitian(const Matrix& m) {
  if (!detail::is_hermitian(m, Tolerances::hermiticity))
    throw ValidationError("eig_hermitian: input not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw NumericError("eig_hermitian: eigendecomposition failed to converge");
  // Eigen returns ascending order; flip to descending.
  const Eigen::Index d = m.rows();
  EigResult res;
  res.values.resize(d);
  res.vectors.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    res.values(k) = solver.eigenvalues()(d - 1 - k);
    res.vectors.col(k) = solver.eigenvectors().col(d - 1 - k);
  }
  return res;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = detail::entropy_psd_bits(rho.matrix());
  double max_s = std::log2(static_cast<double>(rho.dim()));
  if (s < -1e-9 || s > max_s + 1e-9)
    throw NumericError("von_neumann_entropy: result outside [0, log2(dim)] beyond tolerance");
  return std::clamp(s, 0.0, max_s);
}

PureState purify(const DensityMatrix& rho) {
  const int d = rho.dim();
  EigResult eig = eig_hermitian(rho.matrix());
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int k = 0; k < d; ++k) {
    double lambda = std::max(eig.values(k), 0.0);
    if (lambda < Tolerances::entropy_clip) continue;
    double coeff = std::sqrt(lambda);
    for (int q = 0; q < d; ++q) psi(static_cast<Eigen::Index>(k) * d + q) = coeff * eig.vectors(q, k);
  }
  psi /= psi.norm();
  return PureState(std::move(psi));
}

}  // namespace qrd

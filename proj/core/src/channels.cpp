#include "qrd/channels.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace qrd {

namespace {

ValidationReport measure_trace_preservation(int dim_in, const std::vector<Matrix>& ops) {
  Matrix acc = Matrix::Zero(dim_in, dim_in);
  for (const auto& a : ops) acc += a.adjoint() * a;
  ValidationReport report;
  report.max_deviation = detail::max_abs(acc - Matrix::Identity(dim_in, dim_in));
  report.pass = report.max_deviation <= Tolerances::trace_preserving;
  return report;
}

std::vector<Matrix> kraus_from_choi_matrix(const Matrix& j, int dim_in, int dim_out) {
  EigResult eig = eig_hermitian(j);
  std::vector<Matrix> ops;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    double lambda = eig.values(k);
    if (lambda <= Tolerances::kraus_rank_drop) continue;
    ops.push_back(std::sqrt(lambda) *
                  detail::unvec_row_major(eig.vectors.col(k), dim_out, dim_in));
  }
  if (ops.empty()) throw ValidationError("choi_to_kraus: Choi matrix has no significant eigenvalues");
  return ops;
}

Matrix choi_matrix_of(const std::vector<Matrix>& ops, int dim_in, int dim_out) {
  Matrix j = Matrix::Zero(static_cast<Eigen::Index>(dim_in) * dim_out,
                          static_cast<Eigen::Index>(dim_in) * dim_out);
  for (const auto& a : ops) {
    Vector v = detail::vec_row_major(a);
    j += v * v.adjoint();
  }
  return j;
}

std::vector<Matrix> reduce_ops(const std::vector<Matrix>& ops, int dim_in, int dim_out) {
  return kraus_from_choi_matrix(choi_matrix_of(ops, dim_in, dim_out), dim_in, dim_out);
}

}  // namespace

KrausChannel::KrausChannel(int dim_in, int dim_out, std::vector<Matrix> kraus_ops)
    : dim_in_(dim_in), dim_out_(dim_out), ops_(std::move(kraus_ops)) {
  if (dim_in_ < 1 || dim_out_ < 1) throw DimensionError("KrausChannel: dimensions must be positive");
  if (ops_.empty()) throw ValidationError("KrausChannel: at least one Kraus operator required");
  for (const auto& a : ops_) {
    if (a.rows() != dim_out_ || a.cols() != dim_in_)
      throw DimensionError("KrausChannel: every Kraus operator must be dim_out x dim_in");
    if (!a.allFinite()) throw ValidationError("KrausChannel: Kraus entries must be finite");
  }
  if (static_cast<int>(ops_.size()) > dim_in_ * dim_out_)
    ops_ = reduce_ops(ops_, dim_in_, dim_out_);
  ValidationReport report = measure_trace_preservation(dim_in_, ops_);
  if (!report.pass) {
    std::ostringstream os;
    os << "KrausChannel: not trace preserving, max deviation " << report.max_deviation;
    throw ValidationError(os.str());
  }
}

KrausChannel KrausChannel::identity(int dim) {
  return KrausChannel(dim, dim, {Matrix::Identity(dim, dim)});
}

KrausChannel KrausChannel::constant(const DensityMatrix& omega, int dim_in) {
  EigResult eig = eig_hermitian(omega.matrix());
  const int dim_out = omega.dim();
  std::vector<Matrix> ops;
  for (Eigen::Index m = 0; m < eig.values.size(); ++m) {
    double lambda = eig.values(m);
    if (lambda < Tolerances::entropy_clip) continue;
    for (int j = 0; j < dim_in; ++j) {
      Matrix a = Matrix::Zero(dim_out, dim_in);
      a.col(j) = std::sqrt(lambda) * eig.vectors.col(m);
      ops.push_back(std::move(a));
    }
  }
  return KrausChannel(dim_in, dim_out, std::move(ops));
}

KrausChannel KrausChannel::fully_depolarizing(int dim) {
  return constant(DensityMatrix::maximally_mixed(dim), dim);
}

KrausChannel KrausChannel::dephasing(double p) {
  if (p < 0.0 || p > 1.0) throw ValidationError("dephasing: p must lie in [0, 1]");
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  std::vector<Matrix> ops;
  if (p < 1.0) ops.push_back(std::sqrt(1.0 - p) * Matrix::Identity(2, 2));
  if (p > 0.0) ops.push_back(std::sqrt(p) * z);
  return KrausChannel(2, 2, std::move(ops));
}

ChoiMatrix::ChoiMatrix(int dim_in, int dim_out, Matrix j)
    : dim_in_(dim_in), dim_out_(dim_out), j_(std::move(j)) {
  if (dim_in_ < 1 || dim_out_ < 1) throw DimensionError("ChoiMatrix: dimensions must be positive");
  const Eigen::Index d = static_cast<Eigen::Index>(dim_in_) * dim_out_;
  if (j_.rows() != d || j_.cols() != d)
    throw DimensionError("ChoiMatrix: matrix must be (dim_out*dim_in) square");
  if (detail::max_abs(j_ - j_.adjoint()) > Tolerances::choi_psd)
    throw ValidationError("ChoiMatrix: not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(j_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -Tolerances::choi_psd)
    throw ValidationError("ChoiMatrix: not positive semidefinite within tolerance");
  Matrix tr_out = partial_trace(j_, DimensionSpec({dim_out_, dim_in_}), {2});
  if (detail::max_abs(tr_out - Matrix::Identity(dim_in_, dim_in_)) > Tolerances::trace_preserving)
    throw ValidationError("ChoiMatrix: partial trace over output is not the identity");
}

StinespringIsometry::StinespringIsometry(int dim_in, int dim_out, int dim_env, Matrix v)
    : dim_in_(dim_in), dim_out_(dim_out), dim_env_(dim_env), v_(std::move(v)) {
  if (dim_in_ < 1 || dim_out_ < 1 || dim_env_ < 1)
    throw DimensionError("StinespringIsometry: dimensions must be positive");
  if (v_.rows() != static_cast<Eigen::Index>(dim_out_) * dim_env_ || v_.cols() != dim_in_)
    throw DimensionError("StinespringIsometry: matrix must be (dim_out*dim_env) x dim_in");
  Matrix gram = v_.adjoint() * v_;
  if (detail::max_abs(gram - Matrix::Identity(dim_in_, dim_in_)) > Tolerances::isometry)
    throw ValidationError("StinespringIsometry: V†V differs from the identity beyond tolerance");
}

ValidationReport validate_kraus(int dim_in, const std::vector<Matrix>& ops) {
  if (ops.empty()) return {false, std::numeric_limits<double>::infinity()};
  return measure_trace_preservation(dim_in, ops);
}

ValidationReport validate(const KrausChannel& ch) {
  return measure_trace_preservation(ch.dim_in(), ch.kraus());
}

Matrix apply_matrix(const KrausChannel& ch, const Matrix& m) {
  if (m.rows() != ch.dim_in() || m.cols() != ch.dim_in())
    throw DimensionError("apply: operator dimension does not match channel input");
  Matrix out = Matrix::Zero(ch.dim_out(), ch.dim_out());
  for (const auto& a : ch.kraus()) out += a * m * a.adjoint();
  return out;
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim_in())
    throw DimensionError("apply: state dimension does not match channel input");
  return DensityMatrix(apply_matrix(ch, rho.matrix()));
}

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (first.dim_out() != second.dim_in())
    throw DimensionError("compose: first.dim_out must equal second.dim_in");
  std::vector<Matrix> ops;
  ops.reserve(first.kraus().size() * second.kraus().size());
  for (const auto& b : second.kraus())
    for (const auto& a : first.kraus()) ops.push_back(b * a);
  return KrausChannel(first.dim_in(), second.dim_out(), std::move(ops));
}

KrausChannel tensor_channels(const KrausChannel& e1, const KrausChannel& e2) {
  std::vector<Matrix> ops;
  ops.reserve(e1.kraus().size() * e2.kraus().size());
  for (const auto& a : e1.kraus())
    for (const auto& b : e2.kraus()) ops.push_back(tensor(a, b));
  return KrausChannel(e1.dim_in() * e2.dim_in(), e1.dim_out() * e2.dim_out(), std::move(ops));
}

KrausChannel mix(const std::vector<KrausChannel>& channels, const std::vector<double>& weights) {
  if (channels.empty() || channels.size() != weights.size())
    throw ValidationError("mix: channels and weights must be nonempty and equal length");
  const int din = channels.front().dim_in();
  const int dout = channels.front().dim_out();
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ValidationError("mix: weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > Tolerances::prob_sum)
    throw ValidationError("mix: weights must sum to 1 within tolerance");
  std::vector<Matrix> ops;
  for (size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].dim_in() != din || channels[i].dim_out() != dout)
      throw DimensionError("mix: all channels must share the same dimensions");
    if (weights[i] == 0.0) continue;
    double root = std::sqrt(weights[i]);
    for (const auto& a : channels[i].kraus()) ops.push_back(root * a);
  }
  return KrausChannel(din, dout, std::move(ops));
}

ChoiMatrix kraus_to_choi(const KrausChannel& ch) {
  return ChoiMatrix(ch.dim_in(), ch.dim_out(),
                    choi_matrix_of(ch.kraus(), ch.dim_in(), ch.dim_out()));
}

KrausChannel choi_to_kraus(const ChoiMatrix& j) {
  return KrausChannel(j.dim_in(), j.dim_out(),
                      kraus_from_choi_matrix(j.matrix(), j.dim_in(), j.dim_out()));
}

KrausChannel canonical_reduce(const KrausChannel& ch) {
  return KrausChannel(ch.dim_in(), ch.dim_out(),
                      reduce_ops(ch.kraus(), ch.dim_in(), ch.dim_out()));
}

double choi_distance(const KrausChannel& a, const KrausChannel& b) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out())
    throw DimensionError("choi_distance: channel dimensions differ");
  return detail::max_abs(choi_matrix_of(a.kraus(), a.dim_in(), a.dim_out()) -
                         choi_matrix_of(b.kraus(), b.dim_in(), b.dim_out()));
}

KrausChannel stinespring_to_kraus(const StinespringIsometry& v) {
  const int din = v.dim_in();
  const int dout = v.dim_out();
  const int denv = v.dim_env();
  std::vector<Matrix> ops;
  ops.reserve(static_cast<size_t>(denv));
  // A_k = (I_out ⊗ <k|_env) V with out⊗env row ordering of V.
  for (int k = 0; k < denv; ++k) {
    Matrix a(dout, din);
    for (int r = 0; r < dout; ++r)
      for (int c = 0; c < din; ++c) a(r, c) = v.matrix()(static_cast<Eigen::Index>(r) * denv + k, c);
    ops.push_back(std::move(a));
  }
  return KrausChannel(din, dout, std::move(ops));
}

StinespringIsometry kraus_to_stinespring(const KrausChannel& ch, int dim_env) {
  const int m = ch.kraus_count();
  if (dim_env < m)
    throw DimensionError("kraus_to_stinespring: dim_env must be at least the Kraus count");
  Matrix v = Matrix::Zero(static_cast<Eigen::Index>(ch.dim_out()) * dim_env, ch.dim_in());
  for (int k = 0; k < m; ++k) {
    const Matrix& a = ch.kraus()[static_cast<size_t>(k)];
    for (int r = 0; r < ch.dim_out(); ++r)
      for (int c = 0; c < ch.dim_in(); ++c) v(static_cast<Eigen::Index>(r) * dim_env + k, c) = a(r, c);
  }
  return StinespringIsometry(ch.dim_in(), ch.dim_out(), dim_env, std::move(v));
}

namespace detail {

Matrix marginal_input_operator(const std::vector<DensityMatrix>& slot_states, int slot) {
  const int n = static_cast<int>(slot_states.size());
  if (n < 1) throw DimensionError("reduced_channel: at least one slot required");
  if (slot < 1 || slot > n) {
    std::ostringstream os;
    os << "reduced_channel: slot index " << slot << " out of range 1.." << n;
    throw DimensionError(os.str());
  }
  const int ds = slot_states[static_cast<size_t>(slot - 1)].dim();

  // Unnormalized |Ω><Ω| on (slot input, reference).
  Matrix omega = Matrix::Zero(static_cast<Eigen::Index>(ds) * ds, static_cast<Eigen::Index>(ds) * ds);
  for (int i = 0; i < ds; ++i)
    for (int j = 0; j < ds; ++j)
      omega(static_cast<Eigen::Index>(i) * ds + i, static_cast<Eigen::Index>(j) * ds + j) = 1.0;

  // Build spectators ⊗ Ω, then permute to [in_1 .. in_n, ref] order.
  Matrix x = Matrix::Identity(1, 1);
  std::vector<int> built_dims;
  for (int j = 1; j <= n; ++j) {
    if (j == slot) continue;
    x = tensor(x, slot_states[static_cast<size_t>(j - 1)].matrix());
    built_dims.push_back(slot_states[static_cast<size_t>(j - 1)].dim());
  }
  x = tensor(x, omega);
  built_dims.push_back(ds);  // slot input half of Ω
  built_dims.push_back(ds);  // reference half of Ω

  std::vector<int> order;
  order.reserve(static_cast<size_t>(n) + 1);
  for (int j = 1; j <= n; ++j) {
    if (j < slot)
      order.push_back(j);
    else if (j == slot)
      order.push_back(n);  // Ω's input half sits after the n-1 spectators
    else
      order.push_back(j - 1);
  }
  order.push_back(n + 1);  // reference stays last
  return permute_factors(x, DimensionSpec(built_dims), order);
}

}  // namespace detail

Matrix reduced_channel_choi(const KrausChannel& block_op,
                            const std::vector<DensityMatrix>& slot_states,
                            const DimensionSpec& out_dims, int slot) {
  const int n = static_cast<int>(slot_states.size());
  if (n < 1) throw DimensionError("reduced_channel: at least one slot required");
  if (out_dims.count() != n)
    throw DimensionError("reduced_channel: output factor count must match slot count");
  if (slot < 1 || slot > n) {
    std::ostringstream os;
    os << "reduced_channel: slot index " << slot << " out of range 1.." << n;
    throw DimensionError(os.str());
  }
  int din_total = 1;
  for (const auto& s : slot_states) din_total *= s.dim();
  if (block_op.dim_in() != din_total)
    throw DimensionError("reduced_channel: block operation input does not match slot dimensions");
  if (block_op.dim_out() != out_dims.total())
    throw DimensionError("reduced_channel: block operation output does not match out_dims");

  const int ds = slot_states[static_cast<size_t>(slot - 1)].dim();
  Matrix x = detail::marginal_input_operator(slot_states, slot);

  // Propagate through block_op ⊗ id_ref.
  const Matrix i_ref = Matrix::Identity(ds, ds);
  Matrix y = Matrix::Zero(static_cast<Eigen::Index>(block_op.dim_out()) * ds,
                          static_cast<Eigen::Index>(block_op.dim_out()) * ds);
  for (const auto& a : block_op.kraus()) {
    Matrix ext = tensor(a, i_ref);
    y += ext * x * ext.adjoint();
  }

  // Keep the output slot and the reference: the Choi matrix of the marginal.
  std::vector<int> y_dims = out_dims.factors();
  y_dims.push_back(ds);
  return partial_trace(y, DimensionSpec(y_dims), {slot, n + 1});
}

KrausChannel reduced_channel_general(const KrausChannel& block_op,
                                     const std::vector<DensityMatrix>& slot_states,
                                     const DimensionSpec& out_dims, int slot) {
  Matrix j = reduced_channel_choi(block_op, slot_states, out_dims, slot);
  const int din = slot_states[static_cast<size_t>(slot - 1)].dim();
  const int dout = out_dims.factor(slot);
  return choi_to_kraus(ChoiMatrix(din, dout, std::move(j)));
}

KrausChannel reduced_channel(const KrausChannel& block_op, const DensityMatrix& rho, int slot, int n) {
  if (n < 1) throw DimensionError("reduced_channel: block length must be >= 1");
  return reduced_channel_general(block_op, std::vector<DensityMatrix>(static_cast<size_t>(n), rho),
                                 DimensionSpec::uniform(rho.dim(), n), slot);
}

}  // namespace qrd

#pragma once

#include <vector>

#include "qrd/qmath.hpp"

namespace qrd {

struct ValidationReport {
  bool pass = false;
  double max_deviation = 0.0;  // ||sum A†A - I||_max
};

/// Trace-preserving completely positive map in Kraus form. Construction
/// validates trace preservation; the operator count never exceeds
/// dim_in*dim_out after canonical reduction.
class KrausChannel {
public:
  KrausChannel(int dim_in, int dim_out, std::vector<Matrix> kraus_ops);

  static KrausChannel identity(int dim);
  /// sigma -> tr(sigma) * omega.
  static KrausChannel constant(const DensityMatrix& omega, int dim_in);
  /// Constant map to the maximally mixed state.
  static KrausChannel fully_depolarizing(int dim);
  /// Qubit channel {sqrt(1-p) I, sqrt(p) Z}.
  static KrausChannel dephasing(double p);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const std::vector<Matrix>& kraus() const { return ops_; }
  int kraus_count() const { return static_cast<int>(ops_.size()); }

private:
  int dim_in_;
  int dim_out_;
  std::vector<Matrix> ops_;
};

/// Channel-as-state J = (E ⊗ id)(|Ω><Ω|) with |Ω> = sum_i |i>|i> unnormalized,
/// on out⊗in factor ordering. Trace preservation reads tr_out J = I_in.
class ChoiMatrix {
public:
  ChoiMatrix(int dim_in, int dim_out, Matrix j);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const Matrix& matrix() const { return j_; }

private:
  int dim_in_;
  int dim_out_;
  Matrix j_;
};

/// Isometry V: in -> out⊗env with V†V = I; the env-trace of V·V† realizes
/// the channel.
class StinespringIsometry {
public:
  StinespringIsometry(int dim_in, int dim_out, int dim_env, Matrix v);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  int dim_env() const { return dim_env_; }
  const Matrix& matrix() const { return v_; }

private:
  int dim_in_;
  int dim_out_;
  int dim_env_;
  Matrix v_;
};

/// Measure trace preservation of a would-be Kraus set without constructing a
/// channel; pass iff the deviation is within tolerance.
ValidationReport validate_kraus(int dim_in, const std::vector<Matrix>& ops);
ValidationReport validate(const KrausChannel& ch);

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);
/// Raw linear action sum_k A_k M A_k† on an arbitrary operator.
Matrix apply_matrix(const KrausChannel& ch, const Matrix& m);

/// second ∘ first, with Kraus set {B_j A_k}; canonically reduced if the
/// operator count exceeds dim_in*dim_out.
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);

KrausChannel tensor_channels(const KrausChannel& e1, const KrausChannel& e2);

/// Convex mixture sum_i w_i E_i via the Kraus set {sqrt(w_i) A_k^(i)}.
KrausChannel mix(const std::vector<KrausChannel>& channels, const std::vector<double>& weights);

ChoiMatrix kraus_to_choi(const KrausChannel& ch);
/// Kraus operators from the scaled eigenvectors of J; eigenvalues below
/// Tolerances::kraus_rank_drop are dropped.
KrausChannel choi_to_kraus(const ChoiMatrix& j);

/// Re-extract a minimal Kraus set through the Choi representation.
KrausChannel canonical_reduce(const KrausChannel& ch);

/// Max-entry distance between the Choi matrices of two channels.
double choi_distance(const KrausChannel& a, const KrausChannel& b);

KrausChannel stinespring_to_kraus(const StinespringIsometry& v);
/// V = sum_k A_k ⊗ |k>_env, zero-padded up to dim_env; requires
/// dim_env >= kraus_count.
StinespringIsometry kraus_to_stinespring(const KrausChannel& ch, int dim_env);

/// Marginal operation on slot i (1-based) of a block operation acting on n
/// factors of dim rho.dim: sigma -> tr_{all but i}[ block_op(rho ⊗ ... ⊗ sigma
/// ⊗ ... ⊗ rho) ], computed through the Choi representation.
KrausChannel reduced_channel(const KrausChannel& block_op, const DensityMatrix& rho, int slot, int n);

/// Heterogeneous form: input slot j carries slot_states[j-1] (slot i's entry
/// is used only for its dimension), output factor structure out_dims; returns
/// the induced channel slot_states[i-1].dim -> out_dims.factor(i).
KrausChannel reduced_channel_general(const KrausChannel& block_op,
                                     const std::vector<DensityMatrix>& slot_states,
                                     const DimensionSpec& out_dims, int slot);

/// Choi matrix of the marginal operation; the smooth fast path used by the
/// optimizers and by oracle tests.
Matrix reduced_channel_choi(const KrausChannel& block_op,
                            const std::vector<DensityMatrix>& slot_states,
                            const DimensionSpec& out_dims, int slot);

namespace detail {

/// Input operator on [in_1 .. in_n, ref] (ref mirrors slot's input space):
/// spectator states everywhere except the slot, which carries the
/// unnormalized maximally entangled pair with the reference. Propagating it
/// through block ⊗ id_ref and tracing all outputs but the slot yields the
/// marginal's Choi matrix.
Matrix marginal_input_operator(const std::vector<DensityMatrix>& slot_states, int slot);

}  // namespace detail

}  // namespace qrd

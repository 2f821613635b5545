#include "qrd/entropics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qrd {

namespace {

double clip_to_unit_range(double v, const char* what) {
  if (v < -Tolerances::range_slack || v > 1.0 + Tolerances::range_slack) {
    std::ostringstream os;
    os << what << ": value " << v << " outside [0,1] beyond tolerance";
    throw NumericError(os.str());
  }
  return std::clamp(v, 0.0, 1.0);
}

void require_square_channel(const DensityMatrix& rho, const KrausChannel& ch, const char* what) {
  if (ch.dim_in() != rho.dim() || ch.dim_out() != rho.dim())
    throw DimensionError(std::string(what) + ": channel must map the state space to itself");
}

// Joint reference-output state (id_R ⊗ ch)(|psi><psi|) for psi = purify(rho).
Matrix joint_output(const DensityMatrix& rho, const KrausChannel& ch) {
  const int d = rho.dim();
  Matrix proj = purify(rho).projector();
  const Matrix i_ref = Matrix::Identity(d, d);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d) * ch.dim_out(),
                            static_cast<Eigen::Index>(d) * ch.dim_out());
  for (const auto& a : ch.kraus()) {
    Matrix ext = tensor(i_ref, a);
    out += ext * proj * ext.adjoint();
  }
  return out;
}

double fe_kraus_form(const DensityMatrix& rho, const KrausChannel& ch) {
  double f = 0.0;
  for (const auto& a : ch.kraus()) f += std::norm((rho.matrix() * a).trace());
  return f;
}

double fe_purification_form(const DensityMatrix& rho, const KrausChannel& ch) {
  Vector psi = purify(rho).amplitudes();
  Matrix out = joint_output(rho, ch);
  return (psi.adjoint() * out * psi).real()(0, 0);
}

Matrix w_matrix(const DensityMatrix& rho, const KrausChannel& ch) {
  const int m = ch.kraus_count();
  Matrix w(m, m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l)
      w(k, l) = (ch.kraus()[static_cast<size_t>(k)] * rho.matrix() *
                 ch.kraus()[static_cast<size_t>(l)].adjoint())
                    .trace();
  return w;
}

int checked_int_power(int base, int exp) {
  long long v = 1;
  for (int i = 0; i < exp; ++i) {
    v *= base;
    if (v > (1 << 30)) throw DimensionError("block dimension overflow");
  }
  return static_cast<int>(v);
}

}  // namespace

Ensemble::Ensemble(std::vector<std::pair<double, PureState>> items) : items_(std::move(items)) {
  if (items_.empty()) throw ValidationError("Ensemble: at least one state required");
  const int d = items_.front().second.dim();
  double sum = 0.0;
  for (const auto& [p, state] : items_) {
    if (p < 0.0) throw ValidationError("Ensemble: probabilities must be nonnegative");
    if (state.dim() != d) throw DimensionError("Ensemble: all states must share one dimension");
    sum += p;
  }
  if (std::abs(sum - 1.0) > Tolerances::prob_sum)
    throw ValidationError("Ensemble: probabilities must sum to 1 within tolerance");
}

int Ensemble::dim() const { return items_.front().second.dim(); }

DensityMatrix Ensemble::average_state() const {
  Matrix avg = Matrix::Zero(dim(), dim());
  for (const auto& [p, state] : items_) avg += p * state.projector();
  return DensityMatrix(std::move(avg));
}

double entanglement_fidelity(const DensityMatrix& rho, const KrausChannel& ch, Eval mode) {
  require_square_channel(rho, ch, "entanglement_fidelity");
  if (mode == Eval::fast) return clip_to_unit_range(fe_kraus_form(rho, ch), "entanglement_fidelity");
  double via_purification = fe_purification_form(rho, ch);
  double via_kraus = fe_kraus_form(rho, ch);
  if (std::abs(via_purification - via_kraus) > Tolerances::cross_check_fidelity) {
    std::ostringstream os;
    os << "entanglement_fidelity: purification form " << via_purification
       << " and Kraus form " << via_kraus << " disagree beyond tolerance";
    throw NumericError(os.str());
  }
  return clip_to_unit_range(via_purification, "entanglement_fidelity");
}

double entropy_exchange(const DensityMatrix& rho, const KrausChannel& ch, Eval mode) {
  if (ch.dim_in() != rho.dim())
    throw DimensionError("entropy_exchange: state dimension does not match channel input");
  double se = detail::entropy_psd_bits(w_matrix(rho, ch));
  if (mode == Eval::checked) {
    double via_purification = detail::entropy_psd_bits(joint_output(rho, ch));
    if (std::abs(se - via_purification) > Tolerances::cross_check_entropy) {
      std::ostringstream os;
      os << "entropy_exchange: W-matrix form " << se << " and purification form "
         << via_purification << " disagree beyond tolerance";
      throw NumericError(os.str());
    }
  }
  if (se < -1e-9) throw NumericError("entropy_exchange: negative beyond tolerance");
  return se;
}

double coherent_information(const DensityMatrix& rho, const KrausChannel& ch, Eval mode) {
  if (ch.dim_in() != rho.dim())
    throw DimensionError("coherent_information: state dimension does not match channel input");
  double s_out = detail::entropy_psd_bits(apply_matrix(ch, rho.matrix()));
  return s_out - entropy_exchange(rho, ch, mode);
}

double avg_pure_state_fidelity(const Ensemble& ens, const KrausChannel& ch) {
  if (ch.dim_in() != ens.dim() || ch.dim_out() != ens.dim())
    throw DimensionError("avg_pure_state_fidelity: channel must map the ensemble space to itself");
  double f = 0.0;
  for (const auto& [p, state] : ens.items()) {
    Matrix out = apply_matrix(ch, state.projector());
    f += p * (state.amplitudes().adjoint() * out * state.amplitudes()).real()(0, 0);
  }
  return clip_to_unit_range(f, "avg_pure_state_fidelity");
}

double entanglement_distortion(const DensityMatrix& rho, const KrausChannel& ch, Eval mode) {
  return clip_to_unit_range(1.0 - entanglement_fidelity(rho, ch, mode), "entanglement_distortion");
}

std::vector<double> per_slot_distortions(const KrausChannel& encoder, const KrausChannel& decoder,
                                         const DensityMatrix& rho, int n) {
  if (n < 1) throw DimensionError("block distortion: block length must be >= 1");
  const int dn = checked_int_power(rho.dim(), n);
  if (encoder.dim_in() != dn)
    throw DimensionError("block distortion: encoder input must be n source copies");
  if (decoder.dim_in() != encoder.dim_out())
    throw DimensionError("block distortion: decoder input must match encoder output");
  if (decoder.dim_out() != dn)
    throw DimensionError("block distortion: decoder output must be n source copies");
  KrausChannel block = compose(decoder, encoder);
  std::vector<double> per_slot;
  per_slot.reserve(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i)
    per_slot.push_back(entanglement_distortion(rho, reduced_channel(block, rho, i, n)));
  return per_slot;
}

double block_distortion_e(const KrausChannel& encoder, const KrausChannel& decoder,
                          const DensityMatrix& rho, int n) {
  std::vector<double> per_slot = per_slot_distortions(encoder, decoder, rho, n);
  double sum = 0.0;
  for (double d : per_slot) sum += d;
  return sum / static_cast<double>(n);
}

double block_distortion_avg(const KrausChannel& encoder, const KrausChannel& decoder,
                            const Ensemble& ens, int n) {
  DensityMatrix avg = ens.average_state();
  if (n < 1) throw DimensionError("block distortion: block length must be >= 1");
  const int dn = checked_int_power(avg.dim(), n);
  if (encoder.dim_in() != dn || decoder.dim_out() != dn ||
      decoder.dim_in() != encoder.dim_out())
    throw DimensionError("block distortion: code dimensions inconsistent with ensemble");
  KrausChannel block = compose(decoder, encoder);
  double sum = 0.0;
  for (int i = 1; i <= n; ++i)
    sum += 1.0 - avg_pure_state_fidelity(ens, reduced_channel(block, avg, i, n));
  return clip_to_unit_range(sum / static_cast<double>(n), "block_distortion_avg");
}

namespace detail {

double fe_from_choi(const Matrix& rho, const Matrix& choi) {
  Vector v = vec_row_major(rho);
  return (v.adjoint() * choi * v).real()(0, 0);
}

}  // namespace detail

}  // namespace qrd

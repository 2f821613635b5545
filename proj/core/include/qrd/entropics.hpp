#pragma once

#include <utility>
#include <vector>

#include "qrd/channels.hpp"
#include "qrd/qmath.hpp"

namespace qrd {

/// Pure-state ensemble {(p_k, |phi_k>)} over one space.
class Ensemble {
public:
  explicit Ensemble(std::vector<std::pair<double, PureState>> items);

  int dim() const;
  const std::vector<std::pair<double, PureState>>& items() const { return items_; }
  /// sum_k p_k |phi_k><phi_k|.
  DensityMatrix average_state() const;

private:
  std::vector<std::pair<double, PureState>> items_;
};

/// How much consistency checking an entropic functional performs. `checked`
/// evaluates both the purification form and the Kraus form and requires them
/// to agree; `fast` evaluates the cheap form only. All reported results use
/// `checked`; `fast` exists for optimizer inner loops.
enum class Eval { checked, fast };

/// F_e(rho, ch) = <psi| (id ⊗ ch)(|psi><psi|) |psi> for a purification psi of
/// rho; the checked form also evaluates sum_k |tr(rho A_k)|² and requires
/// agreement within Tolerances::cross_check_fidelity. Requires
/// ch.dim_in == ch.dim_out == rho.dim.
double entanglement_fidelity(const DensityMatrix& rho, const KrausChannel& ch,
                             Eval mode = Eval::checked);

/// S_e = S(W) in bits with W_kl = tr(A_k rho A_l†); the checked form
/// cross-checks against the joint reference-output entropy. Accepts
/// dimension-changing channels with ch.dim_in == rho.dim.
double entropy_exchange(const DensityMatrix& rho, const KrausChannel& ch,
                        Eval mode = Eval::checked);

/// I_c = S(ch(rho)) - S_e(rho, ch) in bits.
double coherent_information(const DensityMatrix& rho, const KrausChannel& ch,
                            Eval mode = Eval::checked);

/// F̄ = sum_k p_k <phi_k| ch(|phi_k><phi_k|) |phi_k>.
double avg_pure_state_fidelity(const Ensemble& ens, const KrausChannel& ch);

/// d = 1 - F_e; affine in the channel under mixing.
double entanglement_distortion(const DensityMatrix& rho, const KrausChannel& ch,
                               Eval mode = Eval::checked);

/// Per-slot entanglement distortions 1 - F_e(rho, T_i) of the block operation
/// decoder ∘ encoder against an i.i.d. source, i = 1..n.
std::vector<double> per_slot_distortions(const KrausChannel& encoder, const KrausChannel& decoder,
                                         const DensityMatrix& rho, int n);

/// D_e = (1/n) sum_i (1 - F_e(rho, T_i)).
double block_distortion_e(const KrausChannel& encoder, const KrausChannel& decoder,
                          const DensityMatrix& rho, int n);

/// D̄ = (1/n) sum_i (1 - F̄(ens, T_i)), with the ensemble-average state in the
/// untouched slots.
double block_distortion_avg(const KrausChannel& encoder, const KrausChannel& decoder,
                            const Ensemble& ens, int n);

namespace detail {

/// F_e evaluated directly from a Choi matrix (out⊗in, unnormalized):
/// F_e = vec(rho)† J vec(rho). Smooth in J; no Kraus extraction.
double fe_from_choi(const Matrix& rho, const Matrix& choi);

}  // namespace detail

}  // namespace qrd

#pragma once

#include "oblique/frame_core.hpp"

namespace oblique {

struct RefinementResult {
    FiniteFrame refined;
    int order = 0;                 ///< N
    double predicted_bound = 0.0;  ///< eps^{N+1}
    double measured_defect = 0.0;
};

/// Neumann refinement of G: T_{G_N} = L_N T_G with
/// L_N = sum_{n=0..N} D^n, D = pi_{V W^perp} - T_G T_F*.
/// The refined frame is an eps^{N+1}-approximate oblique dual of F.
/// Refuses when the input defect is >= 1 unless `force` is set.
RefinementResult refine_dual(const FiniteFrame& f, const FiniteFrame& g,
                             const Subspace& w, const Subspace& v,
                             int order, bool force = false);

/// Mirror refinement acting on F: T_{F_N} = L_N* T_F. The pair (F_N, G)
/// has the same eps^{N+1} defect bound.
RefinementResult refine_dual_other_side(const FiniteFrame& f, const FiniteFrame& g,
                                        const Subspace& w, const Subspace& v,
                                        int order, bool force = false);

/// Exact oblique dual recovered as the Neumann limit: g~_k = L T_G delta_k
/// with L = (I - D)^{-1}, computed by a dense solve.
FiniteFrame limit_dual(const FiniteFrame& f, const FiniteFrame& g,
                       const Subspace& w, const Subspace& v);

/// Exact oblique dual of G obtained by inverting T_F T_G* on W:
/// f'_k = ((T_F T_G*)|_W)^{-1} f_k.
FiniteFrame exact_dual_via_inverse(const FiniteFrame& f, const FiniteFrame& g,
                                   const Subspace& w, const Subspace& v);

struct DualFamilyResult {
    FiniteFrame frame;
    /// ||T_r T_F*||, the exact defect contributed by the residual sequence.
    double residual_coupling = 0.0;
};

/// Member of the approximate oblique dual family of F in V:
///   g_k = pi_{V W^perp} S^dagger f_k + h_k - sum_j <S^dagger f_k, f_j> h_j + r_k.
/// h and r must be sequences in V of the same length as F.
DualFamilyResult dual_family_member(const FiniteFrame& f,
                                    const Subspace& w, const Subspace& v,
                                    const FiniteFrame& h, const FiniteFrame& r);

/// Guaranteed defect bound sqrt(beta * r) for an r-perturbation (Bessel
/// sense) of an exact oblique dual, beta the dual partner's upper bound.
double perturbation_eps_bound(double beta, double r);

/// Oblique dual in V of a perturbed frame living in W:
///   g_k = pi_{V W^perp} S_Gtil^dagger g~_k.
FiniteFrame perturbed_canonical_oblique_dual(const FiniteFrame& gtil,
                                             const Subspace& w, const Subspace& v);

} // namespace oblique

#pragma once

#include "oblique/types.hpp"

namespace oblique {

/// T_F c = sum_k c_k f_k.
Vector synthesis(const FiniteFrame& f, const Vector& coeffs);

/// T_F* x = (<x, f_k>)_k. Adjoint of synthesis.
Vector analysis(const FiniteFrame& f, const Vector& x);

/// Frame operator S = T T*. Hermitian positive semidefinite.
Matrix frame_operator(const FiniteFrame& f);

struct FrameBounds {
    double lower = 0.0;  ///< optimal lower bound on span(F)
    double upper = 0.0;  ///< optimal upper bound ||T||^2
    bool spans = true;   ///< false when F is rank deficient on W
};

/// Optimal frame bounds of F as a frame for W. If F does not span W the
/// lower bound refers to span(F) and `spans` is false.
FrameBounds optimal_frame_bounds(const FiniteFrame& f, const Subspace& w);

/// Canonical dual {S^dagger f_k} of a frame for W.
FiniteFrame canonical_dual(const FiniteFrame& f, const Subspace& w);

/// Oblique projection with range W and null space V^perp:
///   pi = B_W (B_V* B_W)^{-1} B_V*.
/// Throws numerical_error when the cross-Gram is singular (W ⊕ V⊥ fails).
Matrix oblique_projection(const Subspace& w, const Subspace& v);

/// cos of the angle from V to W: inf over unit v in V of ||P_W v||,
/// i.e. the smallest singular value of B_W* B_V.
double subspace_angle_cos(const Subspace& v, const Subspace& w);

/// Checks H = W ⊕ V⊥ via both angle cosines and the cross-Gram.
DualityReport direct_sum_check(const Subspace& w, const Subspace& v,
                               double tau = kDirectSumTol);

/// ||pi_{W V^perp} - T_F T_G*||. The adjoint form
/// ||pi_{V W^perp} - T_G T_F*|| is computed as a cross-check and must agree
/// within 1e-10.
double duality_defect(const FiniteFrame& f, const FiniteFrame& g,
                      const Subspace& w, const Subspace& v);

/// T_G T_F* x = sum_k <x, f_k> g_k.
Vector reconstruct(const FiniteFrame& f, const FiniteFrame& g, const Vector& x);

/// ||T_F*(f_r - f)|| / ||f||. Throws input_error when f = 0.
double consistency_defect(const FiniteFrame& f, const Vector& x, const Vector& x_r);

} // namespace oblique

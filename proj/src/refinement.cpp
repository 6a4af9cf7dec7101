#include "oblique/refinement.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

namespace oblique {

namespace {

/// Defect operator D = pi_{V W^perp} - T_G T_F*.
Matrix defect_operator(const FiniteFrame& f, const FiniteFrame& g,
                       const Subspace& w, const Subspace& v) {
    return oblique_projection(v, w) - g.synthesis() * f.synthesis().adjoint();
}

/// L_N = sum_{n=0..N} D^n.
Matrix neumann_partial_sum(const Matrix& d, int order) {
    Matrix acc = Matrix::Identity(d.rows(), d.cols());
    Matrix power = Matrix::Identity(d.rows(), d.cols());
    for (int n = 1; n <= order; ++n) {
        power = d * power;
        acc += power;
    }
    return acc;
}

double checked_input_defect(const FiniteFrame& f, const FiniteFrame& g,
                            const Subspace& w, const Subspace& v,
                            bool force, const char* what) {
    const double eps = duality_defect(f, g, w, v);
    if (eps >= 1.0 && !force)
        throw numerical_error(std::string(what) +
                              ": input defect >= 1, refinement not guaranteed");
    return eps;
}

} // namespace

RefinementResult refine_dual(const FiniteFrame& f, const FiniteFrame& g,
                             const Subspace& w, const Subspace& v,
                             int order, bool force) {
    if (order < 0) throw input_error("refine_dual: order must be nonnegative");
    const double eps = checked_input_defect(f, g, w, v, force, "refine_dual");
    const Matrix d = defect_operator(f, g, w, v);
    FiniteFrame refined(neumann_partial_sum(d, order) * g.synthesis());
    const double measured = duality_defect(f, refined, w, v);
    return {std::move(refined), order, std::pow(eps, order + 1), measured};
}

RefinementResult refine_dual_other_side(const FiniteFrame& f, const FiniteFrame& g,
                                        const Subspace& w, const Subspace& v,
                                        int order, bool force) {
    if (order < 0) throw input_error("refine_dual_other_side: order must be nonnegative");
    const double eps = checked_input_defect(f, g, w, v, force, "refine_dual_other_side");
    const Matrix d = defect_operator(f, g, w, v);
    FiniteFrame refined(neumann_partial_sum(d, order).adjoint() * f.synthesis());
    const double measured = duality_defect(refined, g, w, v);
    return {std::move(refined), order, std::pow(eps, order + 1), measured};
}

FiniteFrame limit_dual(const FiniteFrame& f, const FiniteFrame& g,
                       const Subspace& w, const Subspace& v) {
    checked_input_defect(f, g, w, v, false, "limit_dual");
    const Matrix d = defect_operator(f, g, w, v);
    const Matrix lhs = Matrix::Identity(d.rows(), d.cols()) - d;
    Eigen::PartialPivLU<Matrix> lu(lhs);
    const Matrix solved = lu.solve(g.synthesis());
    if ((lhs * solved - g.synthesis()).norm() > 1e-8 * (1.0 + g.synthesis().norm()))
        throw numerical_error("limit_dual: I - D is numerically singular");
    return FiniteFrame(solved);
}

FiniteFrame exact_dual_via_inverse(const FiniteFrame& f, const FiniteFrame& g,
                                   const Subspace& w, const Subspace& v) {
    checked_input_defect(f, g, w, v, false, "exact_dual_via_inverse");
    const Matrix cross = f.synthesis() * g.synthesis().adjoint();
    const Matrix restricted = w.basis().adjoint() * cross * w.basis();
    Eigen::JacobiSVD<Matrix> svd(restricted);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= kRankRelTol * sv(0))
        throw numerical_error("exact_dual_via_inverse: restricted operator is singular");
    const Matrix inv_on_w =
        w.basis() * restricted.partialPivLu().solve(w.basis().adjoint().eval());
    return FiniteFrame(inv_on_w * f.synthesis());
}

DualFamilyResult dual_family_member(const FiniteFrame& f,
                                    const Subspace& w, const Subspace& v,
                                    const FiniteFrame& h, const FiniteFrame& r) {
    if (h.size() != f.size() || r.size() != f.size() ||
        h.dim() != f.dim() || r.dim() != f.dim())
        throw input_error("dual_family_member: h and r must match F in shape");
    const Matrix pv = v.projector();
    auto in_v = [&](const FiniteFrame& seq) {
        return (seq.synthesis() - pv * seq.synthesis()).norm() <=
               1e-10 * (1.0 + seq.synthesis().norm());
    };
    if (!in_v(h) || !in_v(r))
        throw input_error("dual_family_member: h and r must lie in V");

    const Matrix pi_vw = oblique_projection(v, w);
    const Matrix s_pinv = pseudo_inverse(frame_operator(f));
    const Matrix tf = f.synthesis();
    const Matrix tg = pi_vw * s_pinv * tf +
                      h.synthesis() * (Matrix::Identity(f.size(), f.size()) -
                                       tf.adjoint() * s_pinv * tf) +
                      r.synthesis();
    const double coupling = operator_norm(r.synthesis() * tf.adjoint());
    return {FiniteFrame(tg), coupling};
}

double perturbation_eps_bound(double beta, double r) {
    if (beta <= 0.0 || r < 0.0)
        throw input_error("perturbation_eps_bound: beta must be positive, r nonnegative");
    return std::sqrt(beta * r);
}

FiniteFrame perturbed_canonical_oblique_dual(const FiniteFrame& gtil,
                                             const Subspace& w, const Subspace& v) {
    const Matrix residual = gtil.synthesis() - w.projector() * gtil.synthesis();
    if (residual.norm() > 1e-10 * (1.0 + gtil.synthesis().norm()))
        throw input_error("perturbed_canonical_oblique_dual: frame must lie in W");
    const Matrix s_on_w = w.basis().adjoint() * frame_operator(gtil) * w.basis();
    Eigen::JacobiSVD<Matrix> svd(s_on_w);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= kRankRelTol * sv(0))
        throw numerical_error("perturbed_canonical_oblique_dual: frame is rank deficient on W");
    const Matrix pi_vw = oblique_projection(v, w);
    return FiniteFrame(pi_vw * pseudo_inverse(frame_operator(gtil)) * gtil.synthesis());
}

} // namespace oblique

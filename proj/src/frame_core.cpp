#include "oblique/frame_core.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace oblique {

namespace {

void require_in_subspace(const FiniteFrame& f, const Subspace& s, const char* what) {
    const Matrix residual = f.synthesis() - s.projector() * f.synthesis();
    if (residual.norm() > 1e-10 * (1.0 + f.synthesis().norm()))
        throw input_error(std::string(what) + ": frame vectors do not lie in the subspace");
}

/// True when B_s* T has full row rank, i.e. the frame spans the subspace.
bool spans_subspace(const FiniteFrame& f, const Subspace& s) {
    const Matrix m = s.basis().adjoint() * f.synthesis();
    if (m.cols() < m.rows()) return false;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1) > kRankRelTol * sv(0);
}

} // namespace

Vector synthesis(const FiniteFrame& f, const Vector& coeffs) {
    if (coeffs.size() != f.size())
        throw input_error("synthesis: coefficient length must equal frame size");
    return f.synthesis() * coeffs;
}

Vector analysis(const FiniteFrame& f, const Vector& x) {
    if (x.size() != f.dim())
        throw input_error("analysis: vector dimension mismatch");
    return f.synthesis().adjoint() * x;
}

Matrix frame_operator(const FiniteFrame& f) {
    return f.synthesis() * f.synthesis().adjoint();
}

FrameBounds optimal_frame_bounds(const FiniteFrame& f, const Subspace& w) {
    require_in_subspace(f, w, "optimal_frame_bounds");
    Eigen::JacobiSVD<Matrix> svd(f.synthesis());
    const auto& sv = svd.singularValues();
    FrameBounds out;
    out.upper = sv(0) * sv(0);
    const double cutoff = kRankRelTol * sv(0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    out.lower = sv(rank - 1) * sv(rank - 1);
    out.spans = rank >= w.dim();
    return out;
}

FiniteFrame canonical_dual(const FiniteFrame& f, const Subspace& w) {
    require_in_subspace(f, w, "canonical_dual");
    const Matrix s = frame_operator(f);
    const Matrix s_on_w = w.basis().adjoint() * s * w.basis();
    Eigen::JacobiSVD<Matrix> svd(s_on_w);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= kRankRelTol * sv(0))
        throw numerical_error("canonical_dual: frame operator is rank deficient on W");
    return FiniteFrame(pseudo_inverse(s) * f.synthesis());
}

Matrix oblique_projection(const Subspace& w, const Subspace& v) {
    if (w.ambient_dim() != v.ambient_dim())
        throw input_error("oblique_projection: ambient dimensions differ");
    if (w.dim() != v.dim())
        throw input_error("oblique_projection: subspace dimensions differ");
    const Matrix gram = v.basis().adjoint() * w.basis();
    Eigen::JacobiSVD<Matrix> svd(gram, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double sigma_min = svd.singularValues().minCoeff();
    if (sigma_min <= kDirectSumTol)
        throw numerical_error("oblique_projection: direct sum W + V_perp fails, "
                              "cross-Gram sigma_min = " + std::to_string(sigma_min));
    return w.basis() * gram.partialPivLu().solve(v.basis().adjoint().eval());
}

double subspace_angle_cos(const Subspace& v, const Subspace& w) {
    if (v.dim() < 1)
        throw input_error("subspace_angle_cos: empty subspace");
    const Matrix m = w.basis().adjoint() * v.basis();
    if (m.cols() > m.rows()) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().minCoeff();
}

DualityReport direct_sum_check(const Subspace& w, const Subspace& v, double tau) {
    DualityReport report;
    report.cos_WV = subspace_angle_cos(w, v);
    report.cos_VW = subspace_angle_cos(v, w);
    report.direct_sum_ok = report.cos_WV > tau && report.cos_VW > tau;
    if (w.dim() == v.dim()) {
        Eigen::JacobiSVD<Matrix> svd(v.basis().adjoint() * w.basis());
        report.gram_sigma_min = svd.singularValues().minCoeff();
    }
    return report;
}

double duality_defect(const FiniteFrame& f, const FiniteFrame& g,
                      const Subspace& w, const Subspace& v) {
    require_in_subspace(f, w, "duality_defect");
    require_in_subspace(g, v, "duality_defect");
    if (!spans_subspace(f, w))
        throw input_error("duality_defect: F does not span W");
    if (!spans_subspace(g, v))
        throw input_error("duality_defect: G does not span V");
    const Matrix pi_wv = oblique_projection(w, v);
    const Matrix cross = f.synthesis() * g.synthesis().adjoint();
    const double defect = operator_norm(pi_wv - cross);
    const double defect_adj = operator_norm(pi_wv.adjoint() - cross.adjoint());
    if (std::abs(defect - defect_adj) > 1e-10)
        throw numerical_error("duality_defect: adjoint forms disagree beyond tolerance");
    return defect;
}

Vector reconstruct(const FiniteFrame& f, const FiniteFrame& g, const Vector& x) {
    if (x.size() != f.dim() || f.size() != g.size())
        throw input_error("reconstruct: dimension mismatch");
    return g.synthesis() * (f.synthesis().adjoint() * x);
}

double consistency_defect(const FiniteFrame& f, const Vector& x, const Vector& x_r) {
    if (x.size() != f.dim() || x_r.size() != f.dim())
        throw input_error("consistency_defect: dimension mismatch");
    const double nx = x.norm();
    if (nx == 0.0)
        throw input_error("consistency_defect: reference vector is zero");
    return (f.synthesis().adjoint() * (x_r - x)).norm() / nx;
}

} // namespace oblique

#include "oblique/types.hpp"

#include <Eigen/SVD>

namespace oblique {

double operator_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

Matrix pseudo_inverse(const Matrix& a) {
    if (a.size() == 0) return a.adjoint();
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = kRankRelTol * sv(0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Subspace::Subspace(const Matrix& spanning) {
    if (spanning.rows() < 1 || spanning.cols() < 1)
        throw input_error("subspace needs at least one spanning vector");
    if (spanning.rows() > kMaxDim)
        throw input_error("ambient dimension exceeds supported cap");
    Eigen::JacobiSVD<Matrix> svd(spanning, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0)
        throw input_error("spanning set is identically zero");
    const double cutoff = kRankRelTol * sv(0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    basis_ = svd.matrixU().leftCols(rank);
}

Subspace Subspace::from_orthonormal(Matrix basis) {
    Subspace s;
    s.basis_ = std::move(basis);
    return s;
}

Subspace Subspace::orthogonal_complement() const {
    const int d = ambient_dim();
    const int r = dim();
    if (r >= d)
        throw input_error("orthogonal complement of the full space is trivial");
    Eigen::JacobiSVD<Matrix> svd(basis_, Eigen::ComputeFullU);
    return from_orthonormal(svd.matrixU().rightCols(d - r));
}

bool Subspace::contains(const Vector& v, double tol) const {
    const Vector residual = v - basis_ * (basis_.adjoint() * v);
    return residual.norm() <= tol * (1.0 + v.norm());
}

FiniteFrame::FiniteFrame(Matrix synthesis) : synthesis_(std::move(synthesis)) {
    if (synthesis_.rows() < 1 || synthesis_.cols() < 1)
        throw input_error("frame needs at least one vector");
    if (synthesis_.rows() > kMaxDim)
        throw input_error("ambient dimension exceeds supported cap");
}

FiniteFrame FiniteFrame::from_vectors(const std::vector<Vector>& vectors) {
    if (vectors.empty())
        throw input_error("frame needs at least one vector");
    const Eigen::Index d = vectors.front().size();
    Matrix t(d, static_cast<Eigen::Index>(vectors.size()));
    for (size_t k = 0; k < vectors.size(); ++k) {
        if (vectors[k].size() != d)
            throw input_error("frame vectors must share one dimension");
        t.col(static_cast<Eigen::Index>(k)) = vectors[k];
    }
    return FiniteFrame(std::move(t));
}

} // namespace oblique

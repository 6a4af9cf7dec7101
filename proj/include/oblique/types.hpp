#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "oblique/errors.hpp"

namespace oblique {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Smallest singular value of the cross-Gram below which W ⊕ V⊥ is
/// considered to fail.
inline constexpr double kDirectSumTol = 1e-10;

/// Relative singular-value cutoff for numerical-rank decisions
/// (pseudo-inverses, span checks).
inline constexpr double kRankRelTol = 1e-12;

/// Dense-SVD computations are capped at this ambient dimension.
inline constexpr int kMaxDim = 2000;

/// Largest singular value of a dense matrix. Zero for empty matrices.
double operator_norm(const Matrix& a);

/// Moore-Penrose pseudo-inverse with relative cutoff kRankRelTol * sigma_max.
Matrix pseudo_inverse(const Matrix& a);

/// A closed subspace of C^d stored through an orthonormal basis.
/// Any spanning set is accepted; construction orthonormalizes via SVD and
/// drops directions below the numerical-rank cutoff.
class Subspace {
public:
    explicit Subspace(const Matrix& spanning);

    const Matrix& basis() const { return basis_; }
    int ambient_dim() const { return static_cast<int>(basis_.rows()); }
    int dim() const { return static_cast<int>(basis_.cols()); }

    /// Orthonormal completion: the subspace W⊥.
    Subspace orthogonal_complement() const;

    /// Orthogonal projector P = B B*.
    Matrix projector() const { return basis_ * basis_.adjoint(); }

    bool contains(const Vector& v, double tol = 1e-10) const;

    /// Wraps an already-orthonormal basis without re-factorizing.
    static Subspace from_orthonormal(Matrix basis);

private:
    Subspace() = default;
    Matrix basis_;
};

/// A finite frame {f_k} in C^d, held as its synthesis matrix T (d x m,
/// k-th column = f_k).
class FiniteFrame {
public:
    explicit FiniteFrame(Matrix synthesis);
    static FiniteFrame from_vectors(const std::vector<Vector>& vectors);

    const Matrix& synthesis() const { return synthesis_; }
    int dim() const { return static_cast<int>(synthesis_.rows()); }
    int size() const { return static_cast<int>(synthesis_.cols()); }
    Vector vec(int k) const { return synthesis_.col(k); }

    /// Span of the frame vectors as a Subspace.
    Subspace span() const { return Subspace(synthesis_); }

private:
    Matrix synthesis_;
};

/// Outcome of a duality check between two frames relative to (W, V).
struct DualityReport {
    double defect = 0.0;       ///< ||pi_{W V^perp} - T_F T_G*||
    bool direct_sum_ok = false;
    double cos_WV = 0.0;       ///< cos of the angle from W to V
    double cos_VW = 0.0;       ///< cos of the angle from V to W
    double gram_sigma_min = 0.0;
};

} // namespace oblique

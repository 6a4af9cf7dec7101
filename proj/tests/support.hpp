#pragma once

#include <random>

#include <Eigen/SVD>

#include "oblique/frame_core.hpp"
#include "oblique/types.hpp"

namespace testsupport {

using oblique::Complex;
using oblique::FiniteFrame;
using oblique::Matrix;
using oblique::Subspace;
using oblique::Vector;

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

inline Subspace random_subspace(std::mt19937_64& rng, int d, int r) {
    return Subspace(random_matrix(rng, d, r));
}

/// W, V of equal dimension with a well-conditioned cross-Gram, an exact frame
/// F for W, and its canonical oblique dual G in V.
struct Instance {
    Subspace w;
    Subspace v;
    FiniteFrame f;
    FiniteFrame g_exact;
};

inline Instance make_instance(std::mt19937_64& rng, int d, int r, int extra = 2) {
    const Subspace w = random_subspace(rng, d, r);
    Subspace v = w;
    for (int attempt = 0; attempt < 100; ++attempt) {
        Subspace cand(w.basis() + 0.5 * random_matrix(rng, d, r));
        if (cand.dim() != r) continue;
        Eigen::JacobiSVD<Matrix> svd(cand.basis().adjoint() * w.basis());
        if (svd.singularValues().minCoeff() > 0.25) {
            v = cand;
            break;
        }
    }
    const int m = r + extra;
    const FiniteFrame f(w.basis() * random_matrix(rng, r, m));
    const Matrix pi_vw = oblique::oblique_projection(v, w);
    const FiniteFrame g(pi_vw * oblique::pseudo_inverse(oblique::frame_operator(f)) *
                        f.synthesis());
    return {w, v, f, g};
}

/// Perturbs the exact dual inside V so the duality defect is exactly eps.
inline FiniteFrame perturb_dual(std::mt19937_64& rng, const Instance& in, double eps) {
    const Matrix noise = in.v.projector() * random_matrix(rng, in.f.dim(), in.f.size());
    const double coupling = oblique::operator_norm(noise * in.f.synthesis().adjoint());
    return FiniteFrame(in.g_exact.synthesis() + (eps / coupling) * noise);
}

} // namespace testsupport

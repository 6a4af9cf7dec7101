#pragma once

#include <vector>

#include "oblique/shift_invariant.hpp"

namespace oblique::bspline {

/// Orders beyond this are outside double-precision comfort.
inline constexpr int kMaxOrder = 20;

/// Fourier transform of the centered B-spline of order m:
/// gamma -> sinc(gamma)^m with sinc(0) = 1. Decay majorant (pi |gamma|)^{-m}.
si::GeneratorSpec bspline_ft(int order);

/// Centered B-spline value B_m(x), support [-m/2, m/2], integral 1.
double bspline_time(int order, double x);

struct TruncatedDualGenerator {
    int truncation = 0;                 ///< K
    si::TruncatedSymbol symbol;         ///< c_{-K..K}
    double support_lo = 0.0;            ///< -(3+2K)/2
    double support_hi = 0.0;            ///< +(3+2K)/2
    double eps = 0.0;                   ///< certified sufficient error
};

/// The truncated dual generator psi_K = sum_{|k| <= K} c_k T_k B_3 of the
/// pair (B_1, B_3): dual symbol, Fourier coefficients to order K, and the
/// certified error of the K-term symbol.
TruncatedDualGenerator truncated_dual_generator(int truncation, int grid_log2 = 16);

struct TableRow {
    int truncation = 0;
    double support_lo = 0.0;
    double support_hi = 0.0;
    double eps = 0.0;
};

/// Rows (K, supp(psi_K), eps) for K = 0..k_max.
std::vector<TableRow> example_table(int k_max, int grid_log2 = 16);

struct PsiSample {
    double x = 0.0;
    double value = 0.0;
};

/// psi_K(x) = sum_{|k| <= K} c_k B_3(x - k) sampled uniformly over its support.
std::vector<PsiSample> emit_psi_samples(int truncation, int n_samples,
                                        int grid_log2 = 16);

} // namespace oblique::bspline

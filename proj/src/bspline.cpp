#include "oblique/bspline.hpp"

#include <cmath>
#include <numbers>

#include "oblique/errors.hpp"

namespace oblique::bspline {

namespace {

void check_order(int order) {
    if (order < 1 || order > kMaxOrder)
        throw input_error("B-spline order must be in [1, " +
                          std::to_string(kMaxOrder) + "]");
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

} // namespace

si::GeneratorSpec bspline_ft(int order) {
    check_order(order);
    si::GeneratorSpec g = si::GeneratorSpec::plain(
        [order](double xi) {
            return Complex(std::pow(sinc(xi), order), 0.0);
        },
        si::DecayBound{1.0, static_cast<double>(order), 1.0});
    g.bspline_order = order;
    return g;
}

double bspline_time(int order, double x) {
    check_order(order);
    const double half = 0.5 * order;
    if (std::abs(x) > half) return 0.0;
    if (order == 1) return std::abs(x) == half ? 0.5 : 1.0;

    // truncated-power form: B_m(x) = (1/(m-1)!) sum_j (-1)^j C(m,j) (x+m/2-j)_+^{m-1}
    double acc = 0.0;
    double binom = 1.0;
    double sign = 1.0;
    for (int j = 0; j <= order; ++j) {
        const double t = x + half - j;
        if (t > 0.0) acc += sign * binom * std::pow(t, order - 1);
        sign = -sign;
        binom = binom * (order - j) / (j + 1);
    }
    double factorial = 1.0;
    for (int k = 2; k < order; ++k) factorial *= k;
    return std::max(acc / factorial, 0.0);
}

TruncatedDualGenerator truncated_dual_generator(int truncation, int grid_log2) {
    if (truncation < 0)
        throw input_error("truncated_dual_generator: truncation must be nonnegative");
    const si::GeneratorSpec phi = bspline_ft(1);
    const si::GeneratorSpec phi1 = bspline_ft(3);

    const si::PeriodicFunction h_tilde = si::dual_symbol(phi, phi1, grid_log2);
    TruncatedDualGenerator out;
    out.truncation = truncation;
    out.symbol = si::fourier_coefficients(h_tilde, truncation);
    out.support_lo = -(3.0 + 2.0 * truncation) / 2.0;
    out.support_hi = (3.0 + 2.0 * truncation) / 2.0;
    out.eps = si::sufficient_eps(phi, phi1, out.symbol, grid_log2);
    return out;
}

std::vector<TableRow> example_table(int k_max, int grid_log2) {
    if (k_max < 0)
        throw input_error("example_table: k_max must be nonnegative");
    std::vector<TableRow> rows;
    rows.reserve(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        const TruncatedDualGenerator d = truncated_dual_generator(k, grid_log2);
        rows.push_back({k, d.support_lo, d.support_hi, d.eps});
    }
    return rows;
}

std::vector<PsiSample> emit_psi_samples(int truncation, int n_samples, int grid_log2) {
    if (n_samples < 2)
        throw input_error("emit_psi_samples: need at least two samples");
    const TruncatedDualGenerator d = truncated_dual_generator(truncation, grid_log2);
    std::vector<PsiSample> samples;
    samples.reserve(n_samples);
    const double step = (d.support_hi - d.support_lo) / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) {
        const double x = d.support_lo + step * i;
        double value = 0.0;
        for (int k = -truncation; k <= truncation; ++k)
            value += d.symbol.coeff(k).real() * bspline_time(3, x - k);
        samples.push_back({x, value});
    }
    return samples;
}

} // namespace oblique::bspline

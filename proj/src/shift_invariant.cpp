#include "oblique/shift_invariant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oblique/bspline.hpp"

namespace oblique::si {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Compensated (Kahan) accumulator; keeps long grid sums deterministic and
/// accurate to a few ulp independent of length.
struct KahanSum {
    Complex sum{0.0, 0.0};
    Complex carry{0.0, 0.0};
    void add(Complex x) {
        const Complex y = x - carry;
        const Complex t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

void check_grid(int grid_log2) {
    if (grid_log2 < 2 || grid_log2 > 22)
        throw input_error("grid_log2 must be in [2, 22]");
}

bool compact(const DecayBound& d) { return d.amplitude == 0.0; }

/// Summation radius for the periodization of phi^ psi^~, chosen so the
/// neglected tail majorant stays below kTailTol.
double periodization_radius(const DecayBound& a, const DecayBound& b) {
    if (compact(a) || compact(b)) {
        double r = compact(a) ? a.radius : b.radius;
        if (compact(a) && compact(b)) r = std::min(a.radius, b.radius);
        return r + 1.0;
    }
    const double p = a.exponent + b.exponent;
    if (p <= 1.0)
        throw input_error("bracket: combined decay exponent <= 1, tail not summable");
    const double amp = a.amplitude * b.amplitude;
    const double scale = 2.0 * amp * std::pow(std::numbers::pi, -p);
    double radius = std::max({a.radius, b.radius, 2.0});
    while (scale * (std::pow(radius, 1.0 - p) / (p - 1.0) + std::pow(radius, -p)) >=
           kTailTol) {
        radius *= 2.0;
        if (radius > kMaxTailRadius)
            throw input_error("bracket: decay too slow to reach the tail tolerance");
    }
    return radius;
}

/// Cosine coefficients of the exact B-spline bracket: r_k = B_{a+b}(k).
std::vector<double> bspline_bracket_coeffs(int order_a, int order_b) {
    const int p = order_a + order_b;
    std::vector<double> r;
    for (int k = 0; 2 * k < p; ++k)
        r.push_back(bspline::bspline_time(p, static_cast<double>(k)));
    return r;
}

double bspline_bracket_at(const std::vector<double>& r, double gamma) {
    double acc = r[0];
    for (size_t k = 1; k < r.size(); ++k)
        acc += 2.0 * r[k] * std::cos(kTwoPi * static_cast<double>(k) * gamma);
    return acc;
}

Complex direct_bracket_at(const GeneratorSpec& phi, const GeneratorSpec& psi,
                          double gamma, double radius) {
    KahanSum acc;
    const long n_max = static_cast<long>(std::ceil(radius));
    for (long n = -n_max; n <= n_max; ++n) {
        const double xi = gamma + static_cast<double>(n);
        acc.add(phi.ft(xi) * std::conj(psi.ft(xi)));
    }
    return acc.sum;
}

std::vector<bool> nonzero_mask(const Eigen::VectorXd& phi_grid) {
    const double tau = kZeroSetRelTol * phi_grid.maxCoeff();
    std::vector<bool> mask(phi_grid.size());
    for (Eigen::Index j = 0; j < phi_grid.size(); ++j) mask[j] = phi_grid(j) > tau;
    return mask;
}

Eigen::VectorXd real_nonnegative(const PeriodicFunction& p, const char* what) {
    const double scale = p.samples.cwiseAbs().maxCoeff();
    Eigen::VectorXd out(p.size());
    for (int j = 0; j < p.size(); ++j) {
        const Complex v = p.samples(j);
        if (std::abs(v.imag()) > 1e-12 * std::max(1.0, scale) ||
            v.real() < -1e-12 * std::max(1.0, scale))
            throw input_error(std::string(what) + ": samples must be real nonnegative");
        out(j) = std::max(v.real(), 0.0);
    }
    return out;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    constexpr double ratio = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 80; ++i) {
        if (fc < fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        }
    }
    return std::max(fc, fd);
}

/// Grid sup of `objective` over masked cells, sharpened by one golden-section
/// pass around the best cell when its neighborhood stays inside the mask.
double masked_sup(const std::vector<bool>& mask, const Eigen::VectorXd& grid_values,
                  int n, const std::function<double(double)>& objective) {
    double best = -1.0;
    int best_j = -1;
    for (int j = 0; j < n; ++j) {
        if (!mask[j]) continue;
        if (grid_values(j) > best) {
            best = grid_values(j);
            best_j = j;
        }
    }
    if (best_j < 0)
        throw numerical_error("empty nonzero set of Phi");
    const int prev = (best_j + n - 1) % n;
    const int next = (best_j + 1) % n;
    if (mask[prev] && mask[next]) {
        const double h = 1.0 / n;
        const double center = static_cast<double>(best_j) * h;
        best = std::max(best, golden_max(objective, center - h, center + h));
    }
    return best;
}

} // namespace

Complex TruncatedSymbol::at(double gamma) const {
    const int k_max = order();
    KahanSum acc;
    for (int k = -k_max; k <= k_max; ++k)
        acc.add(coeff(k) * std::polar(1.0, -kTwoPi * k * gamma));
    return acc.sum;
}

Complex PeriodicFunction::interp(double gamma) const {
    const int n = size();
    const double t = (gamma - std::floor(gamma)) * n;
    const int j = static_cast<int>(std::floor(t));
    const double u = t - j;
    // cubic Lagrange through samples j-1 .. j+2
    const double w0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
    const double w1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    const double w2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
    const double w3 = (u + 1.0) * u * (u - 1.0) / 6.0;
    auto s = [&](int idx) { return samples(((idx % n) + n) % n); };
    return w0 * s(j - 1) + w1 * s(j) + w2 * s(j + 1) + w3 * s(j + 2);
}

Complex GeneratorSpec::ft(double xi) const {
    if (is_modulated()) return symbol.at(xi) * base->ft(xi);
    return fourier_transform(xi);
}

GeneratorSpec GeneratorSpec::plain(std::function<Complex(double)> ft, DecayBound decay) {
    GeneratorSpec g;
    g.fourier_transform = std::move(ft);
    g.decay = decay;
    return g;
}

GeneratorSpec GeneratorSpec::modulated(TruncatedSymbol sym, GeneratorSpec base_spec) {
    GeneratorSpec g;
    g.symbol = std::move(sym);
    g.base = std::make_shared<const GeneratorSpec>(std::move(base_spec));
    g.decay = g.base->decay;
    double symbol_sup = 0.0;
    for (Eigen::Index i = 0; i < g.symbol.coeffs.size(); ++i)
        symbol_sup += std::abs(g.symbol.coeffs(i));
    g.decay.amplitude *= symbol_sup;
    return g;
}

Complex bracket_value(const GeneratorSpec& phi, const GeneratorSpec& psi, double gamma) {
    if (phi.is_modulated())
        return phi.symbol.at(gamma) * bracket_value(*phi.base, psi, gamma);
    if (psi.is_modulated())
        return std::conj(psi.symbol.at(gamma)) * bracket_value(phi, *psi.base, gamma);
    if (phi.bspline_order > 0 && psi.bspline_order > 0) {
        const auto coeffs = bspline_bracket_coeffs(phi.bspline_order, psi.bspline_order);
        return Complex(bspline_bracket_at(coeffs, gamma), 0.0);
    }
    return direct_bracket_at(phi, psi, gamma,
                             periodization_radius(phi.decay, psi.decay));
}

PeriodicFunction bracket(const GeneratorSpec& phi, const GeneratorSpec& psi,
                         int grid_log2) {
    check_grid(grid_log2);
    const int n = 1 << grid_log2;
    PeriodicFunction out{Vector(n), grid_log2};

    if (phi.is_modulated()) {
        out = bracket(*phi.base, psi, grid_log2);
        for (int j = 0; j < n; ++j)
            out.samples(j) *= phi.symbol.at(out.gamma(j));
        return out;
    }
    if (psi.is_modulated()) {
        out = bracket(phi, *psi.base, grid_log2);
        for (int j = 0; j < n; ++j)
            out.samples(j) *= std::conj(psi.symbol.at(out.gamma(j)));
        return out;
    }
    if (phi.bspline_order > 0 && psi.bspline_order > 0) {
        const auto coeffs = bspline_bracket_coeffs(phi.bspline_order, psi.bspline_order);
        for (int j = 0; j < n; ++j)
            out.samples(j) = Complex(bspline_bracket_at(coeffs, out.gamma(j)), 0.0);
        return out;
    }
    const double radius = periodization_radius(phi.decay, psi.decay);
    for (int j = 0; j < n; ++j)
        out.samples(j) = direct_bracket_at(phi, psi, out.gamma(j), radius);
    return out;
}

SiFrameBounds si_frame_bounds(const PeriodicFunction& phi_bracket) {
    const Eigen::VectorXd values = real_nonnegative(phi_bracket, "si_frame_bounds");
    SiFrameBounds out;
    out.upper = values.maxCoeff();
    const double tau = kZeroSetRelTol * out.upper;
    double lower = out.upper;
    int zero_count = 0;
    for (Eigen::Index j = 0; j < values.size(); ++j) {
        if (values(j) > tau)
            lower = std::min(lower, values(j));
        else
            ++zero_count;
    }
    out.lower = lower;
    out.zero_set_fraction = static_cast<double>(zero_count) / values.size();
    return out;
}

DirectSumVerdict si_direct_sum_check(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                                     int grid_log2) {
    const Eigen::VectorXd big_phi =
        real_nonnegative(bracket(phi, phi, grid_log2), "si_direct_sum_check");
    const Eigen::VectorXd big_phi1 =
        real_nonnegative(bracket(phi1, phi1, grid_log2), "si_direct_sum_check");
    const PeriodicFunction b = bracket(phi, phi1, grid_log2);
    const auto mask = nonzero_mask(big_phi);
    const auto mask1 = nonzero_mask(big_phi1);

    DirectSumVerdict verdict;
    bool zero_sets_agree = true;
    double c = -1.0;
    for (size_t j = 0; j < mask.size(); ++j) {
        if (mask[j] != mask1[j]) zero_sets_agree = false;
        if (mask[j]) {
            const double abs_b = std::abs(b.samples(static_cast<int>(j)));
            c = (c < 0.0) ? abs_b : std::min(c, abs_b);
        }
    }
    verdict.c = std::max(c, 0.0);
    verdict.ok = zero_sets_agree && verdict.c > kSingularSymbolTol;
    return verdict;
}

double si_cos_lower_bound(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                          int grid_log2) {
    const Eigen::VectorXd big_phi =
        real_nonnegative(bracket(phi, phi, grid_log2), "si_cos_lower_bound");
    const Eigen::VectorXd big_phi1 =
        real_nonnegative(bracket(phi1, phi1, grid_log2), "si_cos_lower_bound");
    const PeriodicFunction b = bracket(phi, phi1, grid_log2);
    const auto mask = nonzero_mask(big_phi);
    double best = -1.0;
    for (size_t j = 0; j < mask.size(); ++j) {
        if (!mask[j]) continue;
        const int i = static_cast<int>(j);
        const double denom = std::sqrt(big_phi(i) * big_phi1(i));
        if (denom <= 0.0)
            throw numerical_error("si_cos_lower_bound: vanishing denominator on the nonzero set");
        const double ratio = std::abs(b.samples(i)) / denom;
        best = (best < 0.0) ? ratio : std::min(best, ratio);
    }
    if (best < 0.0)
        throw numerical_error("si_cos_lower_bound: empty nonzero set");
    return best;
}

double si_duality_defect(const GeneratorSpec& phi, const GeneratorSpec& phit,
                         int grid_log2) {
    const Eigen::VectorXd big_phi =
        real_nonnegative(bracket(phi, phi, grid_log2), "si_duality_defect");
    const PeriodicFunction b = bracket(phi, phit, grid_log2);
    const auto mask = nonzero_mask(big_phi);
    const int n = b.size();
    Eigen::VectorXd gap(n);
    for (int j = 0; j < n; ++j) gap(j) = std::abs(b.samples(j) - 1.0);
    auto objective = [&](double gamma) {
        return std::abs(bracket_value(phi, phit, gamma) - 1.0);
    };
    return masked_sup(mask, gap, n, objective);
}

PeriodicFunction dual_symbol(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                             int grid_log2) {
    const Eigen::VectorXd big_phi =
        real_nonnegative(bracket(phi, phi, grid_log2), "dual_symbol");
    const PeriodicFunction b = bracket(phi, phi1, grid_log2);
    const auto mask = nonzero_mask(big_phi);
    PeriodicFunction out{Vector::Zero(b.size()), grid_log2};
    for (int j = 0; j < b.size(); ++j) {
        const double abs_b = std::abs(b.samples(j));
        if (mask[j]) {
            if (abs_b < kSingularSymbolTol)
                throw numerical_error("dual_symbol: singular bracket on the nonzero set");
            out.samples(j) = 1.0 / b.samples(j);
        } else if (abs_b >= kSingularSymbolTol) {
            out.samples(j) = 1.0 / b.samples(j);
        }
    }
    return out;
}

TruncatedSymbol fourier_coefficients(const PeriodicFunction& p, int truncation) {
    if (truncation < 0)
        throw input_error("fourier_coefficients: truncation must be nonnegative");
    const int n = p.size();
    if (2 * truncation + 1 > n)
        throw input_error("fourier_coefficients: truncation too large for the grid");
    TruncatedSymbol sym{Vector(2 * truncation + 1)};
    for (int k = -truncation; k <= truncation; ++k) {
        KahanSum acc;
        for (int j = 0; j < n; ++j)
            acc.add(p.samples(j) * std::polar(1.0, kTwoPi * k * p.gamma(j)));
        sym.coeffs(k + truncation) = acc.sum / static_cast<double>(n);
    }
    return sym;
}

PeriodicFunction eval_trig_poly(const TruncatedSymbol& sym, int grid_log2) {
    check_grid(grid_log2);
    const int n = 1 << grid_log2;
    PeriodicFunction out{Vector(n), grid_log2};
    for (int j = 0; j < n; ++j) out.samples(j) = sym.at(out.gamma(j));
    return out;
}

namespace {

/// Shared core of sufficient_eps / necessary_eps: sup of weight * |conj(H) - 1/b|
/// with weight sqrt(Phi Phi1) (sufficient) or |b| (necessary).
double weighted_symbol_gap(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                           const std::function<Complex(double)>& h_at,
                           int grid_log2, bool sqrt_weight) {
    const Eigen::VectorXd big_phi =
        real_nonnegative(bracket(phi, phi, grid_log2), "symbol gap");
    const Eigen::VectorXd big_phi1 =
        real_nonnegative(bracket(phi1, phi1, grid_log2), "symbol gap");
    const PeriodicFunction b = bracket(phi, phi1, grid_log2);
    const auto mask = nonzero_mask(big_phi);
    const int n = b.size();

    Eigen::VectorXd gap(n);
    for (int j = 0; j < n; ++j) {
        if (!mask[j]) {
            gap(j) = 0.0;
            continue;
        }
        if (std::abs(b.samples(j)) < kSingularSymbolTol)
            throw numerical_error("symbol gap: singular bracket on the nonzero set");
        const double weight = sqrt_weight ? std::sqrt(big_phi(j) * big_phi1(j))
                                          : std::abs(b.samples(j));
        gap(j) = weight * std::abs(std::conj(h_at(b.gamma(j))) - 1.0 / b.samples(j));
    }
    auto objective = [&](double gamma) {
        const Complex bv = bracket_value(phi, phi1, gamma);
        if (std::abs(bv) < kSingularSymbolTol) return 0.0;
        double weight;
        if (sqrt_weight) {
            const double p0 = std::max(bracket_value(phi, phi, gamma).real(), 0.0);
            const double p1 = std::max(bracket_value(phi1, phi1, gamma).real(), 0.0);
            weight = std::sqrt(p0 * p1);
        } else {
            weight = std::abs(bv);
        }
        return weight * std::abs(std::conj(h_at(gamma)) - 1.0 / bv);
    };
    return masked_sup(mask, gap, n, objective);
}

} // namespace

double sufficient_eps(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                      const TruncatedSymbol& h, int grid_log2) {
    return weighted_symbol_gap(phi, phi1, [&](double g) { return h.at(g); },
                               grid_log2, true);
}

double sufficient_eps(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                      const PeriodicFunction& h) {
    return weighted_symbol_gap(phi, phi1, [&](double g) { return h.interp(g); },
                               h.grid_log2, true);
}

double necessary_eps(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                     const TruncatedSymbol& h, int grid_log2) {
    return weighted_symbol_gap(phi, phi1, [&](double g) { return h.at(g); },
                               grid_log2, false);
}

double necessary_eps(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                     const PeriodicFunction& h) {
    return weighted_symbol_gap(phi, phi1, [&](double g) { return h.interp(g); },
                               h.grid_log2, false);
}

ProjectionResult project_fourier(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                                 const GeneratorSpec& f, int grid_log2, int n_periods) {
    if (n_periods < 0)
        throw input_error("project_fourier: n_periods must be nonnegative");
    const Eigen::VectorXd big_phi =
        real_nonnegative(bracket(phi, phi, grid_log2), "project_fourier");
    const PeriodicFunction b = bracket(phi, phi1, grid_log2);
    const PeriodicFunction bf = bracket(f, phi1, grid_log2);
    const auto mask = nonzero_mask(big_phi);
    const int n = b.size();

    ProjectionResult out;
    out.ratio = PeriodicFunction{Vector::Zero(n), grid_log2};
    for (int j = 0; j < n; ++j) {
        if (!mask[j]) continue;
        if (std::abs(b.samples(j)) < kSingularSymbolTol)
            throw numerical_error("project_fourier: singular bracket on the nonzero set");
        out.ratio.samples(j) = bf.samples(j) / b.samples(j);
    }
    const int total = (2 * n_periods + 1) * n;
    out.xi.reserve(total);
    out.values = Vector(total);
    int idx = 0;
    for (int period = -n_periods; period <= n_periods; ++period) {
        for (int j = 0; j < n; ++j, ++idx) {
            const double xi = out.ratio.gamma(j) + period;
            out.xi.push_back(xi);
            out.values(idx) = out.ratio.samples(j) * phi.ft(xi);
        }
    }
    return out;
}

PeriodicFunction refine_symbol(const PeriodicFunction& h, const PeriodicFunction& b,
                               int order) {
    if (order < 0)
        throw input_error("refine_symbol: order must be nonnegative");
    if (h.size() != b.size())
        throw input_error("refine_symbol: grids must match");
    const int n = h.size();
    const double b_scale = b.samples.cwiseAbs().maxCoeff();
    const double tau = 1e-12 * b_scale;

    double sup_d = 0.0;
    for (int j = 0; j < n; ++j) {
        if (std::abs(b.samples(j)) <= tau) continue;
        sup_d = std::max(sup_d,
                         std::abs(1.0 - std::conj(h.samples(j)) * b.samples(j)));
    }
    if (sup_d >= 1.0)
        throw numerical_error("refine_symbol: defect multiplier reaches 1, refinement refused");

    PeriodicFunction out{h.samples, h.grid_log2};
    for (int j = 0; j < n; ++j) {
        if (std::abs(b.samples(j)) <= tau) continue;
        const Complex d = 1.0 - std::conj(h.samples(j)) * b.samples(j);
        Complex geom{1.0, 0.0};
        Complex power{1.0, 0.0};
        for (int k = 1; k <= order; ++k) {
            power *= d;
            geom += power;
        }
        out.samples(j) = h.samples(j) * std::conj(geom);
    }
    return out;
}

} // namespace oblique::si

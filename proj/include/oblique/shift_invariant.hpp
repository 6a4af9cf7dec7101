#pragma once

#include <functional>
#include <memory>

#include "oblique/types.hpp"

namespace oblique::si {

/// Relative threshold defining the grid zero set of Phi: tau_Phi = 1e-12 * max(Phi).
inline constexpr double kZeroSetRelTol = 1e-12;
/// Absolute threshold below which the bracket denominator counts as singular.
inline constexpr double kSingularSymbolTol = 1e-10;
/// Target for the neglected tail of the integer periodization sum.
inline constexpr double kTailTol = 1e-14;
/// Hard cap on the periodization radius; slower decay is rejected.
inline constexpr double kMaxTailRadius = 1e7;

/// Monotone tail majorant amplitude*(pi*|xi|)^(-exponent) valid for
/// |xi| >= radius. amplitude == 0 marks compact support: the transform
/// vanishes for |xi| >= radius.
struct DecayBound {
    double amplitude = 1.0;
    double exponent = 0.0;
    double radius = 1.0;
};

/// Trigonometric polynomial H(gamma) = sum_{|k| <= K} c_k e^{-2 pi i k gamma}.
struct TruncatedSymbol {
    Vector coeffs;  ///< c_{-K..K}, length 2K+1

    int order() const { return (static_cast<int>(coeffs.size()) - 1) / 2; }
    Complex coeff(int k) const { return coeffs(k + order()); }
    Complex at(double gamma) const;
};

/// Uniform-grid samples of a 1-periodic function on [0,1), grid size 2^m.
struct PeriodicFunction {
    Vector samples;
    int grid_log2 = 0;

    int size() const { return static_cast<int>(samples.size()); }
    double gamma(int j) const { return static_cast<double>(j) / size(); }
    /// Periodic 4-point Lagrange interpolation between samples.
    Complex interp(double gamma) const;
};

/// A generator given by its Fourier transform on the real line.
/// Three flavors share the interface: a plain evaluator with a decay bound,
/// a B-spline of known order (enables exact periodization), and a
/// symbol-modulated generator psi^ = H * phi1^ on top of a base spec.
class GeneratorSpec {
public:
    std::function<Complex(double)> fourier_transform;
    DecayBound decay;
    int bspline_order = 0;
    std::shared_ptr<const GeneratorSpec> base;
    TruncatedSymbol symbol;

    Complex ft(double xi) const;
    bool is_modulated() const { return base != nullptr; }

    static GeneratorSpec plain(std::function<Complex(double)> ft, DecayBound decay);
    static GeneratorSpec modulated(TruncatedSymbol sym, GeneratorSpec base_spec);
};

/// Pointwise bracket sum_{n in Z} phi^(gamma+n) conj(psi^(gamma+n)).
Complex bracket_value(const GeneratorSpec& phi, const GeneratorSpec& psi, double gamma);

/// Bracket product sampled on the 2^m grid.
PeriodicFunction bracket(const GeneratorSpec& phi, const GeneratorSpec& psi, int grid_log2);

struct SiFrameBounds {
    double lower = 0.0;             ///< min of Phi over the nonzero set
    double upper = 0.0;             ///< max of Phi
    double zero_set_fraction = 0.0; ///< fraction of the grid with Phi <= tau_Phi
};

/// Frame-sequence bounds read off the self-bracket Phi.
SiFrameBounds si_frame_bounds(const PeriodicFunction& phi_bracket);

struct DirectSumVerdict {
    bool ok = false;
    double c = 0.0;  ///< measured lower bound of |bracket| on the nonzero set
};

/// Checks the generator-level direct-sum criterion: matching zero sets and
/// |bracket| bounded below on {Phi > tau_Phi}.
DirectSumVerdict si_direct_sum_check(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                                     int grid_log2);

/// Lower bound for cos(W, V): min over the nonzero set of |bracket| / sqrt(Phi Phi1).
double si_cos_lower_bound(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                          int grid_log2);

/// sup over {Phi > tau_Phi} of |bracket(phi, phit) - 1|, sharpened by a local
/// golden-section pass around the best grid cell.
double si_duality_defect(const GeneratorSpec& phi, const GeneratorSpec& phit,
                         int grid_log2);

/// Samples of H~ = 1 / bracket(phi, phi1). Throws when the bracket is
/// singular somewhere on the nonzero set of Phi.
PeriodicFunction dual_symbol(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                             int grid_log2);

/// c_k = (1/2^m) sum_j P(gamma_j) e^{+2 pi i k gamma_j} for |k| <= K,
/// matching the convention H(gamma) = sum_k c_k e^{-2 pi i k gamma}.
TruncatedSymbol fourier_coefficients(const PeriodicFunction& p, int truncation);

/// Samples of the trigonometric polynomial on the 2^m grid.
PeriodicFunction eval_trig_poly(const TruncatedSymbol& sym, int grid_log2);

/// eps_suff = sup over {Phi > tau_Phi} of sqrt(Phi Phi1) |conj(H) - H~|.
/// Certifies ({T_k phi}, {T_k psi}) with psi^ = H phi1^ as eps_suff-approximate
/// oblique duals.
double sufficient_eps(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                      const TruncatedSymbol& h, int grid_log2);
double sufficient_eps(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                      const PeriodicFunction& h);

/// eps_nec = sup over {Phi > tau_Phi} of |bracket| |conj(H) - H~|. Any eps
/// certifying the pair must satisfy eps >= eps_nec.
double necessary_eps(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                     const TruncatedSymbol& h, int grid_log2);
double necessary_eps(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                     const PeriodicFunction& h);

struct ProjectionResult {
    std::vector<double> xi;  ///< sample abscissae gamma_j + n, |n| <= n_periods
    Vector values;           ///< (pi f)^ at those abscissae
    PeriodicFunction ratio;  ///< periodic multiplier R with (pi f)^ = R * phi^
};

/// Fourier transform of the oblique projection of f onto W along V^perp:
///   (pi f)^(gamma) = [bracket(f, phi1) / bracket(phi, phi1)] phi^(gamma)
/// on {Phi != 0}, zero elsewhere.
ProjectionResult project_fourier(const GeneratorSpec& phi, const GeneratorSpec& phi1,
                                 const GeneratorSpec& f, int grid_log2, int n_periods);

/// Pointwise geometric refinement of a symbol H against the bracket b:
/// defect multiplier d = 1 - conj(H) b, refined conj(H_N) = conj(H) sum_{n=0..N} d^n.
/// Refuses when sup |d| >= 1 on the working set.
PeriodicFunction refine_symbol(const PeriodicFunction& h, const PeriodicFunction& b,
                               int order);

} // namespace oblique::si

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oblique/bspline.hpp"

using namespace oblique;
using namespace oblique::bspline;

namespace {

const double kSqrt3 = std::sqrt(3.0);

/// Numeric convolution oracle: B_3(x) = integral of the triangle B_2 over
/// [x-1/2, x+1/2], with B_2(t) = max(1 - |t|, 0) written out directly.
double convolved3(double x) {
    const int n = 4000;
    const double h = 1.0 / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = x - 0.5 + (i + 0.5) * h;
        acc += std::max(1.0 - std::abs(t), 0.0) * h;
    }
    return acc;
}

} // namespace

TEST_CASE("bspline_ft") {
    const si::GeneratorSpec b1 = bspline_ft(1);
    const si::GeneratorSpec b3 = bspline_ft(3);
    CHECK(std::abs(b1.ft(0.0) - 1.0) <= 1e-15);
    CHECK(std::abs(b1.ft(0.5) - 2.0 / std::numbers::pi) <= 1e-15);
    for (int k = 1; k <= 5; ++k) CHECK(std::abs(b3.ft(k)) <= 1e-15);

    // decay bound dominates |ft| at spot-checked points
    for (double xi : {1.3, 2.7, 5.9, 11.4})
        CHECK(std::abs(b3.ft(xi)) <= std::pow(std::numbers::pi * xi, -3.0) + 1e-15);

    CHECK_THROWS_AS(bspline_ft(0), input_error);
    CHECK_THROWS_AS(bspline_ft(21), input_error);
}

TEST_CASE("bspline_time") {
    CHECK(bspline_time(1, 0.0) == 1.0);
    CHECK(bspline_time(1, 0.49) == 1.0);
    CHECK(bspline_time(1, 0.8) == 0.0);

    CHECK(std::abs(bspline_time(3, 0.0) - 0.75) <= 1e-14);
    CHECK(bspline_time(3, 1.5) == 0.0);
    CHECK(bspline_time(3, -1.5) == 0.0);

    // numeric convolution as the oracle
    for (double x : {0.0, 0.3, -0.7, 1.1})
        CHECK(std::abs(bspline_time(3, x) - convolved3(x)) <= 1e-6);

    // unit integral
    const int n = 200000;
    double integral = 0.0;
    for (int i = 0; i < n; ++i)
        integral += bspline_time(4, -2.0 + 4.0 * (i + 0.5) / n) * (4.0 / n);
    CHECK(std::abs(integral - 1.0) <= 1e-9);
}

TEST_CASE("truncated_dual_generator") {
    const TruncatedDualGenerator k0 = truncated_dual_generator(0);
    CHECK(std::abs(k0.symbol.coeff(0) - kSqrt3) <= 1e-10);
    CHECK(std::abs(k0.eps - (kSqrt3 - 1.0)) <= 1e-12);
    CHECK(k0.support_lo == -1.5);
    CHECK(k0.support_hi == 1.5);

    const TruncatedDualGenerator k1 = truncated_dual_generator(1);
    CHECK(std::abs(k1.eps - 0.196152304804580) <= 5e-7);

    const TruncatedDualGenerator k4 = truncated_dual_generator(4);
    CHECK(k4.support_lo == -5.5);
    CHECK(k4.support_hi == 5.5);
    CHECK(std::abs(k4.eps - 0.003773541369707) <= 5e-7);

    // real symmetric coefficients with ratio 2 - sqrt(3)
    const TruncatedDualGenerator k8 = truncated_dual_generator(8);
    for (int k = 1; k <= 8; ++k) {
        CHECK(std::abs(k8.symbol.coeff(k) - k8.symbol.coeff(-k)) <= 1e-10);
        CHECK(std::abs(k8.symbol.coeff(k).imag()) <= 1e-10);
        const double ratio =
            std::abs(k8.symbol.coeff(k)) / std::abs(k8.symbol.coeff(k - 1));
        CHECK(std::abs(ratio - (2.0 - kSqrt3)) <= 1e-9);
    }
}

TEST_CASE("example_table") {
    const auto rows = example_table(4);
    REQUIRE(rows.size() == 5);
    CHECK(rows[2].support_lo == -3.5);
    CHECK(rows[2].support_hi == 3.5);
    CHECK(std::abs(rows[2].eps - 0.052558805558347) <= 5e-7);
    CHECK(rows[3].support_lo == -4.5);
    CHECK(std::abs(rows[3].eps - 0.014083071590247) <= 5e-7);
    for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].eps < rows[i - 1].eps);
}

TEST_CASE("emit_psi_samples") {
    const auto psi0 = emit_psi_samples(0, 201);
    CHECK(psi0.front().x == -1.5);
    CHECK(psi0.back().x == 1.5);
    CHECK(std::abs(psi0.front().value) <= 1e-14);
    CHECK(std::abs(psi0.back().value) <= 1e-14);
    CHECK(std::abs(psi0[100].value - 3.0 * kSqrt3 / 4.0) <= 1e-10);

    const auto psi2 = emit_psi_samples(2, 301);
    for (size_t i = 0; i < psi2.size(); ++i) {
        const auto& mirror = psi2[psi2.size() - 1 - i];
        CHECK(std::abs(psi2[i].x + mirror.x) <= 1e-12);
        CHECK(std::abs(psi2[i].value - mirror.value) <= 1e-10);
    }

    CHECK_THROWS_AS(emit_psi_samples(0, 1), input_error);
}

TEST_CASE("necessary eps stays below the certified eps") {
    const si::GeneratorSpec b1 = bspline_ft(1);
    const si::GeneratorSpec b3 = bspline_ft(3);
    for (int k = 0; k <= 8; ++k) {
        const TruncatedDualGenerator d = truncated_dual_generator(k);
        CHECK(si::necessary_eps(b1, b3, d.symbol, 16) <= d.eps + 1e-12);
    }
}

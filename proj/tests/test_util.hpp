// Shared helpers for the test suites.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "qpce/rng.hpp"
#include "qpce/statevector.hpp"

namespace test_util {

using qpce::qsim::cplx;
using qpce::qsim::StateVector;

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kTwoPi = 6.28318530717958647692;

inline void check_close(const cplx& a, const cplx& b, double tol) {
    CHECK(std::abs(a - b) <= tol);
}

inline void check_state(const StateVector& state, const std::vector<cplx>& expect,
                        double tol = 1e-12) {
    REQUIRE(state.dim() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        INFO("amplitude index ", i);
        check_close(state.amp(i), expect[i], tol);
    }
}

// Haar-ish random state: normalised complex gaussians.
inline StateVector random_state(int num_qubits, qpce::Rng& rng) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    std::vector<cplx> amps(dim);
    double norm = 0.0;
    for (auto& a : amps) {
        // Box-Muller
        const double u1 = rng.real01() + 1e-300;
        const double u2 = rng.real01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        a = cplx{r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : amps) a /= norm;
    return StateVector(num_qubits, std::move(amps));
}

// 3 sigma binomial tolerance around p at n trials.
inline double three_sigma(double p, std::size_t n) {
    return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace test_util

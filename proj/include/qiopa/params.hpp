#pragma once

#include "qiopa/common.hpp"

#include <cmath>

namespace qiopa {

// Amplifier gain g (dimensionless chi*t) and intrinsic phase Phi between the
// two component amplifiers, with the derived hyperbolic quantities.
struct AmplifierParams {
    double g = 0.0;
    double phi = 0.0;

    AmplifierParams() = default;
    AmplifierParams(double gain, double intrinsic_phase = 0.0) : g(gain), phi(intrinsic_phase) {
        if (g < 0.0) throw Error(ErrorKind::invalid_arguments, "gain must be >= 0");
    }

    double C() const { return std::cosh(g); }
    double S() const { return std::sinh(g); }
    double Gamma() const { return std::tanh(g); }
    // epsilon = -exp(-i Phi); |epsilon| = 1.
    cplx epsilon() const { return -std::exp(cplx(0.0, -phi)); }
    cplx S_tilde() const { return epsilon() * S(); }

    bool phase_is_zero(double tol = 1e-12) const { return std::abs(phi) <= tol; }
};

} // namespace qiopa

#pragma once

#include "acwall/grid.hpp"

namespace acwall {

// Closed-form building blocks for the quartic double well V(m) = (m^2 - 1)^2 / 4.

struct WaveValue {
    double m;   // tanh(x - zeta)
    double dm;  // sech^2(x - zeta), strictly positive
};

/// Standing wave centred at zeta and its derivative.
WaveValue eval_wave(double zeta, double x);

/// sech^2(u) evaluated without cancellation in the tails.
double sech2(double u);

/// Second derivative of the standing wave, -2 m m'.
double wave_second_derivative(double zeta, double x);

struct PotentialValue {
    double value;
    double first;
    double second;
};

PotentialValue eval_potential(double m);

struct HValue {
    double value;
    bool saturated;  // true when |h| exceeds the double range (returned as +-inf)
};

/// h_zeta(x) = int_zeta^x dy / mbar'_zeta(y)^2, using the closed form
/// 3u/8 + sinh(2u)/4 + sinh(4u)/32 with u = x - zeta.
HValue eval_h(double zeta, double x);

/// h(u) * exp(-4 s). Finite for every |u| <= s, which is how ratios of h values
/// are formed on long intervals without overflow.
double scaled_h(double u, double s);

struct PhiCoefficients {
    double c;
    double d;
};

PhiCoefficients phi_coefficients(double zeta, const Domain& dom);

/// Normalised h-ratio q_zeta(x) in [0, 1]; q(-a) = 0 and q(b) = 1.
double phi_ratio(double zeta, const Domain& dom, double x);

/// Boundary-layer correction phi_zeta solving phi''/2 - V''(mbar_zeta) phi = 0
/// with phi(-a) = -1 - mbar_zeta(-a), phi(b) = 1 - mbar_zeta(b).
/// Throws ErrorKind::Domain unless zeta lies in (-a, b).
Profile eval_phi(double zeta, const Domain& dom);

Profile sample_wave(double zeta, const Domain& dom);
Profile sample_wave_derivative(double zeta, const Domain& dom);

}  // namespace acwall

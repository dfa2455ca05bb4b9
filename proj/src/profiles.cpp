#include "acwall/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "acwall/error.hpp"

namespace acwall {

double sech2(double u) {
    const double e = std::exp(-2.0 * std::abs(u));
    const double denom = 1.0 + e;
    return 4.0 * e / (denom * denom);
}

WaveValue eval_wave(double zeta, double x) {
    const double u = x - zeta;
    return {std::tanh(u), sech2(u)};
}

double wave_second_derivative(double zeta, double x) {
    const auto w = eval_wave(zeta, x);
    return -2.0 * w.m * w.dm;
}

PotentialValue eval_potential(double m) {
    const double m2 = m * m;
    return {0.25 * (m2 - 1.0) * (m2 - 1.0), m * m2 - m, 3.0 * m2 - 1.0};
}

HValue eval_h(double zeta, double x) {
    const double u = x - zeta;
    const double value = 0.375 * u + 0.25 * std::sinh(2.0 * u) + std::sinh(4.0 * u) / 32.0;
    if (!std::isfinite(value)) {
        return {u > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity(), true};
    }
    return {value, false};
}

double scaled_h(double u, double s) {
    const double shift = -4.0 * s;
    return 0.375 * u * std::exp(shift) + (std::exp(2.0 * u + shift) - std::exp(-2.0 * u + shift)) / 8.0 +
           (std::exp(4.0 * u + shift) - std::exp(-4.0 * u + shift)) / 64.0;
}

namespace {

void require_inside(double zeta, const Domain& dom) {
    if (!dom.contains_open(zeta)) {
        std::ostringstream msg;
        msg << "center " << zeta << " outside (" << -dom.left() << ", " << dom.right() << ")";
        throw Error(ErrorKind::Domain, msg.str());
    }
}

}  // namespace

PhiCoefficients phi_coefficients(double zeta, const Domain& dom) {
    require_inside(zeta, dom);
    const double m_left = eval_wave(zeta, -dom.left()).m;
    const double m_right = eval_wave(zeta, dom.right()).m;
    const double left = 1.0 / (1.0 - m_left);
    return {left + 1.0 / (1.0 + m_right), -left};
}

double phi_ratio(double zeta, const Domain& dom, double x) {
    const double lo = -dom.left() - zeta;
    const double hi = dom.right() - zeta;
    const double s = std::max(std::abs(lo), std::abs(hi));
    const double h_lo = scaled_h(lo, s);
    const double h_hi = scaled_h(hi, s);
    const double q = (scaled_h(x - zeta, s) - h_lo) / (h_hi - h_lo);
    return std::clamp(q, 0.0, 1.0);
}

Profile eval_phi(double zeta, const Domain& dom) {
    const auto [c, d] = phi_coefficients(zeta, dom);
    const double lo = -dom.left() - zeta;
    const double hi = dom.right() - zeta;
    const double s = std::max(std::abs(lo), std::abs(hi));
    const double h_lo = scaled_h(lo, s);
    const double span = scaled_h(hi, s) - h_lo;

    Profile phi(dom);
    const std::size_t n = dom.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double u = dom.x(i) - zeta;
        const double q = std::clamp((scaled_h(u, s) - h_lo) / span, 0.0, 1.0);
        phi.values[i] = sech2(u) * (c * q + d);
    }
    phi.values.front() = -1.0 - eval_wave(zeta, -dom.left()).m;
    phi.values.back() = 1.0 - eval_wave(zeta, dom.right()).m;
    return phi;
}

Profile sample_wave(double zeta, const Domain& dom) {
    return Profile::sample(dom, [zeta](double x) { return std::tanh(x - zeta); });
}

Profile sample_wave_derivative(double zeta, const Domain& dom) {
    return Profile::sample(dom, [zeta](double x) { return sech2(x - zeta); });
}

}  // namespace acwall

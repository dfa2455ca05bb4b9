// Kellogg iteration and projected resolvent in 50-digit arithmetic.

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "acwall/error.hpp"
#include "acwall/profiles.hpp"
#include "acwall/spectral.hpp"
#include "acwall/tridiagonal.hpp"

namespace acwall {

namespace {

using Wide = boost::multiprecision::cpp_bin_float_50;
using Vec = std::vector<Wide>;

struct WideOperator {
    Vec d;
    Vec e;
    Wide h;

    explicit WideOperator(const TridiagonalOperator& op)
        : d(op.diagonal<Wide>()), e(op.off_diagonal<Wide>()), h(op.domain.dx()) {}

    std::size_t size() const { return d.size(); }

    // T^{-1} rhs; T is a positive definite M-matrix so no pivoting is needed.
    Vec solve(Vec rhs) const {
        Vec work;
        tri::thomas_solve(d, e, rhs, work);
        return rhs;
    }

    Wide dot(const Vec& x, const Vec& y) const {
        Wide s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s * h;
    }

    Wide norm(const Vec& x) const { return sqrt(dot(x, x)); }
};

// Refines a long double eigenvalue estimate by bisection in Wide, first
// widening the bracket until the Sturm counts confirm it holds eigenvalue k.
Wide refine_eigenvalue(const WideOperator& t, std::size_t k, long double estimate) {
    const long double scale = std::max(std::abs(estimate), 1e-12L);
    Wide width = Wide(scale) * Wide(1e-8);
    Wide lo = Wide(estimate) - width;
    Wide hi = Wide(estimate) + width;
    for (int grow = 0; grow < 60; ++grow) {
        const bool ok_lo = tri::sturm_count(t.d, t.e, lo) <= k;
        const bool ok_hi = tri::sturm_count(t.d, t.e, hi) > k;
        if (ok_lo && ok_hi) return tri::bisect_eigenvalue(t.d, t.e, k, lo, hi);
        width *= 4;
        if (!ok_lo) lo = Wide(estimate) - width;
        if (!ok_hi) hi = Wide(estimate) + width;
    }
    throw Error(ErrorKind::Solver, "could not bracket eigenvalue in extended precision");
}

// Unit-norm ground state by inverse iteration at the converged shift.
Vec ground_state(const WideOperator& t, const Wide& lambda0, Vec start) {
    const auto lu = tri::factor_shifted(t.d, t.e, lambda0);
    for (int it = 0; it < 3; ++it) {
        lu.solve(start);
        const Wide n = t.norm(start);
        for (auto& v : start) v /= n;
    }
    Wide sum = 0;
    for (const auto& v : start) sum += v;
    if (sum < 0) {
        for (auto& v : start) v = -v;
    }
    return start;
}

Vec sampled_wave_derivative(const TridiagonalOperator& op) {
    Vec phi(op.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = Wide(sech2(op.domain.x(i + 1) - op.zeta));
    return phi;
}

Wide positive_ground_eigenvalue(const TridiagonalOperator& op, const WideOperator& t) {
    const Wide lambda0 = refine_eigenvalue(t, 0, eigenvalue(op, 0));
    if (!(lambda0 > 0)) {
        std::ostringstream msg;
        msg << "grid operator is not positive definite (lambda0 = " << static_cast<double>(lambda0)
            << "); refine dx";
        throw Error(ErrorKind::Solver, msg.str());
    }
    return lambda0;
}

Profile to_profile(const Domain& dom, const Vec& v) {
    Profile p(dom);
    for (std::size_t i = 0; i < v.size(); ++i) p[i + 1] = static_cast<double>(v[i]);
    return p;
}

Wide sup_distance(const Vec& x, const Vec& y) {
    Wide m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max<Wide>(m, abs(x[i] - y[i]));
    return m;
}

}  // namespace

KelloggReport kellogg(double zeta, const Domain& dom) {
    const TridiagonalOperator op = assemble_operator(zeta, dom);
    const WideOperator t(op);
    const std::size_t n = t.size();
    if (n < 2) throw Error(ErrorKind::Domain, "Kellogg iteration needs at least two interior nodes");

    Vec phi = sampled_wave_derivative(op);
    const Wide phi_norm = t.norm(phi);
    for (auto& v : phi) v /= phi_norm;

    const Vec f1 = t.solve(phi);
    const Vec f2 = t.solve(f1);
    const Wide n1 = t.norm(f1);
    const Wide n2 = t.norm(f2);
    if (!(n1 > 0) || !(n2 > 0)) throw Error(ErrorKind::Solver, "Kellogg iterates vanished");
    const Wide mu = n1 / n2;

    const Wide lambda0 = positive_ground_eigenvalue(op, t);
    const Wide lambda1 = refine_eigenvalue(t, 1, eigenvalue(op, 1));
    const Vec psi0 = ground_state(t, lambda0, phi);
    const Wide c = std::min<Wide>(Wide(1), t.dot(psi0, phi));

    Vec e1 = f1, e2 = f2;
    for (auto& v : e1) v /= n1;
    for (auto& v : e2) v /= n2;

    const Wide ratio = lambda0 / lambda1;
    const Wide one_minus_c2 = 1 - c * c;
    const Wide bracket = lambda0 / 2 * ratio * ratio * one_minus_c2 / (c * c);

    // Sup row norm of the discrete kernel (T^{-1})_{ij} / dx. The inverse of
    // a symmetric tridiagonal matrix is semi-separable: for i <= j,
    // (T^{-1})_{ij} = last_i * first_j / last_0 with first = T^{-1} e_0 and
    // last = T^{-1} e_{n-1}; prefix sums give every row norm in O(n).
    Vec unit(n, Wide(0));
    unit.front() = 1;
    const Vec first = t.solve(unit);
    unit.front() = 0;
    unit.back() = 1;
    const Vec last = t.solve(unit);
    Vec prefix_last(n + 1, Wide(0));  // sum_{j < i} last_j^2
    for (std::size_t i = 0; i < n; ++i) prefix_last[i + 1] = prefix_last[i] + last[i] * last[i];
    Vec suffix_first(n + 1, Wide(0));  // sum_{j >= i} first_j^2
    for (std::size_t i = n; i-- > 0;) suffix_first[i] = suffix_first[i + 1] + first[i] * first[i];
    Wide row_max = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Wide s = first[i] * first[i] * prefix_last[i] + last[i] * last[i] * suffix_first[i];
        row_max = std::max<Wide>(row_max, s);
    }
    const Wide R = sqrt(row_max / (t.h * last[0] * last[0]));
    const Wide sup_bound = R * lambda1 * ratio * ratio * sqrt(one_minus_c2) / c;

    KelloggReport rep{static_cast<double>(mu),
                      static_cast<double>(lambda0),
                      static_cast<double>(lambda1),
                      static_cast<double>(mu - lambda0),
                      static_cast<double>(bracket),
                      static_cast<double>(R),
                      static_cast<double>(c),
                      static_cast<double>(sup_bound),
                      static_cast<double>(sup_distance(psi0, e2)),
                      static_cast<double>(sup_distance(e2, phi)),
                      to_profile(dom, e1),
                      to_profile(dom, e2)};
    return rep;
}

struct ProjectedResolvent::Impl {
    Domain dom;
    Wide h;
    Wide lambda0;
    Vec first;
    Vec last;
    Vec psi0;
};

ProjectedResolvent::ProjectedResolvent(double zeta, const Domain& dom) {
    const TridiagonalOperator op = assemble_operator(zeta, dom);
    const WideOperator t(op);
    const std::size_t n = t.size();
    const Wide lambda0 = positive_ground_eigenvalue(op, t);
    Vec unit(n, Wide(0));
    unit.front() = 1;
    Vec first = t.solve(unit);
    unit.front() = 0;
    unit.back() = 1;
    Vec last = t.solve(unit);
    Vec psi0 = ground_state(t, lambda0, sampled_wave_derivative(op));
    impl_ = std::make_unique<Impl>(Impl{dom, t.h, lambda0, std::move(first), std::move(last), std::move(psi0)});
}

ProjectedResolvent::~ProjectedResolvent() = default;
ProjectedResolvent::ProjectedResolvent(ProjectedResolvent&&) noexcept = default;
ProjectedResolvent& ProjectedResolvent::operator=(ProjectedResolvent&&) noexcept = default;

const Domain& ProjectedResolvent::domain() const { return impl_->dom; }

double ProjectedResolvent::lambda0() const { return static_cast<double>(impl_->lambda0); }

double ProjectedResolvent::operator()(std::size_t i, std::size_t j) const {
    const std::size_t n = impl_->dom.size();
    if (i >= n || j >= n) throw Error(ErrorKind::Validation, "node index outside the grid");
    if (i == 0 || j == 0 || i + 1 == n || j + 1 == n) return 0.0;
    std::size_t p = std::min(i, j) - 1;
    std::size_t q = std::max(i, j) - 1;
    const auto& m = *impl_;
    const Wide inv = m.last[p] * m.first[q] / m.last[0];
    return static_cast<double>(inv / m.h - m.psi0[p] * m.psi0[q] / m.lambda0);
}

double ProjectedResolvent::at(double x, double y) const {
    const auto& dom = impl_->dom;
    auto index = [&](double z) {
        const double r = std::round((z + dom.left()) / dom.dx());
        return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(dom.size() - 1)));
    };
    return (*this)(index(x), index(y));
}

Profile ProjectedResolvent::diagonal() const {
    Profile out(impl_->dom);
    for (std::size_t i = 1; i + 1 < out.size(); ++i) out[i] = (*this)(i, i);
    return out;
}

}  // namespace acwall

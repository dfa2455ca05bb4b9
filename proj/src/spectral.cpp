#include "acwall/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "acwall/error.hpp"
#include "acwall/profiles.hpp"
#include "acwall/tridiagonal.hpp"

namespace acwall {

using LD = long double;

TridiagonalOperator assemble_operator(double zeta, const Domain& dom, const std::optional<PotentialFn>& potential_override) {
    if (!dom.contains_open(zeta)) {
        std::ostringstream msg;
        msg << "operator center " << zeta << " outside (" << -dom.left() << ", " << dom.right() << ")";
        throw Error(ErrorKind::Domain, msg.str());
    }
    TridiagonalOperator op{dom, zeta, std::vector<double>(dom.interior_size())};
    for (std::size_t i = 0; i < op.potential.size(); ++i) {
        const double x = dom.x(i + 1);
        if (potential_override) {
            op.potential[i] = (*potential_override)(x);
        } else {
            // V''(tanh u) = 3 tanh^2 u - 1 = 2 - 3 sech^2 u
            op.potential[i] = 2.0 - 3.0 * sech2(x - zeta);
        }
    }
    return op;
}

Profile apply_operator(const TridiagonalOperator& op, const Profile& f) {
    if (!(f.domain == op.domain)) throw Error(ErrorKind::Validation, "profile and operator live on different grids");
    const LD h = op.domain.dx();
    const LD scale = 1.0L / (2.0L * h * h);
    Profile out(op.domain);
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        const LD lap = static_cast<LD>(f[i - 1]) - 2.0L * f[i] + static_cast<LD>(f[i + 1]);
        out[i] = static_cast<double>(-scale * lap + static_cast<LD>(op.potential[i - 1]) * f[i]);
    }
    return out;
}

long double eigenvalue(const TridiagonalOperator& op, std::size_t k) {
    if (k >= op.size()) throw Error(ErrorKind::Validation, "eigenvalue index exceeds the interior size");
    const auto d = op.diagonal<LD>();
    const auto e = op.off_diagonal<LD>();
    LD lo, hi;
    tri::gershgorin(d, e, lo, hi);
    return tri::bisect_eigenvalue(d, e, k, lo, hi);
}

std::vector<SpectralPair> eigenpairs(const TridiagonalOperator& op, std::size_t k) {
    const std::size_t n = op.size();
    if (k > n) throw Error(ErrorKind::Validation, "requested more eigenpairs than interior nodes");
    const auto d = op.diagonal<LD>();
    const auto e = op.off_diagonal<LD>();
    LD lo, hi;
    tri::gershgorin(d, e, lo, hi);
    const LD h = op.domain.dx();
    const LD norm_t = std::max(std::abs(lo), std::abs(hi));

    std::vector<std::vector<LD>> vecs;
    std::vector<SpectralPair> out;
    out.reserve(k);
    std::vector<LD> tv;
    for (std::size_t m = 0; m < k; ++m) {
        const LD lambda = tri::bisect_eigenvalue(d, e, m, lo, hi);
        const auto lu = tri::factor_shifted(d, e, lambda);
        std::vector<LD> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = 1.0L + 0.25L * std::sin(1.7L * static_cast<LD>(i) + 0.3L);
        for (int it = 0; it < 4; ++it) {
            lu.solve(v);
            for (const auto& w : vecs) {
                LD dot = 0;
                for (std::size_t i = 0; i < n; ++i) dot += w[i] * v[i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= dot * w[i];
            }
            LD s = 0;
            for (LD x : v) s += x * x;
            s = std::sqrt(s);
            for (LD& x : v) x /= s;
        }
        tri::multiply(d, e, v, tv);
        LD res = 0;
        for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(tv[i] - lambda * v[i]));
        if (!(res <= 1e-8L * norm_t)) {
            std::ostringstream msg;
            msg << "inverse iteration for mode " << m << " left residual " << static_cast<double>(res);
            throw Error(ErrorKind::Solver, msg.str());
        }
        // Sign convention: Psi_0 positive, others start positive.
        LD sign_ref = 0;
        if (m == 0) {
            for (LD x : v) sign_ref += x;
        } else {
            LD vmax = 0;
            for (LD x : v) vmax = std::max(vmax, std::abs(x));
            for (LD x : v) {
                if (std::abs(x) > 1e-3L * vmax) {
                    sign_ref = x;
                    break;
                }
            }
        }
        if (sign_ref < 0) {
            for (LD& x : v) x = -x;
        }
        vecs.push_back(v);

        // Unit norm under the trapezoid rule (endpoints are zero).
        const LD scale = 1.0L / std::sqrt(h);
        Profile psi(op.domain);
        for (std::size_t i = 0; i < n; ++i) psi[i + 1] = static_cast<double>(v[i] * scale);
        out.push_back({static_cast<double>(lambda), std::move(psi)});
    }
    return out;
}

double extrapolated_eigenvalue(double zeta, double a, double b, double dx, std::size_t k) {
    const Domain coarse = build_domain(a, b, dx);
    const Domain fine = Domain::make(a, b, 2 * (coarse.size() - 1) + 1);
    const LD lc = eigenvalue(assemble_operator(zeta, coarse), k);
    const LD lf = eigenvalue(assemble_operator(zeta, fine), k);
    return static_cast<double>((4.0L * lf - lc) / 3.0L);
}

Profile semigroup_apply(const std::vector<SpectralPair>& pairs, double t, const Profile& f, const SemigroupOptions& opts) {
    if (pairs.empty()) throw Error(ErrorKind::Validation, "semigroup needs at least one mode");
    if (!(t >= 0.0)) throw Error(ErrorKind::Validation, "semigroup time must be nonnegative");
    const Domain& dom = pairs.front().eigenfunction.domain;
    if (!(f.domain == dom)) throw Error(ErrorKind::Validation, "profile and modes live on different grids");

    Profile interior = f;
    interior.values.front() = 0.0;
    interior.values.back() = 0.0;
    Profile residual = interior;
    Profile out(dom);
    for (std::size_t m = 0; m < pairs.size(); ++m) {
        const auto& psi = pairs[m].eigenfunction;
        const double coeff = inner(psi, interior);
        for (std::size_t i = 0; i < out.size(); ++i) residual[i] -= coeff * psi[i];
        if (m == 0 && opts.drop_ground) continue;
        const double w = std::exp(-pairs[m].eigenvalue * t) * coeff;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * psi[i];
    }
    if (pairs.size() < dom.interior_size()) {
        const double tail = std::exp(-pairs.back().eigenvalue * t) * norm2(residual);
        const double fnorm = norm2(interior);
        if (tail > opts.tolerance * std::max(fnorm, 1e-300)) {
            std::ostringstream msg;
            msg << "truncation tail " << tail << " exceeds tolerance with " << pairs.size() << " modes at t=" << t;
            throw Error(ErrorKind::Truncation, msg.str());
        }
    }
    return out;
}

namespace {

// Factors of the explicit kernel, rescaled by exp(-4s) inside h and exp(2s)
// outside so that long intervals neither overflow nor underflow.
struct KernelFactors {
    double lo;      // -a - zeta
    double hi;      // b - zeta
    double s;
    double h_lo;
    double h_hi;
    double growth;  // exp(2s)

    KernelFactors(double zeta, const Domain& dom)
        : lo(-dom.left() - zeta),
          hi(dom.right() - zeta),
          s(std::max(std::abs(lo), std::abs(hi))),
          h_lo(scaled_h(lo, s)),
          h_hi(scaled_h(hi, s)),
          growth(std::exp(2.0 * s)) {}

    double left(double u) const { return sech2(u) * growth * (scaled_h(u, s) - h_lo); }
    double right(double u) const { return sech2(u) * growth * (h_hi - scaled_h(u, s)); }
    double norm() const { return 2.0 / (h_hi - h_lo); }
};

}  // namespace

double green_explicit(double zeta, const Domain& dom, double x, double y) {
    const KernelFactors k(zeta, dom);
    const double lo = std::min(x, y) - zeta;
    const double hi = std::max(x, y) - zeta;
    if (lo <= k.lo || hi >= k.hi) return 0.0;
    return k.norm() * k.left(lo) * k.right(hi);
}

Profile green_apply(double zeta, const Domain& dom, const Profile& f) {
    if (!(f.domain == dom)) throw Error(ErrorKind::Validation, "profile lives on a different grid");
    const KernelFactors k(zeta, dom);
    const std::size_t n = dom.size();
    std::vector<double> left(n), right(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = dom.x(i) - zeta;
        left[i] = (i == 0) ? 0.0 : k.left(u);
        right[i] = (i + 1 == n) ? 0.0 : k.right(u);
    }
    auto weight = [n](std::size_t j) { return (j == 0 || j + 1 == n) ? 0.5 : 1.0; };

    // below[i] = sum_{j <= i} w_j A_j f_j, above[i] = sum_{j > i} w_j B_j f_j
    std::vector<double> below(n), above(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += weight(i) * left[i] * f[i];
        below[i] = acc;
    }
    acc = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        above[i] = acc;
        acc += weight(i) * right[i] * f[i];
    }
    Profile out(dom);
    const double c = k.norm() * dom.dx();
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = c * (right[i] * below[i] + left[i] * above[i]);
    return out;
}

double lambda0_asymptotic(double eps, double zeta, WallMode mode) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::Domain, "eps must lie in (0, 1)");
    return mode == WallMode::OneWall ? 24.0 * eps * std::exp(-4.0 * zeta) : 48.0 * eps * std::cosh(4.0 * zeta);
}

TraceResult gperp_weighted_trace(double zeta, const Domain& dom, const std::vector<SpectralPair>& pairs, double cutoff) {
    if (pairs.empty()) throw Error(ErrorKind::Validation, "trace needs at least one mode");
    const std::size_t interior = dom.interior_size();
    if (pairs.size() < interior && pairs.back().eigenvalue <= cutoff) {
        std::ostringstream msg;
        msg << pairs.size() << " modes stop at lambda=" << pairs.back().eigenvalue << " below the cutoff " << cutoff;
        throw Error(ErrorKind::Truncation, msg.str());
    }
    const std::size_t n = dom.size();
    std::vector<double> weight(n, 0.0), diag(n, 0.0);
    double weight_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto w = eval_wave(zeta, dom.x(i));
        weight[i] = w.m * w.dm;
        weight_abs += ((i == 0 || i + 1 == n) ? 0.5 : 1.0) * std::abs(weight[i]);
    }
    weight_abs *= dom.dx();

    std::size_t used = 0;
    std::size_t first_excluded = pairs.size();
    for (std::size_t m = 1; m < pairs.size(); ++m) {
        if (pairs[m].eigenvalue > cutoff) {
            first_excluded = m;
            break;
        }
        const auto& psi = pairs[m].eigenfunction;
        for (std::size_t i = 0; i < n; ++i) diag[i] += psi[i] * psi[i] / pairs[m].eigenvalue;
        ++used;
    }
    double tail = 0.0;
    if (first_excluded < interior) {
        // Weyl: lambda_i ~ (1/2) ((i+1) pi / L)^2 and |Psi_i|^2 <= 2 / L.
        const double L = dom.length();
        tail = weight_abs * 4.0 * L / (std::numbers::pi * std::numbers::pi * static_cast<double>(first_excluded));
    }
    for (std::size_t i = 0; i < n; ++i) diag[i] *= weight[i];
    return {trapezoid(diag, dom.dx()), tail, used};
}

double gperp_weighted_trace_exact(double zeta, const Domain& dom) {
    const ProjectedResolvent g(zeta, dom);
    const Profile diag = g.diagonal();
    Profile integrand(dom);
    for (std::size_t i = 0; i < dom.size(); ++i) {
        const auto w = eval_wave(zeta, dom.x(i));
        integrand[i] = w.m * w.dm * diag[i];
    }
    return trapezoid(integrand.view(), dom.dx());
}

double gbar_kernel(double x, double y) {
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    auto u = [](double z) { return std::exp(4.0 * z) / 24.0 + std::exp(2.0 * z) / 3.0 + z / 2.0 - 0.375; };
    return 0.75 * sech2(lo) * sech2(hi) * (u(lo) + u(-hi) + 5.0 / 12.0);
}

std::string to_json(const SpectralSummary& s) {
    nlohmann::json j;
    j["a"] = s.a;
    j["b"] = s.b;
    j["zeta"] = s.zeta;
    j["dx"] = s.dx;
    j["lambda"] = s.lambda;
    if (s.kellogg) {
        const auto& k = *s.kellogg;
        j["kellogg"] = {{"mu", k.mu},
                        {"lambda0", k.lambda0},
                        {"lambda1", k.lambda1},
                        {"mu_minus_lambda0", k.mu_minus_lambda0},
                        {"bracket_upper", k.bracket_upper},
                        {"R", k.R},
                        {"c", k.c},
                        {"sup_bound", k.sup_bound},
                        {"sup_psi0_e2", k.sup_psi0_e2},
                        {"sup_e2_phi", k.sup_e2_phi}};
    }
    return j.dump(2);
}

}  // namespace acwall

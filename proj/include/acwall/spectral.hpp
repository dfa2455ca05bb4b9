#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acwall/grid.hpp"

namespace acwall {

/// H_zeta = -D2/2 + V''(mbar_zeta) on the interior nodes of a Domain with
/// Dirichlet truncation. The stencil is stored as the potential plus the
/// spacing; callers materialise diagonal and off-diagonal in the precision
/// they need, so the 1/dx^2 terms never pass through a double rounding.
struct TridiagonalOperator {
    Domain domain;
    double zeta;
    std::vector<double> potential;  // V'' (or override) per interior node

    std::size_t size() const { return potential.size(); }

    template <class Real>
    std::vector<Real> diagonal() const {
        const Real h = Real(domain.dx());
        const Real kinetic = Real(1) / (h * h);
        std::vector<Real> d(potential.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = kinetic + Real(potential[i]);
        return d;
    }

    template <class Real>
    std::vector<Real> off_diagonal() const {
        const Real h = Real(domain.dx());
        return std::vector<Real>(potential.empty() ? 0 : potential.size() - 1, Real(-1) / (Real(2) * h * h));
    }
};

using PotentialFn = std::function<double(double)>;

/// Throws ErrorKind::Domain if zeta is outside (-a, b).
TridiagonalOperator assemble_operator(double zeta, const Domain& dom,
                                      const std::optional<PotentialFn>& potential_override = std::nullopt);

/// (H f) on interior nodes, using f's boundary values in the stencil; the
/// returned profile is zero at both endpoints.
Profile apply_operator(const TridiagonalOperator& op, const Profile& f);

struct SpectralPair {
    double eigenvalue;
    Profile eigenfunction;  // unit trapezoid norm, zero at the endpoints
};

/// k smallest eigenpairs, increasing. Bisection on Sturm counts and inverse
/// iteration, both in long double. Psi_0 is sign-fixed positive; higher modes
/// have positive first non-negligible entry.
std::vector<SpectralPair> eigenpairs(const TridiagonalOperator& op, std::size_t k);

/// k-th eigenvalue only (long double bisection).
long double eigenvalue(const TridiagonalOperator& op, std::size_t k);

/// Richardson extrapolation (4 lambda(dx/2) - lambda(dx)) / 3 of the k-th grid
/// eigenvalue, cancelling the O(dx^2) stencil bias.
double extrapolated_eigenvalue(double zeta, double a, double b, double dx, std::size_t k = 0);

struct SemigroupOptions {
    bool drop_ground = false;
    double tolerance = 1e-8;  // allowed truncation tail relative to ||f||_2
};

/// sum_i exp(-lambda_i t) <Psi_i, f> Psi_i. The truncation tail is bounded by
/// exp(-lambda_last t) times the norm of the part of f outside the span;
/// throws ErrorKind::Truncation when it exceeds the tolerance.
Profile semigroup_apply(const std::vector<SpectralPair>& pairs, double t, const Profile& f,
                        const SemigroupOptions& opts = {});

/// Explicit Dirichlet Green kernel of H_zeta built from mbar' and h.
double green_explicit(double zeta, const Domain& dom, double x, double y);

/// Trapezoid application of the explicit kernel in O(N).
Profile green_apply(double zeta, const Domain& dom, const Profile& f);

struct KelloggReport {
    double mu;
    double lambda0;
    double lambda1;
    double mu_minus_lambda0;  // evaluated before rounding to double
    double bracket_upper;
    double R;
    double c;
    double sup_bound;
    double sup_psi0_e2;
    double sup_e2_phi;
    Profile e1;
    Profile e2;
};

/// Kellogg iteration f1 = G phi, f2 = G f1 with phi = mbar'/||mbar'||, run on
/// the discrete Green operator (the inverse of the assembled matrix) so that
/// mu, lambda_0, lambda_1, c and R all refer to one operator. Carried out in
/// 50-digit arithmetic: at a = 5 the bracket is below 1e-30.
/// Throws ErrorKind::Solver if the grid operator is not positive definite.
KelloggReport kellogg(double zeta, const Domain& dom);

enum class WallMode { OneWall, TwoWall };

/// 24 eps exp(-4 zeta) (one wall) or 48 eps cosh(4 zeta) (two walls).
double lambda0_asymptotic(double eps, double zeta, WallMode mode);

/// Projected resolvent G_perp = G - Psi_0 Psi_0 / lambda_0 of the grid
/// operator, computed in 50-digit arithmetic from the semi-separable form of
/// the inverse. Exact over all grid modes; indices are global node indices.
class ProjectedResolvent {
public:
    ProjectedResolvent(double zeta, const Domain& dom);
    ~ProjectedResolvent();
    ProjectedResolvent(ProjectedResolvent&&) noexcept;
    ProjectedResolvent& operator=(ProjectedResolvent&&) noexcept;

    const Domain& domain() const;
    double lambda0() const;
    double operator()(std::size_t i, std::size_t j) const;
    /// Nearest grid nodes to (x, y).
    double at(double x, double y) const;
    Profile diagonal() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct TraceResult {
    double value;
    double tail_bound;
    std::size_t modes_used;
};

/// int mbar' mbar sum_{i >= 1, lambda_i <= cutoff} Psi_i(x)^2 / lambda_i dx,
/// with a Weyl-law bound on the omitted modes. Throws ErrorKind::Truncation
/// if `pairs` stops below the cutoff without exhausting the grid.
TraceResult gperp_weighted_trace(double zeta, const Domain& dom, const std::vector<SpectralPair>& pairs,
                                 double cutoff = 200.0);

/// Same integral with the exact projected-resolvent diagonal.
double gperp_weighted_trace_exact(double zeta, const Domain& dom);

/// Whole-line limit of G_perp at zeta = 0.
double gbar_kernel(double x, double y);

struct SpectralSummary {
    double a;
    double b;
    double zeta;
    double dx;
    std::vector<double> lambda;
    std::optional<KelloggReport> kellogg;
};

std::string to_json(const SpectralSummary& s);

}  // namespace acwall

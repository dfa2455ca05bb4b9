#include "acwall/grid.hpp"

#include <cmath>
#include <sstream>

#include "acwall/error.hpp"

namespace acwall {

Domain Domain::make(double a, double b, std::size_t n) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        std::ostringstream msg;
        msg << "endpoints must be positive and finite (a=" << a << ", b=" << b << ")";
        throw Error(ErrorKind::Domain, msg.str());
    }
    if (a > b) {
        std::ostringstream msg;
        msg << "left extent a=" << a << " exceeds right extent b=" << b;
        throw Error(ErrorKind::Domain, msg.str());
    }
    if (n < 3) {
        throw Error(ErrorKind::Domain, "grid needs at least 3 nodes");
    }
    return Domain(a, b, n);
}

Domain build_domain(double a, double b, double dx_target, std::size_t cap) {
    if (!(dx_target > 0.0) || !std::isfinite(dx_target)) {
        throw Error(ErrorKind::Domain, "grid spacing must be positive and finite");
    }
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw Error(ErrorKind::Domain, "endpoints must be positive and finite");
    }
    const double cells = (a + b) / dx_target;
    if (cells + 1.0 > static_cast<double>(cap)) {
        std::ostringstream msg;
        msg << "grid of " << cells + 1.0 << " nodes exceeds the cap of " << cap;
        throw Error(ErrorKind::Resource, msg.str());
    }
    // Tolerate representation error so (3, 3, 0.01) gives exactly 600 cells.
    auto n_cells = static_cast<std::size_t>(std::ceil(cells * (1.0 - 1e-12)));
    if (n_cells < 2) n_cells = 2;
    return Domain::make(a, b, n_cells + 1);
}

std::vector<double> Domain::nodes() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = x(i);
    out.back() = b_;
    return out;
}

Profile::Profile(Domain dom, std::vector<double> v) : domain(dom), values(std::move(v)) {
    if (values.size() != domain.size()) {
        throw Error(ErrorKind::Validation, "profile length does not match the domain grid");
    }
}

Profile Profile::sample(const Domain& dom, const std::function<double(double)>& fn) {
    Profile p(dom);
    for (std::size_t i = 0; i < dom.size(); ++i) p.values[i] = fn(dom.x(i));
    return p;
}

double trapezoid(std::span<const double> f, double dx) {
    if (f.empty()) return 0.0;
    if (f.size() == 1) return 0.0;
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * dx;
}

double inner(std::span<const double> f, std::span<const double> g, double dx) {
    const std::size_t n = f.size();
    if (n != g.size()) throw Error(ErrorKind::Validation, "inner product of mismatched vectors");
    if (n < 2) return 0.0;
    double s = 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) s += f[i] * g[i];
    return s * dx;
}

double inner(const Profile& f, const Profile& g) {
    if (!(f.domain == g.domain)) throw Error(ErrorKind::Validation, "profiles live on different grids");
    return inner(f.view(), g.view(), f.domain.dx());
}

double norm2(const Profile& f) { return std::sqrt(inner(f, f)); }

double norm1(const Profile& f) {
    double s = 0.0;
    const auto n = f.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        s += w * std::abs(f.values[i]);
    }
    return s * f.domain.dx();
}

double norm_inf(std::span<const double> f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double norm_inf(const Profile& f) { return norm_inf(f.view()); }

}  // namespace acwall

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace acwall {

/// Uniform grid on [-a, b]; node 0 sits at -a and node n-1 at b.
class Domain {
public:
    /// Placeholder grid [-1, 1] with 3 nodes.
    Domain() : a_(1.0), b_(1.0), n_(3), dx_(1.0) {}

    /// Validates a > 0, b > 0, a <= b and n >= 3; throws ErrorKind::Domain otherwise.
    static Domain make(double a, double b, std::size_t n);

    double left() const { return a_; }
    double right() const { return b_; }
    double length() const { return a_ + b_; }
    std::size_t size() const { return n_; }
    std::size_t interior_size() const { return n_ - 2; }
    double dx() const { return dx_; }
    double x(std::size_t i) const { return -a_ + static_cast<double>(i) * dx_; }
    std::vector<double> nodes() const;

    bool contains_open(double x) const { return x > -a_ && x < b_; }

    friend bool operator==(const Domain&, const Domain&) = default;

private:
    Domain(double a, double b, std::size_t n) : a_(a), b_(b), n_(n), dx_((a + b) / static_cast<double>(n - 1)) {}

    double a_;
    double b_;
    std::size_t n_;
    double dx_;
};

/// Hard cap on grid size used by build_domain.
inline constexpr std::size_t kMaxGridPoints = 10'000'000;

/// Smallest grid on [-a, b] with spacing <= dx_target. Throws ErrorKind::Resource
/// when more than `cap` nodes would be needed.
Domain build_domain(double a, double b, double dx_target, std::size_t cap = kMaxGridPoints);

/// Real-valued function sampled on every node of a Domain.
struct Profile {
    Domain domain;
    std::vector<double> values;

    Profile(Domain dom, std::vector<double> v);
    Profile() : Profile(Domain{}) {}
    explicit Profile(Domain dom) : domain(dom), values(dom.size(), 0.0) {}

    static Profile sample(const Domain& dom, const std::function<double(double)>& fn);

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    std::span<const double> view() const { return values; }
};

// Trapezoid quadrature on a uniform grid. Every integral in the project goes
// through these so that discrete inner products match the operator discretization.
double trapezoid(std::span<const double> f, double dx);
double inner(std::span<const double> f, std::span<const double> g, double dx);
double inner(const Profile& f, const Profile& g);
double norm2(const Profile& f);
double norm1(const Profile& f);
double norm_inf(std::span<const double> f);
double norm_inf(const Profile& f);

}  // namespace acwall

#include "ginlab/specialfn.hpp"

#include <cmath>

#include "ginlab/quadrature.hpp"

namespace ginlab::specialfn {

namespace {

constexpr double kSqrt2Pi = 2.506628274631000502415765284811;

void check_domain(cdouble z) {
    if (std::abs(z.real()) > 30.0 || std::abs(z.imag()) > 10.0)
        throw std::domain_error("ie: argument outside validated domain");
}

void check_order(double n) {
    if (n < -1.0) throw std::invalid_argument("ie: order must be >= -1");
}

cdouble ie_minus1(cdouble z) { return std::exp(-0.5 * z * z) / kSqrt2Pi; }

}  // namespace

double rgamma(double x) {
    if (x > 0.5) return 1.0 / std::tgamma(x);
    if (x <= 0.0 && x == std::floor(x)) return 0.0;  // pole of Gamma
    // reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
    return std::sin(kPi * x) * std::tgamma(1.0 - x) / kPi;
}

cdouble ie_series(double n, cdouble z) {
    check_order(n);
    check_domain(z);
    if (n == -1.0) return ie_minus1(z);
    const cdouble base = -std::sqrt(2.0) * z;
    cdouble power(1.0, 0.0);
    cdouble sum(0.0, 0.0);
    double inv_kfact = 1.0;
    int quiet = 0;
    for (int k = 0; k < 500; ++k) {
        if (k > 0) {
            power *= base;
            inv_kfact /= k;
        }
        cdouble term = power * (inv_kfact * rgamma(1.0 + 0.5 * (n - k)));
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)))
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 6) break;
    }
    return std::pow(2.0, -1.0 - 0.5 * n) * sum;
}

cdouble ie_quadrature(double n, cdouble z) {
    check_order(n);
    check_domain(z);
    if (n == -1.0) return ie_minus1(z);
    const double vmax = std::max(0.0, -z.real()) + 30.0;
    auto integrand = [&](double v) -> cdouble {
        cdouble s = v + z;
        return std::pow(v, n) * std::exp(-0.5 * s * s);
    };
    // split near the origin: v^n is steep there for n in (-1, 0)
    cdouble head = quad::adaptive<cdouble>(integrand, 0.0, 1.0, 1e-14);
    cdouble tail = quad::adaptive<cdouble>(integrand, 1.0, vmax, 1e-14);
    return (head + tail) / (kSqrt2Pi * std::tgamma(n + 1.0));
}

cdouble ie(double n, cdouble z) {
    check_order(n);
    check_domain(z);
    if (n == -1.0) return ie_minus1(z);
    return std::abs(z) <= 4.0 ? ie_series(n, z) : ie_quadrature(n, z);
}

double ie_recursion_check(double n, cdouble z) {
    if (n < 0.0)
        throw std::invalid_argument("ie_recursion_check: order must be >= 0");
    check_domain(z);
    double vmax = std::min(std::max(0.0, -z.real()) + 25.0, 29.5 - z.real());
    cdouble integral = quad::adaptive<cdouble>(
        [&](double v) { return ie(n - 1.0, z + v); }, 0.0, vmax, 1e-12);
    return std::abs(ie(n, z) - integral);
}

cdouble f_kernel(int n, cdouble z, cdouble w) {
    if (n < 0) throw std::invalid_argument("f_kernel: order must be >= 0");
    if (std::abs(z) > 8.0 || std::abs(w) > 8.0)
        throw std::domain_error("f_kernel: argument outside validated domain");
    const cdouble s = z + w;
    const cdouble d = z - w;
    const double umax = 14.0 + std::abs(s);
    auto inner = [&](double v) -> cdouble {
        const double v2 = v * v;
        return quad::adaptive<cdouble>(
            [&](double u) -> cdouble {
                cdouble e = u + s;
                return std::pow(u * u - v2, n) * std::exp(-0.5 * e * e);
            },
            v / std::sqrt(2.0), umax, 1e-12);
    };
    cdouble outer = quad::adaptive<cdouble>(
        [&](double v) -> cdouble {
            return std::exp(-0.5 * v * v) * std::sinh(v * d) * inner(v);
        },
        0.0, 14.0, 1e-11);
    return std::exp(0.5 * s * s) * outer / (2.0 * kPi);
}

}  // namespace ginlab::specialfn

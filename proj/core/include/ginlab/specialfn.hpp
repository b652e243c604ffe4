#pragma once

#include "ginlab/types.hpp"

namespace ginlab::specialfn {

// IE_n(z) = (sqrt(2 pi) Gamma(n+1))^{-1} \int_0^inf v^n exp(-(v+z)^2/2) dv,
// with IE_{-1}(z) = exp(-z^2/2)/sqrt(2 pi). Validated on |Re z| <= 30,
// |Im z| <= 10, any real n >= -1; absolute accuracy 1e-10.
cdouble ie(double n, cdouble z);

// The two independent evaluators behind ie(); exposed for cross-checks.
cdouble ie_series(double n, cdouble z);      // |z| <= 4
cdouble ie_quadrature(double n, cdouble z);  // whole validated domain

// Residual |IE_n(z) - \int_0^inf IE_{n-1}(z+v) dv| of the order-raising
// recursion; n >= 0.
double ie_recursion_check(double n, cdouble z);

// f_n(z,w) of the real-edge kernel: nested double integral, antisymmetric in
// (z,w). Validated on |z|, |w| <= 8; absolute accuracy 1e-8.
cdouble f_kernel(int n, cdouble z, cdouble w);

// 1/Gamma(x) for any real x (zero at nonpositive integers).
double rgamma(double x);

}  // namespace ginlab::specialfn

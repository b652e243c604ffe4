#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace ginlab {

using cdouble = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Complex value carried as mantissa * exp(log_scale). Determinants and
// Pfaffians of the duality observables can leave double range, so every
// multiplicative accumulation goes through this.
struct LogScaled {
    cdouble mantissa{1.0, 0.0};
    double log_scale{0.0};

    void mul(cdouble factor) {
        mantissa *= factor;
        normalize();
    }

    void normalize() {
        double a = std::abs(mantissa);
        if (a == 0.0) {
            log_scale = 0.0;
            return;
        }
        if (a > 1e100 || a < 1e-100) {
            mantissa /= a;
            log_scale += std::log(a);
        }
    }

    cdouble value() const { return mantissa * std::exp(log_scale); }

    static LogScaled zero() { return LogScaled{cdouble(0.0, 0.0), 0.0}; }
};

}  // namespace ginlab

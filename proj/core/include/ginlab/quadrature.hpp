#pragma once

#include <cmath>
#include <stdexcept>

#include "ginlab/types.hpp"

namespace ginlab::quad {

// 15-point Gauss-Kronrod pair on [-1, 1].
inline constexpr double kNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <typename F, typename T>
void gk15(const F& f, double a, double b, T& kronrod, T& gauss) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T fc = f(c);
    kronrod = kWeights[7] * fc;
    gauss = kGaussWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        T lo = f(c - h * kNodes[i]);
        T hi = f(c + h * kNodes[i]);
        kronrod += kWeights[i] * (lo + hi);
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (lo + hi);
    }
    kronrod *= h;
    gauss *= h;
}

// Adaptive bisection on the embedded-rule error estimate.
template <typename T, typename F>
T adaptive(const F& f, double a, double b, double abs_tol,
           double rel_tol = 1e-12, int max_depth = 28) {
    struct Rec {
        const F& f;
        double abs_tol, rel_tol;
        T run(double lo, double hi, int depth) const {
            T k, g;
            gk15(f, lo, hi, k, g);
            double err = std::abs(k - g);
            if (err <= abs_tol || err <= rel_tol * std::abs(k) || depth <= 0)
                return k;
            double mid = 0.5 * (lo + hi);
            return run(lo, mid, depth - 1) + run(mid, hi, depth - 1);
        }
    };
    if (!(b > a)) return T{};
    Rec rec{f, abs_tol * 0.5, rel_tol};
    double mid = 0.5 * (a + b);
    return rec.run(a, mid, max_depth) + rec.run(mid, b, max_depth);
}

}  // namespace ginlab::quad

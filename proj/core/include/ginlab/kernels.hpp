#pragma once

#include <vector>

#include "ginlab/types.hpp"

namespace ginlab::kernels {

// Scaled coordinate frame at an edge point: zhat = scale * z0^{-1} (z - z0),
// scale = sqrt(N) for beta = 2 and sqrt(2N) for beta = 4.
struct EdgeFrame {
    cdouble z0{1.0, 0.0};
    int dyson_index{2};
    int t{0};  // geometric multiplicity of z0 in the perturbation

    void validate() const;
    static EdgeFrame ue(cdouble z0, int t);
    static EdgeFrame se(cdouble z0, int t);
    static double scale_factor(int dyson_index, int n);
};

// Complex-edge limit kernel K_t(zhat, what).
cdouble k_edge(int t, cdouble zhat, cdouble what);

// Real-edge (quaternion) limit kernel K^(re)_t(zhat, what).
cdouble k_edge_real(int t, cdouble zhat, cdouble what);

// det[K_t(z0^{-1} zhat_i, z0^{-1} zhat_j)]; clamped to its real part.
double predict_correlation_ue(const EdgeFrame& frame,
                              const std::vector<cdouble>& points);

// Real-edge Pfaffian prediction (z0 = +-1), or determinantal form when
// Im z0 > 0. Points live in the zhat plane, prior to the z0 rotation.
double predict_correlation_se(const EdgeFrame& frame,
                              const std::vector<cdouble>& points);

}  // namespace ginlab::kernels

#include "ginlab/kernels.hpp"

#include <cmath>

#include "ginlab/numkit.hpp"
#include "ginlab/specialfn.hpp"

namespace ginlab::kernels {

using specialfn::f_kernel;
using specialfn::ie;

void EdgeFrame::validate() const {
    if (dyson_index != 2 && dyson_index != 4)
        throw std::invalid_argument("EdgeFrame: dyson index must be 2 or 4");
    if (t < 0) throw std::invalid_argument("EdgeFrame: t must be >= 0");
    if (std::abs(std::abs(z0) - 1.0) > 1e-12)
        throw std::invalid_argument("EdgeFrame: |z0| must be 1");
}

EdgeFrame EdgeFrame::ue(cdouble z0, int t) {
    EdgeFrame f{z0, 2, t};
    f.validate();
    return f;
}

EdgeFrame EdgeFrame::se(cdouble z0, int t) {
    EdgeFrame f{z0, 4, t};
    f.validate();
    return f;
}

double EdgeFrame::scale_factor(int dyson_index, int n) {
    return dyson_index == 4 ? std::sqrt(2.0 * n) : std::sqrt(double(n));
}

namespace {

// IE at a real point; the kernel amplitude factors are real and positive.
double ie_real(double n, double x) {
    cdouble v = ie(n, cdouble(x, 0.0));
    return v.real();
}

}  // namespace

cdouble k_edge(int t, cdouble zhat, cdouble what) {
    if (t < 0) throw std::invalid_argument("k_edge: t must be >= 0");
    const cdouble s = zhat + std::conj(what);
    const double az = ie_real(t - 1.0, -2.0 * zhat.real());
    const double aw = ie_real(t - 1.0, -2.0 * what.real());
    return std::sqrt(2.0 / kPi) * std::tgamma(t + 1.0) *
           std::exp(0.5 * s * s) * std::sqrt(az * aw) * ie(t, s);
}

cdouble k_edge_real(int t, cdouble zhat, cdouble what) {
    if (t < 0) throw std::invalid_argument("k_edge_real: t must be >= 0");
    const double az = ie_real(2.0 * t - 1.0, -2.0 * zhat.real());
    const double aw = ie_real(2.0 * t - 1.0, -2.0 * what.real());
    return std::sqrt(az * aw) * f_kernel(t, zhat, what);
}

double predict_correlation_ue(const EdgeFrame& frame,
                              const std::vector<cdouble>& points) {
    frame.validate();
    if (frame.dyson_index != 2)
        throw std::invalid_argument("predict_correlation_ue: beta = 2 frame required");
    const int n = static_cast<int>(points.size());
    const cdouble inv_z0 = cdouble(1.0, 0.0) / frame.z0;
    ComplexMatrix gram(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            gram(i, j) = k_edge(frame.t, inv_z0 * points[i], inv_z0 * points[j]);
    cdouble d = numkit::det(gram);
    return d.real();
}

double predict_correlation_se(const EdgeFrame& frame,
                              const std::vector<cdouble>& points) {
    frame.validate();
    if (frame.dyson_index != 4)
        throw std::invalid_argument("predict_correlation_se: beta = 4 frame required");
    const int n = static_cast<int>(points.size());
    const cdouble inv_z0 = cdouble(1.0, 0.0) / frame.z0;

    if (frame.z0.imag() > 0.0) {
        // complex edge: same determinantal form as the beta = 2 case
        ComplexMatrix gram(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gram(i, j) =
                    k_edge(frame.t, inv_z0 * points[i], inv_z0 * points[j]);
        return numkit::det(gram).real();
    }
    if (std::abs(frame.z0.real()) != 1.0 || frame.z0.imag() != 0.0)
        throw std::invalid_argument(
            "predict_correlation_se: real edge requires z0 = +-1");

    // rows 2i, 2i+1 carry (zhat_i, conj zhat_i)
    auto arg = [&](int i, int bar) {
        return inv_z0 * (bar ? std::conj(points[i]) : points[i]);
    };
    ComplexMatrix m(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < 2; ++s)
            for (int j = 0; j < n; ++j)
                for (int r = 0; r < 2; ++r)
                    m(2 * i + s, 2 * j + r) =
                        k_edge_real(frame.t, arg(i, s), arg(j, r));
    double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    double asym = (m + m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * scale)
        throw std::runtime_error(
            "predict_correlation_se: assembled Pfaffian block lost antisymmetry");
    m = 0.5 * (m - m.transpose().eval());

    LogScaled pref;
    for (int k = 0; k < n; ++k)
        pref.mul(inv_z0 * std::conj(points[k]) - inv_z0 * points[k]);
    auto pf = numkit::pfaffian(m);
    pref.mul(pf.value);
    pref.log_scale += pf.log_scale;
    return pref.value().real();
}

}  // namespace ginlab::kernels

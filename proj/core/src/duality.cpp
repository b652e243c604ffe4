#include "ginlab/duality.hpp"

#include <cmath>
#include <limits>

#include "ginlab/numkit.hpp"
#include "ginlab/parallel.hpp"
#include "ginlab/rng.hpp"

namespace ginlab::duality {

using numkit::det_log;
using numkit::kron;
using numkit::pfaffian;

MCEstimate reduce(const std::vector<LogScaled>& samples) {
    MCEstimate out;
    out.count = static_cast<long>(samples.size());
    if (samples.empty()) return out;
    double lmax = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples)
        if (s.mantissa != cdouble(0.0, 0.0)) lmax = std::max(lmax, s.log_scale);
    if (!std::isfinite(lmax)) return out;  // all zero
    cdouble sum(0.0, 0.0);
    for (const auto& s : samples)
        sum += s.mantissa * std::exp(s.log_scale - lmax);
    cdouble mean_scaled = sum / double(out.count);
    double vr = 0.0, vi = 0.0;
    for (const auto& s : samples) {
        cdouble d = s.mantissa * std::exp(s.log_scale - lmax) - mean_scaled;
        vr += d.real() * d.real();
        vi += d.imag() * d.imag();
    }
    const double denom = out.count > 1 ? double(out.count) * (out.count - 1) : 1.0;
    const double scale = std::exp(lmax);
    out.mean = mean_scaled * scale;
    out.se_re = std::sqrt(vr / denom) * scale;
    out.se_im = std::sqrt(vi / denom) * scale;
    return out;
}

void DualityCase::validate() const {
    config.validate();
    const int n = config.dyson_index == 4 ? 2 * config.dim : config.dim;
    if (config.dyson_index == 2) {
        if (a1.rows() != Eigen::Index(k1) * n || a2.rows() != Eigen::Index(k2) * n)
            throw std::invalid_argument("DualityCase: A blocks must be K1*N and K2*N");
    } else {
        if (a1.rows() != Eigen::Index(k1) * n)
            throw std::invalid_argument("DualityCase: A must have order K*N");
    }
    if (budget < 1) throw std::invalid_argument("DualityCase: empty budget");
}

sampler::DualSpec DualityCase::dual_spec() const {
    sampler::DualSpec d;
    d.kind = sampler::dual_kind_for(config.dyson_index);
    d.k1 = config.dyson_index == 2 ? k1 : k();
    d.k2 = k2;
    d.tau = config.tau_or_default();
    d.big_n = config.dim;
    d.mean = y0;
    return d;
}

namespace {

ComplexMatrix identity_or(const std::optional<ComplexMatrix>& m, int n) {
    return m ? *m : ComplexMatrix::Identity(n, n);
}

ComplexMatrix symplectic_j(int n) {
    ComplexMatrix j = ComplexMatrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = ComplexMatrix::Identity(n, n);
    j.bottomLeftCorner(n, n) = -ComplexMatrix::Identity(n, n);
    return j;
}

int sign_power(long exponent) { return exponent % 2 == 0 ? 1 : -1; }

}  // namespace

LogScaled q_observable(const DualityCase& c, const ComplexMatrix& x,
                       const ComplexMatrix& y) {
    const int beta = c.config.dyson_index;
    const int n = beta == 4 ? 2 * c.config.dim : c.config.dim;
    const ComplexMatrix sigma = identity_or(c.config.sigma, n);
    const ComplexMatrix gamma = identity_or(c.config.gamma, n);

    if (beta == 2) {
        const int k1 = c.k1, k2 = c.k2;
        ComplexMatrix m((k1 + k2) * n, (k1 + k2) * n);
        m.topLeftCorner(k1 * n, k1 * n) =
            c.a1 - kron(ComplexMatrix::Identity(k1, k1), x);
        m.topRightCorner(k1 * n, k2 * n) = -kron(y.adjoint(), sigma);
        m.bottomLeftCorner(k2 * n, k1 * n) = kron(y, gamma);
        m.bottomRightCorner(k2 * n, k2 * n) =
            c.a2 - kron(ComplexMatrix::Identity(k2, k2), x.adjoint());
        return det_log(m);
    }

    const int k = c.k1;
    const long kn = static_cast<long>(k) * n;
    ComplexMatrix m(2 * kn, 2 * kn);
    ComplexMatrix upper = c.a1 - kron(ComplexMatrix::Identity(k, k), x);
    m.topRightCorner(kn, kn) = upper;
    m.bottomLeftCorner(kn, kn) = -upper.transpose();
    if (beta == 1) {
        m.topLeftCorner(kn, kn) = kron(y, sigma);
        m.bottomRightCorner(kn, kn) = kron(y.adjoint(), gamma);
    } else {
        const cdouble i_unit(0.0, 1.0);
        ComplexMatrix jn = symplectic_j(c.config.dim);
        m.topLeftCorner(kn, kn) = i_unit * kron(y, sigma * jn);
        m.bottomRightCorner(kn, kn) = i_unit * kron(y.adjoint(), jn * gamma);
    }
    auto pf = pfaffian(m);
    LogScaled out{pf.value, pf.log_scale};
    const long sign_exp = beta == 1 ? kn * (kn - 1) / 2 : kn / 2;  // KN for beta=4
    out.mul(cdouble(sign_power(sign_exp), 0.0));
    return out;
}

namespace {

DualityReport run_two_sided(const DualityCase& c, bool lhs_charpoly,
                            const CharpolyCase* cp) {
    c.validate();
    const long m = c.budget;
    std::vector<LogScaled> lhs(m), rhs(m);
    const ComplexMatrix x0 = sampler::full_mean(c.config);
    const auto dual = c.dual_spec();

    parallel::parallel_for(m, [&](long i) {
        ComplexMatrix x = sampler::sample_deformed(c.config, i);
        if (!lhs_charpoly) {
            lhs[i] = q_observable(c, x, c.y0.size() ? c.y0
                                                    : ComplexMatrix::Zero(
                                                          dual.rows(), dual.cols()));
        } else {
            LogScaled v;
            const Eigen::Index side = x.rows();
            for (cdouble z : cp->z) {
                LogScaled d = det_log(z * ComplexMatrix::Identity(side, side) - x);
                v.mul(d.mantissa);
                v.log_scale += d.log_scale;
            }
            for (cdouble w : cp->w) {
                LogScaled d = det_log(std::conj(w) *
                                          ComplexMatrix::Identity(side, side) -
                                      x.adjoint());
                v.mul(d.mantissa);
                v.log_scale += d.log_scale;
            }
            lhs[i] = v;
        }
        ComplexMatrix y = sampler::sample_dual(dual, c.config.seed, i);
        rhs[i] = q_observable(c, x0, y);
    });

    DualityReport rep;
    rep.lhs = reduce(lhs);
    rep.rhs = reduce(rhs);
    auto zpart = [](double a, double b, double sa, double sb) {
        double d = std::abs(a - b);
        double s = std::hypot(sa, sb);
        if (s == 0.0) return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return d / s;
    };
    rep.z_score = std::max(
        zpart(rep.lhs.mean.real(), rep.rhs.mean.real(), rep.lhs.se_re, rep.rhs.se_re),
        zpart(rep.lhs.mean.imag(), rep.rhs.mean.imag(), rep.lhs.se_im, rep.rhs.se_im));
    rep.pass = rep.z_score <= 3.0;
    return rep;
}

}  // namespace

DualityReport verify_duality(const DualityCase& c) {
    return run_two_sided(c, false, nullptr);
}

DualityReport verify_duality_with_retry(const DualityCase& c) {
    DualityReport rep = verify_duality(c);
    if (rep.pass) return rep;
    DualityCase big = c;
    big.budget = 4 * c.budget;
    rep = verify_duality(big);
    rep.retried = true;
    return rep;
}

DualityCase charpoly_to_duality(const CharpolyCase& c) {
    DualityCase d;
    d.config = c.config;
    d.budget = c.budget;
    const int beta = c.config.dyson_index;
    const int n = beta == 4 ? 2 * c.config.dim : c.config.dim;
    const int k1 = static_cast<int>(c.z.size());
    const int k2 = static_cast<int>(c.w.size());
    ComplexMatrix zd = ComplexMatrix::Zero(k1, k1);
    for (int i = 0; i < k1; ++i) zd(i, i) = c.z[i];
    ComplexMatrix wd = ComplexMatrix::Zero(k2, k2);
    for (int i = 0; i < k2; ++i) wd(i, i) = std::conj(c.w[i]);
    ComplexMatrix id = ComplexMatrix::Identity(n, n);
    if (beta == 2) {
        d.k1 = k1;
        d.k2 = k2;
        d.a1 = kron(zd, id);
        d.a2 = kron(wd, id);
    } else {
        d.k1 = k1 + k2;
        d.k2 = k1 + k2;
        ComplexMatrix a = ComplexMatrix::Zero(Eigen::Index(k1 + k2) * n,
                                              Eigen::Index(k1 + k2) * n);
        if (k1 > 0) a.topLeftCorner(Eigen::Index(k1) * n, Eigen::Index(k1) * n) =
            kron(zd, id);
        if (k2 > 0)
            a.bottomRightCorner(Eigen::Index(k2) * n, Eigen::Index(k2) * n) =
                kron(wd, id);
        d.a1 = a;
    }
    return d;
}

DualityReport verify_charpoly(const CharpolyCase& c) {
    DualityCase d = charpoly_to_duality(c);
    return run_two_sided(d, true, &c);
}

DualityReport verify_charpoly_with_retry(const CharpolyCase& c) {
    DualityReport rep = verify_charpoly(c);
    if (rep.pass) return rep;
    CharpolyCase big = c;
    big.budget = 4 * c.budget;
    rep = verify_charpoly(big);
    rep.retried = true;
    return rep;
}

DualityCase make_random_case(int beta, int n, int k1, int k2,
                             bool random_covariances, double tau,
                             std::uint64_t seed, long budget) {
    rng::Stream s(seed, 0, 0x636173656d616b65ull);
    DualityCase c;
    c.config.dyson_index = beta;
    c.config.dim = n;
    c.config.tau = tau;
    c.config.seed = rng::mix(seed);
    c.k1 = k1;
    c.k2 = k2;
    c.budget = budget;
    const int side = beta == 4 ? 2 * n : n;

    // rank-1-ish random mean
    ComplexMatrix x0 = ComplexMatrix::Zero(side, side);
    if (beta == 1) {
        for (int i = 0; i < n; ++i) x0(i, 0) = s.normal() * 0.5;
    } else if (beta == 2) {
        for (int i = 0; i < n; ++i) x0(i, 0) = 0.5 * s.complex_normal();
    } else {
        ComplexMatrix b1 = ComplexMatrix::Zero(n, n), b2 = ComplexMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            b1(i, 0) = 0.5 * s.complex_normal();
            b2(i, 0) = 0.5 * s.complex_normal();
        }
        x0.topLeftCorner(n, n) = b1;
        x0.topRightCorner(n, n) = b2;
        x0.bottomLeftCorner(n, n) = -b2.conjugate();
        x0.bottomRightCorner(n, n) = b1.conjugate();
    }
    c.config.mean = x0;

    if (random_covariances) {
        auto random_pd = [&]() {
            ComplexMatrix b(side, side);
            for (int j = 0; j < side; ++j)
                for (int i = 0; i < side; ++i)
                    b(i, j) = beta == 1 ? cdouble(s.normal(), 0.0)
                                        : s.complex_normal();
            ComplexMatrix pd = b * b.adjoint() / double(side) +
                               0.5 * ComplexMatrix::Identity(side, side);
            return pd;
        };
        if (beta == 4) {
            // quaternion-structured PD: S S* with quaternion S
            ComplexMatrix b1(n, n), b2(n, n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    b1(i, j) = s.complex_normal();
                    b2(i, j) = s.complex_normal();
                }
            ComplexMatrix q(2 * n, 2 * n);
            q.topLeftCorner(n, n) = b1;
            q.topRightCorner(n, n) = b2;
            q.bottomLeftCorner(n, n) = -b2.conjugate();
            q.bottomRightCorner(n, n) = b1.conjugate();
            c.config.sigma = q * q.adjoint() / double(2 * n) +
                             0.5 * ComplexMatrix::Identity(2 * n, 2 * n);
            c.config.gamma = c.config.sigma;
        } else {
            c.config.sigma = random_pd();
            c.config.gamma = random_pd();
        }
    }

    auto random_diag = [&](int order) {
        ComplexMatrix a = ComplexMatrix::Zero(order, order);
        for (int i = 0; i < order; ++i) a(i, i) = 1.5 * s.complex_normal();
        return a;
    };
    if (beta == 2) {
        c.a1 = random_diag(k1 * side);
        c.a2 = random_diag(k2 * side);
    } else {
        c.a1 = random_diag(k1 * side);
    }

    // random dual mean of the matching kind
    const auto kind = sampler::dual_kind_for(beta);
    const int dk = c.k();
    if (kind == sampler::DualKind::Rectangular) {
        ComplexMatrix y0(k2, k1);
        for (int j = 0; j < k1; ++j)
            for (int i = 0; i < k2; ++i) y0(i, j) = 0.5 * s.complex_normal();
        c.y0 = y0;
    } else if (kind == sampler::DualKind::Symmetric) {
        ComplexMatrix y0 = ComplexMatrix::Zero(dk, dk);
        for (int j = 0; j < dk; ++j)
            for (int i = 0; i <= j; ++i) {
                cdouble v = 0.5 * s.complex_normal();
                y0(i, j) = v;
                y0(j, i) = v;
            }
        c.y0 = y0;
    } else {
        ComplexMatrix y0 = ComplexMatrix::Zero(dk, dk);
        for (int j = 0; j < dk; ++j)
            for (int i = 0; i < j; ++i) {
                cdouble v = 0.5 * s.complex_normal();
                y0(i, j) = v;
                y0(j, i) = -v;
            }
        c.y0 = y0;
    }
    return c;
}

}  // namespace ginlab::duality

#include "ginlab/integrals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ginlab/numkit.hpp"
#include "ginlab/parallel.hpp"
#include "ginlab/rng.hpp"
#include "ginlab/specialfn.hpp"

namespace ginlab::integrals {

namespace {
constexpr std::uint64_t kPurposeI2 = 0x6932206d6f6e7465ull;
constexpr std::uint64_t kPurposeLhs = 0x70313361206c6873ull;
constexpr std::uint64_t kPurposeRhs = 0x7031336120726873ull;
}  // namespace

void MatrixIntegralSpec::validate() const {
    if (n < 1 || n > 3) throw std::invalid_argument("I2: n must be in 1..3");
    if (t < 0 || t > 3) throw std::invalid_argument("I2: t must be in 0..3");
    if (static_cast<int>(zhat.size()) != n)
        throw std::invalid_argument("I2: need exactly n points");
    if (budget < 1) throw std::invalid_argument("I2: empty budget");
}

I2Estimate eval_i2_mc(const MatrixIntegralSpec& spec) {
    spec.validate();
    const int n = spec.n;
    double min_re = 0.0;
    for (cdouble z : spec.zhat) min_re = std::min(min_re, z.real());
    // Widen the proposal when the linear terms push mass outward.
    const double s2 = 1.0 + std::max(0.0, -2.0 * min_re);
    const double log_norm = double(n) * n * std::log(kPi * s2);

    const long m = spec.budget;
    std::vector<double> w_re(m), w_abs(m);
    parallel::parallel_for(m, [&](long i) {
        rng::Stream stream(spec.seed, i, kPurposeI2);
        ComplexMatrix y(n, n);
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) y(r, c) = stream.complex_normal(s2);
        ComplexMatrix a = y.adjoint() * y;   // Y*Y
        ComplexMatrix b = y * y.adjoint();   // YY*
        const double det_a = std::max(0.0, a.determinant().real());
        cdouble lin(0.0, 0.0);
        for (int k = 0; k < n; ++k)
            lin += spec.zhat[k] * a(k, k) + std::conj(spec.zhat[k]) * b(k, k);
        const double quart = 0.5 * a.squaredNorm();  // 1/2 Tr (YY*)^2
        cdouble log_w = -quart - lin + b.trace() / s2 + log_norm;
        if (spec.t > 0) {
            if (det_a <= 0.0) {
                w_re[i] = 0.0;
                w_abs[i] = 0.0;
                return;
            }
            log_w += double(spec.t) * std::log(det_a);
        }
        cdouble w = std::exp(log_w);
        w_re[i] = w.real();
        w_abs[i] = std::abs(w);
    });

    I2Estimate est;
    est.samples = m;
    const double mean = std::accumulate(w_re.begin(), w_re.end(), 0.0) / m;
    double var = 0.0;
    for (double w : w_re) var += (w - mean) * (w - mean);
    est.value = mean;
    est.std_error = std::sqrt(var / (double(m) * (m - 1)));
    double sa = 0.0, sa2 = 0.0;
    for (double w : w_abs) {
        sa += w;
        sa2 += w * w;
    }
    est.effective_samples = sa2 > 0.0 ? sa * sa / sa2 : 0.0;
    if (est.effective_samples < double(m) / 100.0) {
        est.low_ess_warning = true;
        est.suggested_width = std::sqrt(s2) * 1.5;
    }
    return est;
}

double eval_i2_closed(const MatrixIntegralSpec& spec) {
    spec.validate();
    const int n = spec.n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(spec.zhat[i] - spec.zhat[j]) < 1e-8)
                throw std::invalid_argument(
                    "eval_i2_closed: coincident points, denominator vanishes");
    double log_pref = 0.5 * n * std::log(2.0 * kPi) +
                      double(n) * n * std::log(kPi);
    for (cdouble z : spec.zhat) {
        const double re2 = 2.0 * z.real();
        log_pref += 0.5 * re2 * re2;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            log_pref -= 2.0 * std::log(std::abs(spec.zhat[i] - spec.zhat[j]));

    const double gamma_t = std::tgamma(spec.t + 1.0);
    ComplexMatrix k(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cdouble zi = spec.zhat[i], zj = spec.zhat[j];
            const cdouble gauss =
                std::exp(-0.5 * (std::norm(zi) + std::norm(zj)) +
                         zi * std::conj(zj));
            k(i, j) = gamma_t * gauss * specialfn::ie(spec.t, zi + std::conj(zj));
        }
    return (k.determinant() * std::exp(log_pref)).real();
}

namespace {

// 1-based shifted Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre_01(int order, std::vector<double>& nodes,
                       std::vector<double>& weights) {
    nodes.resize(order);
    weights.resize(order);
    for (int i = 0; i < order; ++i) {
        // Newton from the Chebyshev-like initial guess.
        double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= order; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = order * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = 0.5 * (1.0 - x);  // descending x -> ascending node
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

struct ReplicaPointData {
    double abs_det2 = 0.0;  // |det(c z' - G)|^2
    cdouble alpha;          // (c z' - G)^{-1}_{11}
};

}  // namespace

Prop13Report verify_prop13_scalar(int big_n, cdouble a, cdouble z,
                                  long samples, std::uint64_t seed) {
    if (big_n < 6 || big_n > 12)
        throw std::invalid_argument("prop13: N must be between 6 and 12");
    if (std::abs(a) > 2.0)
        throw std::invalid_argument("prop13: |a| must be at most 2");
    if (samples < 100) throw std::invalid_argument("prop13: budget too small");

    const int nm1 = big_n - 1;
    const double c = std::sqrt(double(big_n) / nm1);
    // log C_N at n = r = 1: pi^2 N^{-1} (N-1)^{-(N-1)} (N-2)!
    const double log_cn = 2.0 * std::log(kPi) - std::log(double(big_n)) -
                          double(nm1) * std::log(double(nm1)) +
                          std::lgamma(double(big_n) - 1.0);

    const double rho = 0.25;  // comparison disk radius around z

    // Both routes are averaged over the disk |z' - z| <= rho. The RHS uses
    // the degree-3 rule: mean over the four axis points at distance
    // rho / sqrt(2), exact for quadratic densities.
    const double d = rho / std::sqrt(2.0);
    const std::array<cdouble, 4> zpts = {z + d, z - d, z + cdouble(0.0, d),
                                         z - cdouble(0.0, d)};

    // ---- RHS: radial quadrature with a shared-noise inner expectation ----
    // det(c z' - G - atilde e1 e1^T) = det(c z' - G) (1 - atilde alpha), so
    // one LU per (replica, point) serves every radial node.
    std::vector<std::array<ReplicaPointData, 4>> cache(samples);
    parallel::parallel_for(samples, [&](long i) {
        rng::Stream stream(seed, i, kPurposeRhs);
        ComplexMatrix g(nm1, nm1);
        for (int col = 0; col < nm1; ++col)
            for (int row = 0; row < nm1; ++row)
                g(row, col) = stream.complex_normal(1.0 / nm1);
        for (int p = 0; p < 4; ++p) {
            ComplexMatrix m0 = -g;
            m0.diagonal().array() += c * zpts[p];
            Eigen::PartialPivLU<ComplexMatrix> lu(m0);
            cdouble det = lu.determinant();
            ComplexVector e1 = ComplexVector::Zero(nm1);
            e1(0) = 1.0;
            cdouble alpha = lu.solve(e1)(0);
            cache[i][p] = {std::norm(det), alpha};
        }
    });

    auto rhs_with_nodes = [&](int order, double& out_se, double& out_min_node) {
        std::vector<double> s_nodes, s_weights;
        gauss_legendre_01(order, s_nodes, s_weights);
        // Per-node inner means, for the nonnegativity record.
        std::vector<double> node_mean(order, 0.0);
        std::vector<double> per_replica(samples, 0.0);
        parallel::parallel_for(samples, [&](long i) {
            double acc = 0.0;
            for (int p = 0; p < 4; ++p) {
                const cdouble zp = zpts[p];
                const double pref =
                    std::exp(-double(big_n) * std::norm(zp) - log_cn) * kPi;
                double radial = 0.0;
                for (int k = 0; k < order; ++k) {
                    const double s = s_nodes[k];
                    const double h = 2.0 * s * (zp * std::conj(a)).real() -
                                     s * std::norm(a);
                    const cdouble atilde = c * (1.0 - s) * a;
                    const cdouble factor = 1.0 - atilde * cache[i][p].alpha;
                    const double inner =
                        cache[i][p].abs_det2 * std::norm(factor);
                    radial += s_weights[k] *
                              std::pow(1.0 - s, double(big_n) - 2.0) *
                              std::exp(double(big_n) * h) * inner;
                }
                acc += 0.25 * pref * radial;
            }
            per_replica[i] = acc;
        });
        double mean = std::accumulate(per_replica.begin(), per_replica.end(),
                                      0.0) / samples;
        double var = 0.0;
        for (double v : per_replica) var += (v - mean) * (v - mean);
        out_se = std::sqrt(var / (double(samples) * (samples - 1)));
        // node means at the centre point set (first point suffices as a
        // nonnegativity witness; the integrand shares sign across points)
        for (int k = 0; k < order; ++k) {
            double m = 0.0;
            const double s = s_nodes[k];
            const cdouble atilde = c * (1.0 - s) * a;
            for (long i = 0; i < samples; ++i) {
                const cdouble factor = 1.0 - atilde * cache[i][0].alpha;
                m += cache[i][0].abs_det2 * std::norm(factor);
            }
            node_mean[k] = m / samples;
        }
        out_min_node = *std::min_element(node_mean.begin(), node_mean.end());
        return mean;
    };

    Prop13Report rep;
    rep.window_radius = rho;
    int order = 32;
    double se32 = 0.0, min32 = 0.0;
    double val = rhs_with_nodes(order, se32, min32);
    std::ostringstream trace;
    trace << order << ":" << val;
    for (int round = 0; round < 3; ++round) {
        double se2 = 0.0, min2 = 0.0;
        double val2 = rhs_with_nodes(2 * order, se2, min2);
        trace << " " << 2 * order << ":" << val2;
        const double tol = std::max(1e-3 * std::abs(val2), 0.3 * se2);
        const bool converged = std::abs(val2 - val) <= tol;
        order *= 2;
        val = val2;
        se32 = se2;
        min32 = min2;
        if (converged) break;
        if (round == 2)
            throw std::runtime_error(
                "prop13: radial quadrature did not converge; trace " +
                trace.str());
    }
    rep.rhs = val;
    rep.rhs_se = se32;
    rep.min_node_mean = min32;
    rep.nodes_used = order;

    // ---- LHS: eigenvalue counts of GinUE_N(diag(a, 0)) in the disk ----
    std::vector<double> counts(samples, 0.0);
    parallel::parallel_for(samples, [&](long i) {
        rng::Stream stream(seed, i, kPurposeLhs);
        ComplexMatrix x(big_n, big_n);
        for (int col = 0; col < big_n; ++col)
            for (int row = 0; row < big_n; ++row)
                x(row, col) = stream.complex_normal(1.0 / big_n);
        x(0, 0) += a;
        ComplexVector ev = numkit::eigenvalues(x);
        int hits = 0;
        for (Eigen::Index k = 0; k < ev.size(); ++k)
            if (std::abs(ev(k) - z) <= rho) ++hits;
        counts[i] = hits;
    });
    const double area = kPi * rho * rho;
    double cmean = std::accumulate(counts.begin(), counts.end(), 0.0) / samples;
    double cvar = 0.0;
    for (double v : counts) cvar += (v - cmean) * (v - cmean);
    rep.lhs = cmean / area;
    rep.lhs_se = std::sqrt(cvar / (double(samples) * (samples - 1))) / area;

    const double s = std::hypot(rep.lhs_se, rep.rhs_se);
    rep.z_score = s > 0.0 ? std::abs(rep.lhs - rep.rhs) / s
                          : (rep.lhs == rep.rhs ? 0.0 : 1e300);
    rep.pass = rep.z_score <= 3.0;
    return rep;
}

}  // namespace ginlab::integrals

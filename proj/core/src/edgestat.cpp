#include "ginlab/edgestat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <lapacke.h>

#include "ginlab/numkit.hpp"
#include "ginlab/parallel.hpp"
#include "ginlab/rng.hpp"
#include "ginlab/sampler.hpp"

namespace ginlab::edgestat {

namespace {

constexpr std::uint64_t kArnoldiSeed = 0x41524e4f4c444956ull;
constexpr std::uint64_t kPurposeInvA = 0x696e76612d612d30ull;
constexpr std::uint64_t kPurposeInvB = 0x696e76612d622d31ull;
constexpr std::uint64_t kPurposeScaling = 0x7363616c696e6730ull;

// LAPACK-factored LU with Eigen triangular solves; noticeably faster than
// Eigen's own pivoted factorization at the sizes used here.
struct LapackLU {
    ComplexMatrix f;
    std::vector<lapack_int> ipiv;

    explicit LapackLU(ComplexMatrix a) : f(std::move(a)), ipiv(f.rows()) {
        const lapack_int n = static_cast<lapack_int>(f.rows());
        const lapack_int info = LAPACKE_zgetrf(
            LAPACK_COL_MAJOR, n, n,
            reinterpret_cast<lapack_complex_double*>(f.data()), n,
            ipiv.data());
        if (info < 0) throw std::runtime_error("zgetrf: bad argument");
        // info > 0 (exactly singular shift) is harmless for shift-invert on
        // continuous random input; solves would produce non-finite vectors
        // and the caller falls back to the dense path.
    }

    ComplexVector solve(ComplexVector rhs) const {
        for (Eigen::Index i = 0; i < f.rows(); ++i) {
            const Eigen::Index j = ipiv[i] - 1;
            if (j != i) std::swap(rhs(i), rhs(j));
        }
        f.triangularView<Eigen::UnitLower>().solveInPlace(rhs);
        f.triangularView<Eigen::Upper>().solveInPlace(rhs);
        return rhs;
    }
};

ComplexVector filter_window(const ComplexVector& ev, cdouble shift,
                            double radius) {
    std::vector<cdouble> kept;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i) - shift) <= radius) kept.push_back(ev(i));
    ComplexVector out(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) out(i) = kept[i];
    return out;
}

}  // namespace

ComplexVector windowed_spectrum(const ComplexMatrix& x, cdouble shift,
                                double radius, int max_krylov) {
    if (radius <= 0.0)
        throw std::invalid_argument("windowed_spectrum: radius must be > 0");
    const Eigen::Index n = x.rows();
    if (n != x.cols()) throw std::invalid_argument("windowed_spectrum: square");
    if (n <= 300) return filter_window(numkit::eigenvalues(x), shift, radius);

    ComplexMatrix b = x;
    b.diagonal().array() -= shift;
    const LapackLU lu(std::move(b));

    const double guard = 1.25;
    const int expected = static_cast<int>(double(n) * radius * radius) + 1;
    long k = max_krylov > 0 ? max_krylov
                            : std::min<long>(n / 2, 4L * expected + 96);
    for (int attempt = 0; attempt < 3; ++attempt, k = k * 3 / 2) {
        k = std::min<long>(k, n - 1);
        ComplexMatrix v(n, k + 1);
        ComplexMatrix h = ComplexMatrix::Zero(k + 1, k);
        rng::Stream stream(kArnoldiSeed);
        ComplexVector v0(n);
        for (Eigen::Index i = 0; i < n; ++i) v0(i) = stream.complex_normal();
        v.col(0) = v0 / v0.norm();

        long m = k;
        bool breakdown = false;
        for (long j = 0; j < k; ++j) {
            ComplexVector w = lu.solve(v.col(j));
            for (long i = 0; i <= j; ++i) {  // MGS with one re-orth pass
                cdouble c = v.col(i).dot(w);
                h(i, j) = c;
                w -= c * v.col(i);
            }
            for (long i = 0; i <= j; ++i) {
                cdouble c = v.col(i).dot(w);
                h(i, j) += c;
                w -= c * v.col(i);
            }
            const double nrm = w.norm();
            h(j + 1, j) = nrm;
            if (nrm < 1e-14) {  // invariant subspace: exact truncation
                m = j + 1;
                breakdown = true;
                break;
            }
            v.col(j + 1) = w / nrm;
        }

        Eigen::ComplexEigenSolver<ComplexMatrix> es(h.topLeftCorner(m, m),
                                                    true);
        if (es.info() != Eigen::Success) break;
        const double hlast = breakdown ? 0.0 : std::abs(h(m, m - 1));

        bool certified = true;
        std::vector<cdouble> out;
        for (long i = 0; i < m; ++i) {
            const cdouble mu = es.eigenvalues()(i);
            const double amu = std::abs(mu);
            if (amu * guard * radius < 1.0) continue;  // outside guard annulus
            const double resid = hlast * std::abs(es.eigenvectors()(m - 1, i));
            if (resid > 1e-8 * amu) {
                certified = false;
                break;
            }
            const cdouble lambda = shift + 1.0 / mu;
            if (std::abs(lambda - shift) <= radius) out.push_back(lambda);
        }
        if (certified) {
            ComplexVector result(out.size());
            for (std::size_t i = 0; i < out.size(); ++i) result(i) = out[i];
            return result;
        }
        if (k >= n - 1) break;
    }
    return filter_window(numkit::eigenvalues(x), shift, radius);
}

cdouble EdgeReport::bin_center(int ix, int iy) const {
    const double side = 2.0 * window / cells;
    return {-window + (ix + 0.5) * side, -window + (iy + 0.5) * side};
}

bool EdgeReport::bin_in_disk(int ix, int iy) const {
    const double side = 2.0 * window / cells;
    const double x0 = -window + ix * side, y0 = -window + iy * side;
    // the farthest corner decides
    const double mx = std::max(std::abs(x0), std::abs(x0 + side));
    const double my = std::max(std::abs(y0), std::abs(y0 + side));
    return std::hypot(mx, my) <= window;
}

namespace {

EdgeReport collect_impl(const model::EnsembleConfig& config,
                        const kernels::EdgeFrame& frame, double window,
                        double bin_side, long replicas, bool with_prediction) {
    frame.validate();
    config.validate();
    if (config.dyson_index != frame.dyson_index)
        throw std::invalid_argument("edge collection: frame/ensemble mismatch");
    if (window <= 0.0 || window > 6.0)
        throw std::invalid_argument("edge collection: window must be in (0, 6]");
    if (replicas < 1) throw std::invalid_argument("edge collection: replicas");

    EdgeReport rep;
    rep.frame = frame;
    rep.window = window;
    rep.cells = std::max(1, static_cast<int>(std::lround(2.0 * window / bin_side)));
    rep.bin_side = 2.0 * window / rep.cells;
    rep.replicas = replicas;
    const int cells = rep.cells;
    rep.counts.assign(std::size_t(cells) * cells, 0.0);

    const double scale =
        kernels::EdgeFrame::scale_factor(frame.dyson_index, config.dim);
    const double lambda_radius = window / scale;

    std::vector<std::vector<cdouble>> per_replica(replicas);
    parallel::parallel_for(replicas, [&](long r) {
        ComplexMatrix x = sampler::sample_deformed(config, r);
        ComplexVector ev = windowed_spectrum(x, frame.z0, lambda_radius);
        std::vector<cdouble> zh;
        zh.reserve(ev.size());
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            zh.push_back(scale * (ev(i) - frame.z0) / frame.z0);
        per_replica[r] = std::move(zh);
    });

    for (const auto& zh : per_replica)
        for (cdouble z : zh) {
            if (std::abs(z) > window) continue;
            int ix = static_cast<int>((z.real() + window) / rep.bin_side);
            int iy = static_cast<int>((z.imag() + window) / rep.bin_side);
            ix = std::clamp(ix, 0, cells - 1);
            iy = std::clamp(iy, 0, cells - 1);
            rep.counts[std::size_t(iy) * cells + ix] += 1.0;
            ++rep.total_eigenvalues;
        }

    const double area = rep.bin_side * rep.bin_side;
    const double norm = double(replicas) * area;
    rep.empirical.resize(rep.counts.size());
    rep.bin_se.resize(rep.counts.size());
    rep.predicted.assign(rep.counts.size(), 0.0);
    for (std::size_t i = 0; i < rep.counts.size(); ++i) {
        rep.empirical[i] = rep.counts[i] / norm;
        rep.bin_se[i] = std::sqrt(std::max(rep.counts[i], 1.0)) / norm;
    }
    if (with_prediction) {
        std::vector<double> pred(rep.counts.size(), 0.0);
        parallel::parallel_for(static_cast<long>(rep.counts.size()), [&](long i) {
            const int ix = int(i) % cells, iy = int(i) / cells;
            if (!rep.bin_in_disk(ix, iy)) return;
            // bins live in rotated coordinates z0^{-1} zhat; the kernel
            // predictors expect the unrotated zhat of the theorems
            const cdouble c = frame.z0 * rep.bin_center(ix, iy);
            if (frame.dyson_index == 2) {
                pred[i] = kernels::predict_correlation_ue(frame, {c});
            } else {
                // The quaternion correlation functions count one member per
                // conjugate pair (representatives with Im z >= 0, folded
                // symmetrically); the window collects both members, so the
                // real-edge prediction doubles. At a complex edge only the
                // representative lands in the window and no factor applies.
                const bool real_edge = frame.z0.imag() == 0.0;
                pred[i] = (real_edge ? 2.0 : 1.0) *
                          kernels::predict_correlation_se(frame, {c});
            }
        });
        rep.predicted = std::move(pred);

        std::vector<double> obs, exp;
        for (int iy = 0; iy < cells; ++iy)
            for (int ix = 0; ix < cells; ++ix) {
                if (!rep.bin_in_disk(ix, iy)) continue;
                const std::size_t i = std::size_t(iy) * cells + ix;
                const double e = rep.predicted[i] * norm;
                obs.push_back(rep.counts[i]);
                exp.push_back(std::max(e, 0.0));
                if (e >= 5.0) {
                    const double z = std::abs(rep.counts[i] - e) / std::sqrt(e);
                    rep.max_abs_z = std::max(rep.max_abs_z, z);
                } else {
                    rep.merged_bins_warning = true;
                }
            }
        rep.chi = stats::chi_square_gof(obs, exp);
    }
    return rep;
}

}  // namespace

EdgeReport collect_edge(const model::EnsembleConfig& config,
                        const kernels::EdgeFrame& frame, double window,
                        double bin_side, long replicas) {
    if (frame.dyson_index != 2)
        throw std::invalid_argument("collect_edge: beta = 2 frames only");
    return collect_impl(config, frame, window, bin_side, replicas, true);
}

EdgeReport collect_edge_se(const model::EnsembleConfig& config,
                           const kernels::EdgeFrame& frame, double window,
                           double bin_side, long replicas) {
    if (frame.dyson_index != 4)
        throw std::invalid_argument("collect_edge_se: beta = 4 frames only");
    return collect_impl(config, frame, window, bin_side, replicas, true);
}

InvarianceReport invariance_test(const model::JordanSpec& spec_a,
                                 const model::JordanSpec& spec_b,
                                 const kernels::EdgeFrame& frame, int dim,
                                 double window, double bin_side,
                                 long replicas, std::uint64_t seed) {
    InvarianceReport rep;
    rep.replicas = replicas;
    rep.t_a = model::describe_criticality(spec_a, frame.z0).geometric_multiplicity;
    rep.t_b = model::describe_criticality(spec_b, frame.z0).geometric_multiplicity;

    auto histogram = [&](const model::JordanSpec& spec, std::uint64_t purpose) {
        model::EnsembleConfig c;
        c.dyson_index = frame.dyson_index;
        c.dim = dim;
        c.deformation = spec;
        c.seed = rng::derive(seed, 0, purpose);
        EdgeReport r = collect_impl(c, frame, window, bin_side, replicas, false);
        // The one-point profile depends on Re zhat only, so the marginal
        // over columns carries all the discriminating power.
        std::vector<double> flat(r.cells, 0.0);
        for (int iy = 0; iy < r.cells; ++iy)
            for (int ix = 0; ix < r.cells; ++ix)
                flat[ix] += r.counts[std::size_t(iy) * r.cells + ix];
        return flat;
    };

    const std::vector<double> ha = histogram(spec_a, kPurposeInvA);
    const std::vector<double> hb = histogram(spec_b, kPurposeInvB);
    rep.chi = stats::chi_square_two_sample(ha, hb);
    rep.pass = rep.t_a == rep.t_b ? rep.chi.p_value > 0.01
                                  : rep.chi.p_value < 0.001;
    return rep;
}

ScalingFit outlier_scaling(cdouble theta, int p, const std::vector<int>& dims,
                           long replicas, std::uint64_t seed) {
    if (p < 1 || p > 3)
        throw std::invalid_argument("outlier_scaling: p must be in 1..3");
    if (std::abs(theta) < 1.3)
        throw std::invalid_argument("outlier_scaling: need |theta| >= 1.3");
    if (dims.size() < 4 || !std::is_sorted(dims.begin(), dims.end()) ||
        dims.back() < 16 * dims.front())
        throw std::invalid_argument(
            "outlier_scaling: need >= 4 increasing dims spanning a factor 16");

    model::JordanSpec js;
    js.eigenvalues.push_back({theta, {{p, 1}}});

    ScalingFit fit;
    fit.dims = dims;
    const double bulk_gap = std::abs(theta) - 1.0;
    for (int n : dims) {
        model::EnsembleConfig c;
        c.dyson_index = 2;
        c.dim = n;
        c.deformation = js;
        c.seed = rng::derive(seed, std::uint64_t(n), kPurposeScaling);
        // Wide enough for the N^{-1/(2p)} root scatter with high
        // probability, narrow enough that the guard annulus of the
        // shift-invert solver stays clear of the bulk (gap = |theta| - 1).
        // The rare replica whose outliers escape falls back to the full
        // spectrum below.
        const double radius =
            std::min(0.7 * bulk_gap,
                     std::clamp(3.5 * std::pow(double(n), -0.5 / p), 0.2, 0.35));

        std::vector<double> spread(replicas, 0.0);
        std::vector<int> ambiguous(replicas, 0);
        parallel::parallel_for(replicas, [&](long r) {
            ComplexMatrix x = sampler::sample_deformed(c, r);
            ComplexVector ev = windowed_spectrum(x, theta, radius, 80);
            if (ev.size() < p) ev = numkit::eigenvalues(x);
            std::vector<double> dist(ev.size());
            for (Eigen::Index i = 0; i < ev.size(); ++i)
                dist[i] = std::abs(ev(i) - theta);
            std::sort(dist.begin(), dist.end());
            spread[r] = dist[p - 1];
            if (static_cast<int>(dist.size()) > p &&
                dist[p] < 2.0 * dist[p - 1])
                ambiguous[r] = 1;
        });
        const double mean =
            std::accumulate(spread.begin(), spread.end(), 0.0) / replicas;
        double var = 0.0;
        for (double s : spread) var += (s - mean) * (s - mean);
        fit.mean_spread.push_back(mean);
        fit.mean_spread_se.push_back(
            std::sqrt(var / (double(replicas) * (replicas - 1))));
        const long amb = std::accumulate(ambiguous.begin(), ambiguous.end(), 0L);
        if (amb > replicas / 20) fit.ambiguity_warning = true;
    }

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        lx.push_back(std::log(double(dims[i])));
        ly.push_back(std::log(fit.mean_spread[i]));
    }
    const auto s = stats::fit_slope(lx, ly);
    fit.slope = s.slope;
    fit.slope_se = s.slope_se;
    return fit;
}

CriticalFit critical_scaling(cdouble z0, int p, cdouble theta_hat,
                             const std::vector<int>& dims, long replicas,
                             std::uint64_t seed, double window) {
    if (p < 1 || p > 3)
        throw std::invalid_argument("critical_scaling: p must be in 1..3");
    if (dims.size() < 3)
        throw std::invalid_argument("critical_scaling: need >= 3 dims");

    CriticalFit fit;
    fit.dims = dims;
    for (int n : dims) {
        const cdouble theta =
            z0 + std::pow(double(n), -0.25 / p) * theta_hat;
        model::JordanSpec js;
        js.eigenvalues.push_back({theta, {{p, 1}}});
        model::EnsembleConfig c;
        c.dyson_index = 2;
        c.dim = n;
        c.deformation = js;
        c.seed = rng::derive(seed, std::uint64_t(n) + 1, kPurposeScaling);

        const double scale = kernels::EdgeFrame::scale_factor(2, n);
        std::vector<double> sums(replicas, 0.0);
        std::vector<double> hits(replicas, 0.0);
        parallel::parallel_for(replicas, [&](long r) {
            ComplexMatrix x = sampler::sample_deformed(c, r);
            ComplexVector ev = windowed_spectrum(x, z0, window / scale);
            double s = 0.0;
            for (Eigen::Index i = 0; i < ev.size(); ++i)
                s += (scale * (ev(i) - z0) / z0).real();
            sums[r] = s;
            hits[r] = double(ev.size());
        });
        const double total_hits =
            std::accumulate(hits.begin(), hits.end(), 0.0);
        const double total_sum =
            std::accumulate(sums.begin(), sums.end(), 0.0);
        if (total_hits <= 0.0)
            throw std::runtime_error("critical_scaling: empty edge window");
        const double mean = total_sum / total_hits;
        // ratio-estimator standard error over replicas
        double var = 0.0;
        for (long r = 0; r < replicas; ++r) {
            const double d = sums[r] - mean * hits[r];
            var += d * d;
        }
        const double mean_hits = total_hits / replicas;
        fit.mean_re.push_back(mean);
        fit.mean_re_se.push_back(
            std::sqrt(var / (double(replicas) * (replicas - 1))) / mean_hits);
    }

    std::vector<double> lx;
    for (int n : dims) lx.push_back(std::log(double(n)));
    const auto s = stats::fit_slope(lx, fit.mean_re);
    fit.slope = s.slope;
    fit.slope_se = s.slope_se;
    fit.n_stable = std::abs(fit.slope) <= 3.0 * fit.slope_se;
    return fit;
}

}  // namespace ginlab::edgestat

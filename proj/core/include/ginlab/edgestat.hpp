#pragma once

#include <cstdint>
#include <vector>

#include "ginlab/kernels.hpp"
#include "ginlab/model.hpp"
#include "ginlab/stats.hpp"
#include "ginlab/types.hpp"

namespace ginlab::edgestat {

// Eigenvalues of x within |lambda - shift| <= radius. Uses shift-invert
// Arnoldi on an LU factorization of (x - shift); every Ritz value inside a
// guard annulus must converge or the Krylov space is enlarged and, as a
// last resort, the full zgeev spectrum is used. Deterministic.
ComplexVector windowed_spectrum(const ComplexMatrix& x, cdouble shift,
                                double radius, int max_krylov = 0);

// Square grid of side-length bin_side cells tiling [-window, window]^2 in
// the scaled zhat coordinates.
struct EdgeReport {
    kernels::EdgeFrame frame;
    double window = 5.0;
    double bin_side = 0.25;
    int cells = 0;  // per side
    std::vector<double> counts;     // row-major, iy * cells + ix
    std::vector<double> empirical;  // count / (M * bin area)
    std::vector<double> predicted;  // kernel prediction at bin centre
    std::vector<double> bin_se;     // sqrt(count) / (M * bin area)
    stats::ChiSquareResult chi;     // over bins inside the disk, pooled
    double max_abs_z = 0.0;
    long replicas = 0;
    long total_eigenvalues = 0;
    bool merged_bins_warning = false;

    cdouble bin_center(int ix, int iy) const;
    bool bin_in_disk(int ix, int iy) const;  // fully inside |zhat| <= window
};

// One-point edge profile for beta = 2: each eigenvalue with
// |scale (lambda - z0)| <= window maps to zhat = scale z0^{-1}(lambda - z0);
// empirical density is compared against the K_t diagonal.
EdgeReport collect_edge(const model::EnsembleConfig& config,
                        const kernels::EdgeFrame& frame, double window,
                        double bin_side, long replicas);

// Same for beta = 4 (scale sqrt(2N), prediction from the Pfaffian or
// determinantal quaternion kernel). Both members of a conjugate pair that
// land in the window are counted.
EdgeReport collect_edge_se(const model::EnsembleConfig& config,
                           const kernels::EdgeFrame& frame, double window,
                           double bin_side, long replicas);

struct InvarianceReport {
    stats::ChiSquareResult chi;
    int t_a = 0;
    int t_b = 0;
    long replicas = 0;
    // p > 0.01 when t_a == t_b, p < 0.001 when they differ
    bool pass = false;
};

// Two-sample chi-square between the empirical edge profiles of two
// deformations sharing the same frame.
InvarianceReport invariance_test(const model::JordanSpec& spec_a,
                                 const model::JordanSpec& spec_b,
                                 const kernels::EdgeFrame& frame, int dim,
                                 double window, double bin_side,
                                 long replicas, std::uint64_t seed);

struct ScalingFit {
    std::vector<int> dims;
    std::vector<double> mean_spread;
    std::vector<double> mean_spread_se;
    double slope = 0.0;
    double slope_se = 0.0;
    bool ambiguity_warning = false;  // > 5% of replicas with unclear outliers
};

// Outlier fluctuation scaling for a single Jordan block R_p(theta),
// |theta| > 1: per replica the spread of the p eigenvalues nearest theta;
// least-squares slope of log(mean spread) against log N. Expected -1/(2p).
ScalingFit outlier_scaling(cdouble theta, int p, const std::vector<int>& dims,
                           long replicas, std::uint64_t seed);

struct CriticalFit {
    std::vector<int> dims;
    std::vector<double> mean_re;     // mean Re zhat over the edge window
    std::vector<double> mean_re_se;
    double slope = 0.0;   // of mean_re against log N
    double slope_se = 0.0;
    bool n_stable = false;  // |slope| <= 3 slope_se
};

// Critical-window drift: theta = z0 + N^{-1/(4p)} theta_hat. The windowed
// mean of Re zhat must carry no residual N-trend.
CriticalFit critical_scaling(cdouble z0, int p, cdouble theta_hat,
                             const std::vector<int>& dims, long replicas,
                             std::uint64_t seed, double window = 5.0);

}  // namespace ginlab::edgestat

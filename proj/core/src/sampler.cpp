#include "ginlab/sampler.hpp"

#include <algorithm>
#include <numeric>

#include "ginlab/numkit.hpp"
#include "ginlab/rng.hpp"

namespace ginlab::sampler {

namespace {

constexpr std::uint64_t kPurposeDeformed = 0x64656f726d6564ull;  // "deformed"
constexpr std::uint64_t kPurposeDual = 0x6475616cull;            // "dual"

// Centered sample with Sigma = Gamma = identity; mean added by the caller.
ComplexMatrix centered_noise(int beta, int n, double tau, rng::Stream& s) {
    if (beta == 1) {
        ComplexMatrix x(n, n);
        const double sd = std::sqrt(tau / (2.0 * n));
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) x(i, j) = sd * s.normal();
        return x;
    }
    if (beta == 2) {
        ComplexMatrix x(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) x(i, j) = s.complex_normal(tau / n);
        return x;
    }
    // beta = 4: two complex blocks in the 2N x 2N representation
    ComplexMatrix w1(n, n), w2(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) w1(i, j) = s.complex_normal(tau / n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) w2(i, j) = s.complex_normal(tau / n);
    ComplexMatrix x(2 * n, 2 * n);
    x.topLeftCorner(n, n) = w1;
    x.topRightCorner(n, n) = w2;
    x.bottomLeftCorner(n, n) = -w2.conjugate();
    x.bottomRightCorner(n, n) = w1.conjugate();
    return x;
}

// X0 = diag(A0, 0); for beta = 4 the r x r quaternion sub-blocks are padded
// inside each N x N block.
void add_mean(int beta, int n, const ComplexMatrix& a0, ComplexMatrix& x) {
    if (a0.size() == 0) return;
    if (beta != 4) {
        x.topLeftCorner(a0.rows(), a0.cols()) += a0;
        return;
    }
    const Eigen::Index r = a0.rows() / 2;
    x.block(0, 0, r, r) += a0.topLeftCorner(r, r);
    x.block(0, n, r, r) += a0.topRightCorner(r, r);
    x.block(n, 0, r, r) += a0.bottomLeftCorner(r, r);
    x.block(n, n, r, r) += a0.bottomRightCorner(r, r);
}

}  // namespace

ComplexMatrix sample_deformed(const model::EnsembleConfig& config,
                              std::uint64_t replica) {
    config.validate();
    rng::Stream s(config.seed, replica, kPurposeDeformed);
    ComplexMatrix x =
        centered_noise(config.dyson_index, config.dim, config.tau_or_default(), s);
    if (config.sigma || config.gamma) {
        if (config.sigma)
            x = numkit::hermitian_sqrt(*config.sigma) * x;
        if (config.gamma)
            x = x * numkit::hermitian_sqrt(*config.gamma);
    }
    add_mean(config.dyson_index, config.dim, config.deformation_matrix(), x);
    return x;
}

ComplexMatrix full_mean(const model::EnsembleConfig& config) {
    const int side = config.dyson_index == 4 ? 2 * config.dim : config.dim;
    ComplexMatrix x = ComplexMatrix::Zero(side, side);
    add_mean(config.dyson_index, config.dim, config.deformation_matrix(), x);
    return x;
}

DualKind dual_kind_for(int dyson_index) {
    switch (dyson_index) {
        case 1: return DualKind::Antisymmetric;
        case 2: return DualKind::Rectangular;
        case 4: return DualKind::Symmetric;
        default: throw std::invalid_argument("dual_kind_for: bad dyson index");
    }
}

void DualSpec::validate() const {
    if (k1 <= 0 || big_n <= 0 || tau <= 0.0)
        throw std::invalid_argument("DualSpec: sizes and tau must be positive");
    if (kind == DualKind::Rectangular && k2 <= 0)
        throw std::invalid_argument("DualSpec: K2 must be positive");
    if (mean.size() > 0 && (mean.rows() != rows() || mean.cols() != cols()))
        throw std::invalid_argument("DualSpec: Y0 shape mismatch");
    if (mean.size() > 0 && kind == DualKind::Symmetric &&
        (mean - mean.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("DualSpec: Y0 must be symmetric");
    if (mean.size() > 0 && kind == DualKind::Antisymmetric &&
        (mean + mean.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("DualSpec: Y0 must be antisymmetric");
}

ComplexMatrix sample_dual(const DualSpec& spec, std::uint64_t seed,
                          std::uint64_t replica) {
    spec.validate();
    rng::Stream s(seed, replica, kPurposeDual);
    const double base = spec.tau / spec.big_n;
    ComplexMatrix y;
    switch (spec.kind) {
        case DualKind::Rectangular: {
            y.resize(spec.k2, spec.k1);
            for (int j = 0; j < spec.k1; ++j)
                for (int i = 0; i < spec.k2; ++i) y(i, j) = s.complex_normal(base);
            break;
        }
        case DualKind::Symmetric: {
            // Tr_4 density: diagonal variance 2 tau/N, off-diagonal tau/N
            const int k = spec.k1;
            y = ComplexMatrix::Zero(k, k);
            for (int j = 0; j < k; ++j)
                for (int i = 0; i <= j; ++i) {
                    cdouble v = s.complex_normal(i == j ? 2.0 * base : base);
                    y(i, j) = v;
                    y(j, i) = v;
                }
            break;
        }
        case DualKind::Antisymmetric: {
            // Tr_1 density: off-diagonal variance tau/(2N), zero diagonal
            const int k = spec.k1;
            y = ComplexMatrix::Zero(k, k);
            for (int j = 0; j < k; ++j)
                for (int i = 0; i < j; ++i) {
                    cdouble v = s.complex_normal(0.5 * base);
                    y(i, j) = v;
                    y(j, i) = -v;
                }
            break;
        }
    }
    if (spec.mean.size() > 0) y += spec.mean;
    return y;
}

ComplexVector symmetrize_conjugate_pairs(const ComplexVector& values, double tol) {
    const Eigen::Index n = values.size();
    if (n % 2 != 0)
        throw PairingError("symmetrize: odd number of eigenvalues");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(values[a].imag()) > std::abs(values[b].imag());
    });
    std::vector<bool> used(n, false);
    ComplexVector out(n);
    Eigen::Index at = 0;
    for (int idx : order) {
        if (used[idx]) continue;
        used[idx] = true;
        const cdouble target = std::conj(values[idx]);
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (used[j]) continue;
            double d = std::abs(values[j] - target);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(j);
            }
        }
        if (best < 0 || best_d > tol)
            throw PairingError("symmetrize: no conjugate partner within tolerance");
        used[best] = true;
        cdouble up = values[idx].imag() >= 0.0 ? values[idx] : values[best];
        if (up.imag() < 0.0) up = std::conj(up);  // both below axis: degenerate real
        out[at++] = up;
        out[at++] = std::conj(up);
    }
    return out;
}

SpectrumSample spectrum(const model::EnsembleConfig& config,
                        std::uint64_t replica) {
    ComplexMatrix x = sample_deformed(config, replica);
    ComplexVector ev = numkit::eigenvalues(x);
    if (config.dyson_index == 4) {
        double scale = std::max(ev.cwiseAbs().maxCoeff(), 1.0);
        ev = symmetrize_conjugate_pairs(ev, 1e-6 * scale);
    }
    SpectrumSample out;
    out.eigenvalues = std::move(ev);
    out.config_fingerprint = config.fingerprint();
    out.replica = replica;
    out.stream_seed = rng::derive(config.seed, replica, 0x64656f726d6564ull);
    return out;
}

}  // namespace ginlab::sampler

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ginlab/model.hpp"
#include "ginlab/types.hpp"

namespace ginlab::sampler {

// One replica of the deformed ensemble: N x N for beta = 1, 2 and the
// 2N x 2N complex representation for beta = 4. Deterministic in
// (config.seed, replica).
ComplexMatrix sample_deformed(const model::EnsembleConfig& config,
                              std::uint64_t replica);

// X0 = diag(A0, 0) at full size N (2N x 2N block layout for beta = 4).
ComplexMatrix full_mean(const model::EnsembleConfig& config);

enum class DualKind { Symmetric, Rectangular, Antisymmetric };

struct DualSpec {
    DualKind kind = DualKind::Rectangular;
    int k1 = 1;       // rows for symmetric/antisymmetric (K), K1 otherwise
    int k2 = 1;       // K2, rectangular only
    double tau = 1.0;
    int big_n = 1;    // the N of the primal ensemble (enters the variance)
    ComplexMatrix mean;  // Y0; empty -> zero

    int rows() const { return kind == DualKind::Rectangular ? k2 : k1; }
    int cols() const { return k1; }
    void validate() const;
};

// Dual partner of beta: 1 -> Antisymmetric, 2 -> Rectangular, 4 -> Symmetric.
DualKind dual_kind_for(int dyson_index);

ComplexMatrix sample_dual(const DualSpec& spec, std::uint64_t seed,
                          std::uint64_t replica);

struct SpectrumSample {
    ComplexVector eigenvalues;
    std::uint64_t config_fingerprint = 0;
    std::uint64_t replica = 0;
    std::uint64_t stream_seed = 0;
};

struct PairingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Full spectrum of one replica; beta = 4 output is symmetrized into exact
// conjugate pairs (throws PairingError when greedy matching fails; callers
// discard and log such replicas).
SpectrumSample spectrum(const model::EnsembleConfig& config,
                        std::uint64_t replica);

// Symmetrize a conjugation-closed multiset: each pair becomes
// (lambda, conj lambda) with Im lambda >= 0. Tolerance relative to scale.
ComplexVector symmetrize_conjugate_pairs(const ComplexVector& values,
                                         double tol);

}  // namespace ginlab::sampler

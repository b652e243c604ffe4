#pragma once

#include <vector>

#include "ginlab/model.hpp"
#include "ginlab/sampler.hpp"
#include "ginlab/types.hpp"

namespace ginlab::duality {

struct MCEstimate {
    cdouble mean{0.0, 0.0};
    double se_re = 0.0;
    double se_im = 0.0;
    long count = 0;
    double standard_error() const { return std::hypot(se_re, se_im); }
};

MCEstimate reduce(const std::vector<LogScaled>& samples);

// One two-sided verification case. For beta = 2 the spectral parameter is
// diag(a1, a2) of orders K1 N and K2 N; for beta = 1, 4 a single block a1 of
// order K N (2 K N when beta = 4) with K = k1.
struct DualityCase {
    model::EnsembleConfig config;  // primal ensemble
    int k1 = 1;
    int k2 = 1;
    ComplexMatrix a1;
    ComplexMatrix a2;
    ComplexMatrix y0;  // dual mean; empty means zero
    long budget = 100000;

    int k() const { return config.dyson_index == 2 ? k1 + k2 : k1; }
    void validate() const;
    sampler::DualSpec dual_spec() const;
};

// Q_beta(A; X, Y) of the duality identity, in mantissa/log form.
LogScaled q_observable(const DualityCase& c, const ComplexMatrix& x,
                       const ComplexMatrix& y);

struct DualityReport {
    MCEstimate lhs;
    MCEstimate rhs;
    double z_score = 0.0;
    bool pass = false;
    bool retried = false;
};

// LHS averages Q(A; X, Y0) over the deformed ensemble, RHS averages
// Q(A; X0, Y) over the dual ensemble; z-score on real and imaginary parts,
// the larger is reported.
DualityReport verify_duality(const DualityCase& c);
DualityReport verify_duality_with_retry(const DualityCase& c);

struct CharpolyCase {
    model::EnsembleConfig config;
    std::vector<cdouble> z;  // K1 points
    std::vector<cdouble> w;  // K2 points
    long budget = 100000;
};

// Corollary check: LHS is the direct product of characteristic polynomials
// averaged over the deformed ensemble; RHS reuses Q with Y0 = 0 and
// A = diag(Z kron I, W* kron I).
DualityReport verify_charpoly(const CharpolyCase& c);
DualityReport verify_charpoly_with_retry(const CharpolyCase& c);

// Builds the A blocks of the corollary for the duality machinery.
DualityCase charpoly_to_duality(const CharpolyCase& c);

// Seeded random case used by the verification suites: diagonal spectral
// parameter, random mean, optionally random positive-definite Sigma, Gamma.
DualityCase make_random_case(int beta, int n, int k1, int k2,
                             bool random_covariances, double tau,
                             std::uint64_t seed, long budget);

}  // namespace ginlab::duality

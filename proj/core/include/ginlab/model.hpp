#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ginlab/types.hpp"

namespace ginlab::model {

struct JordanBlockEntry {
    int p = 1;            // block size
    int multiplicity = 1; // number of blocks of this size
};

struct JordanEigenvalue {
    cdouble theta;
    std::vector<JordanBlockEntry> blocks;  // sizes strictly increasing
};

struct JordanSpec {
    std::vector<JordanEigenvalue> eigenvalues;
    std::optional<ComplexMatrix> transform;  // P, defaults to identity

    int dimension() const;  // r = sum beta_ij * p_ij
    void validate() const;
};

// Condition number of P from its singular values.
double transform_condition(const ComplexMatrix& p);

// A0 = P J2 P^{-1} with J2 the block-diagonal assembly of Jordan blocks.
ComplexMatrix build_deformation(const JordanSpec& spec);

// The 2r x 2r quaternion embedding P diag(J2, conj J2) P^{-1}; requires
// Im theta_i >= 0 and a quaternion-structured P.
ComplexMatrix embed_quaternion(const JordanSpec& spec);

struct CriticalityDescriptor {
    cdouble z0;
    int critical_count = 0;          // m: eigenvalues equal to z0
    int geometric_multiplicity = 0;  // t: blocks carrying z0
    // (theta, predicted fluctuation exponent 1/(2 p_{i,1})) for |theta| > 1
    std::vector<std::pair<cdouble, double>> outlier_exponents;
};

CriticalityDescriptor describe_criticality(const JordanSpec& spec, cdouble z0);

struct EnsembleConfig {
    int dyson_index = 2;  // 1, 2 or 4
    int dim = 0;          // N
    JordanSpec deformation;                // empty -> A0 = 0
    std::optional<ComplexMatrix> mean;     // explicit A0, overrides deformation
    std::optional<ComplexMatrix> sigma;    // empty -> identity
    std::optional<ComplexMatrix> gamma;    // empty -> identity
    double tau = 0.0;  // <= 0 -> default 2/beta
    std::uint64_t seed = 0;

    double tau_or_default() const { return tau > 0.0 ? tau : 2.0 / dyson_index; }
    // r x r deformation block (2r x 2r quaternion block for beta = 4).
    ComplexMatrix deformation_matrix() const;
    void validate() const;
    std::uint64_t fingerprint() const;
};

// Quaternion structure X J = J conj(X) for an even-dimensional matrix.
bool is_quaternion_structured(const ComplexMatrix& x, double tol = 1e-12);

}  // namespace ginlab::model

#pragma once

#include <vector>

#include "ginlab/types.hpp"

namespace ginlab::numkit {

// Determinant via pivoted LU, kept in mantissa/log form.
LogScaled det_log(const ComplexMatrix& m);
cdouble det(const ComplexMatrix& m);

// value is a mantissa; the Pfaffian equals value * exp(log_scale).
struct PfaffianResult {
    cdouble value{0.0, 0.0};
    double log_scale{0.0};
    cdouble full() const { return value * std::exp(log_scale); }
};

// Skew-symmetric (transpose, not adjoint) elimination with partial pivoting.
// Throws std::invalid_argument when the input is not antisymmetric; odd
// dimension yields an exact zero.
PfaffianResult pfaffian(const ComplexMatrix& m);

// Self-test of Pf(B A B^t) = det(B) Pf(A); A antisymmetric 2m x 2m.
bool pfaffian_congruence_check(const ComplexMatrix& b, const ComplexMatrix& a,
                               double rel_tol = 1e-8);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Perfect shuffle: perm[j] with j = r*p + s maps to s*m + r, so that
// (B kron A)(j,k) = (A kron B)(perm[j], perm[k]) for A p x p, B m x m.
std::vector<int> tensor_swap_permutation(int p, int m);

struct EigensolveError : std::runtime_error {
    ComplexVector partial;
    EigensolveError(const std::string& what, ComplexVector p)
        : std::runtime_error(what), partial(std::move(p)) {}
};

// All eigenvalues of a general complex square matrix (LAPACK zgeev).
ComplexVector eigenvalues(const ComplexMatrix& m);

// Hermitian PSD square root by unitary diagonalization. Rejects indefinite
// input (min eigenvalue < -1e-10 * scale).
ComplexMatrix hermitian_sqrt(const ComplexMatrix& m);

}  // namespace ginlab::numkit

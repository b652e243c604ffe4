#include "ginlab/numkit.hpp"

#include <algorithm>
#include <sstream>

#include <lapacke.h>

namespace ginlab::numkit {

LogScaled det_log(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("det: matrix must be square");
    if (m.rows() == 0) return LogScaled{};
    Eigen::PartialPivLU<ComplexMatrix> lu(m);
    LogScaled out;
    out.mantissa = cdouble(static_cast<double>(lu.permutationP().determinant()), 0.0);
    const auto& u = lu.matrixLU();
    for (Eigen::Index i = 0; i < u.rows(); ++i) out.mul(u(i, i));
    return out;
}

cdouble det(const ComplexMatrix& m) { return det_log(m).value(); }

static void check_antisymmetric(const ComplexMatrix& m) {
    double scale = m.cwiseAbs().maxCoeff();
    double worst = 0.0;
    Eigen::Index wi = 0, wj = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i <= j; ++i) {
            double v = std::abs(m(i, j) + m(j, i));
            if (v > worst) {
                worst = v;
                wi = i;
                wj = j;
            }
        }
    if (worst > 1e-10 * std::max(scale, 1e-300)) {
        std::ostringstream os;
        os << "pfaffian: input not antisymmetric, |M(" << wi << "," << wj
           << ") + M(" << wj << "," << wi << ")| = " << worst
           << " against scale " << scale;
        throw std::invalid_argument(os.str());
    }
}

PfaffianResult pfaffian(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("pfaffian: matrix must be square");
    const Eigen::Index n = m.rows();
    if (n == 0) return PfaffianResult{cdouble(1.0, 0.0), 0.0};
    check_antisymmetric(m);
    if (n % 2 == 1) return PfaffianResult{cdouble(0.0, 0.0), 0.0};

    ComplexMatrix a = m;
    LogScaled pf;
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        // largest-modulus pivot in column k below the diagonal
        Eigen::Index kp = k + 1;
        for (Eigen::Index i = k + 2; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(kp, k))) kp = i;
        if (kp != k + 1) {
            a.row(k + 1).swap(a.row(kp));
            a.col(k + 1).swap(a.col(kp));
            pf.mul(cdouble(-1.0, 0.0));
        }
        cdouble pivot = a(k + 1, k);
        if (pivot == cdouble(0.0, 0.0))
            return PfaffianResult{cdouble(0.0, 0.0), 0.0};
        pf.mul(-pivot);  // Pf contribution is a(k, k+1) = -a(k+1, k)
        if (k + 2 < n) {
            ComplexVector tau = a.col(k).segment(k + 2, n - k - 2) / pivot;
            ComplexVector row = a.col(k + 1).segment(k + 2, n - k - 2);
            auto block = a.block(k + 2, k + 2, n - k - 2, n - k - 2);
            block.noalias() += tau * row.transpose();
            block.noalias() -= row * tau.transpose();
        }
    }
    return PfaffianResult{pf.mantissa, pf.log_scale};
}

bool pfaffian_congruence_check(const ComplexMatrix& b, const ComplexMatrix& a,
                               double rel_tol) {
    PfaffianResult lhs = pfaffian(b * a * b.transpose());
    PfaffianResult rhs = pfaffian(a);
    LogScaled scaled{rhs.value, rhs.log_scale};
    LogScaled d = det_log(b);
    scaled.mul(d.mantissa);
    scaled.log_scale += d.log_scale;
    double ref = std::max(std::abs(lhs.full()), std::abs(scaled.value()));
    if (ref == 0.0) return true;
    return std::abs(lhs.full() - scaled.value()) <= rel_tol * ref;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

std::vector<int> tensor_swap_permutation(int p, int m) {
    std::vector<int> perm(static_cast<size_t>(p) * m);
    for (int r = 0; r < m; ++r)
        for (int s = 0; s < p; ++s)
            perm[static_cast<size_t>(r) * p + s] = s * m + r;
    return perm;
}

ComplexVector eigenvalues(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("eigenvalues: matrix must be square");
    const auto n = static_cast<lapack_int>(m.rows());
    if (n == 0) return ComplexVector();
    ComplexMatrix a = m;  // column-major, zgeev overwrites
    ComplexVector w(n);
    lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'N', n,
        reinterpret_cast<lapack_complex_double*>(a.data()), n,
        reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
        nullptr, 1);
    if (info < 0) throw std::invalid_argument("eigenvalues: bad zgeev argument");
    if (info > 0) {
        // eigenvalues info..n-1 converged
        ComplexVector partial = w.segment(info, n - info);
        throw EigensolveError("eigenvalues: QR iteration failed to converge",
                              std::move(partial));
    }
    return w;
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("hermitian_sqrt: matrix must be square");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_sqrt: eigendecomposition failed");
    double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
    double lo = es.eigenvalues().minCoeff();
    if (lo < -1e-10 * scale) {
        std::ostringstream os;
        os << "hermitian_sqrt: indefinite input, min eigenvalue " << lo;
        throw std::invalid_argument(os.str());
    }
    RealVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * roots.asDiagonal() *
           es.eigenvectors().adjoint();
}

}  // namespace ginlab::numkit

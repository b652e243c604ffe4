#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ginlab/numkit.hpp"
#include "ginlab/rng.hpp"

using namespace ginlab;
using numkit::det;
using numkit::kron;
using numkit::pfaffian;

namespace {

ComplexMatrix random_matrix(int n, std::uint64_t seed) {
    rng::Stream s(seed);
    ComplexMatrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = s.complex_normal();
    return m;
}

ComplexMatrix random_antisymmetric(int n, std::uint64_t seed) {
    ComplexMatrix m = random_matrix(n, seed);
    return m - m.transpose().eval();
}

}  // namespace

TEST_CASE("determinant basics") {
    CHECK(std::abs(det(ComplexMatrix::Identity(5, 5)) - 1.0) < 1e-14);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = cdouble(0.0, 3.0);
    CHECK(std::abs(det(d) - cdouble(0.0, 6.0)) < 1e-14);
}

TEST_CASE("determinant inverse round-trip") {
    ComplexMatrix m = random_matrix(8, 11);
    cdouble prod = det(m) * det(ComplexMatrix(m.inverse()));
    CHECK(std::abs(prod - 1.0) < 1e-9);
}

TEST_CASE("pfaffian 2x2 and 4x4 expansions") {
    const cdouble a(1.3, -0.4);
    ComplexMatrix m2 = ComplexMatrix::Zero(2, 2);
    m2(0, 1) = a;
    m2(1, 0) = -a;
    CHECK(std::abs(pfaffian(m2).full() - a) < 1e-14);

    ComplexMatrix m4 = random_antisymmetric(4, 3);
    const cdouble expect = m4(0, 1) * m4(2, 3) - m4(0, 2) * m4(1, 3) +
                           m4(0, 3) * m4(1, 2);
    CHECK(std::abs(pfaffian(m4).full() - expect) < 1e-12 * std::abs(expect));
}

TEST_CASE("pfaffian squared equals determinant") {
    for (int n = 2; n <= 20; n += 2) {
        ComplexMatrix m = random_antisymmetric(n, 100 + n);
        auto pf = pfaffian(m);
        cdouble pf2 = pf.value * pf.value * std::exp(2.0 * pf.log_scale);
        cdouble d = det(m);
        CHECK(std::abs(pf2 - d) < 1e-9 * std::abs(d));
    }
}

TEST_CASE("pfaffian block identity Pf([[0,A],[-A^t,0]])") {
    for (int n = 1; n <= 8; ++n) {
        ComplexMatrix a = random_matrix(n, 50 + n);
        ComplexMatrix m = ComplexMatrix::Zero(2 * n, 2 * n);
        m.topRightCorner(n, n) = a;
        m.bottomLeftCorner(n, n) = -a.transpose();
        const double sign = (n * (n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        cdouble expect = sign * det(a);
        CHECK(std::abs(pfaffian(m).full() - expect) < 1e-9 * std::abs(expect));
    }
}

TEST_CASE("pfaffian odd dimension and asymmetry rejection") {
    ComplexMatrix odd = ComplexMatrix::Zero(3, 3);
    odd(0, 1) = 1.0;
    odd(1, 0) = -1.0;
    CHECK(pfaffian(odd).value == cdouble(0.0, 0.0));
    CHECK_THROWS_AS(pfaffian(random_matrix(4, 7)), std::invalid_argument);
}

TEST_CASE("pfaffian congruence property") {
    ComplexMatrix a4 = random_antisymmetric(4, 21);
    CHECK(numkit::pfaffian_congruence_check(ComplexMatrix::Identity(4, 4), a4));
    CHECK(numkit::pfaffian_congruence_check(2.0 * ComplexMatrix::Identity(4, 4),
                                            a4));
    CHECK(numkit::pfaffian_congruence_check(random_matrix(6, 22),
                                            random_antisymmetric(6, 23)));
}

TEST_CASE("kron basics and mixed product") {
    ComplexMatrix m = random_matrix(3, 31);
    ComplexMatrix im = kron(ComplexMatrix::Identity(2, 2), m);
    CHECK((im.topLeftCorner(3, 3) - m).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((im.bottomRightCorner(3, 3) - m).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(im.topRightCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);

    ComplexMatrix a = random_matrix(2, 32), b = random_matrix(2, 33);
    ComplexMatrix c = random_matrix(2, 34), d = random_matrix(2, 35);
    ComplexMatrix lhs = kron(a, b) * kron(c, d);
    ComplexMatrix rhs = kron(ComplexMatrix(a * c), ComplexMatrix(b * d));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tensor swap permutation realizes commutation") {
    auto perm1 = numkit::tensor_swap_permutation(1, 1);
    REQUIRE(perm1.size() == 1);
    CHECK(perm1[0] == 0);

    auto perm = numkit::tensor_swap_permutation(2, 3);
    std::vector<int> expect{0, 3, 1, 4, 2, 5};
    CHECK(perm == expect);

    ComplexMatrix a = random_matrix(3, 41), b = random_matrix(2, 42);
    ComplexMatrix ab = kron(a, b), ba = kron(b, a);
    auto p = numkit::tensor_swap_permutation(3, 2);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(std::abs(ba(i, j) - ab(p[i], p[j])) < 1e-14);
}

TEST_CASE("eigenvalues of a triangular matrix") {
    ComplexMatrix m = random_matrix(6, 51);
    for (int j = 0; j < 6; ++j)
        for (int i = j + 1; i < 6; ++i) m(i, j) = 0.0;
    ComplexVector ev = numkit::eigenvalues(m);
    std::vector<double> got, want;
    for (int i = 0; i < 6; ++i) {
        got.push_back(std::abs(ev[i]));
        want.push_back(std::abs(m(i, i)));
    }
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    for (int i = 0; i < 6; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
}

TEST_CASE("perturbed nilpotent shift: spectrum on circle of radius 1/2") {
    // J_eps: nilpotent shift with eps = 2^-16 in the corner; the eigenvalues
    // are eps^{1/16} e^{2 pi i j / 16}, equally spaced on |z| = 1/2.
    const int n = 16;
    const double eps = std::ldexp(1.0, -16);
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
    m(n - 1, 0) = eps;
    ComplexVector ev = numkit::eigenvalues(m);
    std::vector<double> angles;
    for (int i = 0; i < n; ++i) {
        CHECK(std::abs(ev[i]) == doctest::Approx(0.5).epsilon(1e-6));
        angles.push_back(std::arg(ev[i]));
    }
    std::sort(angles.begin(), angles.end());
    for (int i = 0; i + 1 < n; ++i)
        CHECK(angles[i + 1] - angles[i] == doctest::Approx(2.0 * kPi / n).epsilon(1e-6));
}

TEST_CASE("eigenvalues match characteristic polynomial roots at n=5") {
    const int n = 5;
    ComplexMatrix m = random_matrix(n, 61);
    // power sums p_k = Tr M^k, then Newton's identities for the coefficients
    std::vector<cdouble> p(n + 1);
    ComplexMatrix power = ComplexMatrix::Identity(n, n);
    for (int k = 1; k <= n; ++k) {
        power = ComplexMatrix(power * m);
        p[k] = power.trace();
    }
    std::vector<cdouble> e(n + 1);
    e[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        cdouble sum(0.0, 0.0);
        for (int j = 1; j <= k; ++j)
            sum += (j % 2 == 1 ? 1.0 : -1.0) * e[k - j] * p[j];
        e[k] = sum / double(k);
    }
    // char poly z^n - e1 z^{n-1} + e2 z^{n-2} - ...; Durand-Kerner roots
    std::vector<cdouble> coeff(n + 1);  // coeff[k] multiplies z^k
    for (int k = 0; k <= n; ++k)
        coeff[n - k] = (k % 2 == 0 ? 1.0 : -1.0) * e[k];
    auto eval = [&](cdouble z) {
        cdouble v(0.0, 0.0);
        for (int k = n; k >= 0; --k) v = v * z + coeff[k];
        return v;
    };
    std::vector<cdouble> roots(n);
    for (int i = 0; i < n; ++i)
        roots[i] = std::pow(cdouble(0.4, 0.9), i + 1);
    for (int it = 0; it < 200; ++it) {
        for (int i = 0; i < n; ++i) {
            cdouble denom(1.0, 0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            roots[i] -= eval(roots[i]) / denom;
        }
    }
    ComplexVector ev = numkit::eigenvalues(m);
    for (int i = 0; i < n; ++i) {
        double best = 1e99;
        for (int j = 0; j < n; ++j) best = std::min(best, std::abs(ev[i] - roots[j]));
        CHECK(best < 1e-7);
    }
}

TEST_CASE("eigenvalue trace and determinant invariants") {
    ComplexMatrix m = random_matrix(50, 71);
    ComplexVector ev = numkit::eigenvalues(m);
    cdouble sum(0.0, 0.0);
    LogScaled prod;
    for (int i = 0; i < 50; ++i) {
        sum += ev[i];
        prod.mul(ev[i]);
    }
    CHECK(std::abs(sum - m.trace()) < 1e-8 * 50 * m.cwiseAbs().maxCoeff());
    auto d = numkit::det_log(m);
    CHECK(std::abs(prod.value() - d.value()) < 1e-7 * std::abs(d.value()));
}

TEST_CASE("hermitian sqrt") {
    ComplexMatrix id = ComplexMatrix::Identity(4, 4);
    CHECK((numkit::hermitian_sqrt(id) - id).cwiseAbs().maxCoeff() < 1e-12);

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    ComplexMatrix s = numkit::hermitian_sqrt(d);
    CHECK(std::abs(s(0, 0) - 2.0) < 1e-12);
    CHECK(std::abs(s(1, 1) - 3.0) < 1e-12);

    ComplexMatrix b = random_matrix(5, 81);
    ComplexMatrix psd = b * b.adjoint();
    ComplexMatrix r = numkit::hermitian_sqrt(psd);
    CHECK((r * r - psd).cwiseAbs().maxCoeff() < 1e-10 * psd.cwiseAbs().maxCoeff());

    ComplexMatrix indef = ComplexMatrix::Identity(2, 2);
    indef(1, 1) = -1.0;
    CHECK_THROWS(numkit::hermitian_sqrt(indef));
}

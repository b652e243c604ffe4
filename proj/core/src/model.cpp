#include "ginlab/model.hpp"

#include <set>
#include <sstream>

#include "ginlab/numkit.hpp"

namespace ginlab::model {

int JordanSpec::dimension() const {
    int r = 0;
    for (const auto& ev : eigenvalues)
        for (const auto& b : ev.blocks) r += b.p * b.multiplicity;
    return r;
}

void JordanSpec::validate() const {
    std::set<std::pair<double, double>> seen;
    for (const auto& ev : eigenvalues) {
        if (!seen.insert({ev.theta.real(), ev.theta.imag()}).second)
            throw std::invalid_argument("JordanSpec: eigenvalues must be distinct");
        if (ev.blocks.empty())
            throw std::invalid_argument("JordanSpec: eigenvalue without blocks");
        int prev = 0;
        for (const auto& b : ev.blocks) {
            if (b.p <= prev)
                throw std::invalid_argument(
                    "JordanSpec: block sizes must be strictly increasing");
            if (b.multiplicity < 1)
                throw std::invalid_argument("JordanSpec: multiplicity must be >= 1");
            prev = b.p;
        }
    }
    const int r = dimension();
    if (transform) {
        if (transform->rows() != r || transform->cols() != r)
            throw std::invalid_argument("JordanSpec: P must be r x r");
        double cond = transform_condition(*transform);
        if (!(cond < 1e12)) {
            std::ostringstream os;
            os << "JordanSpec: transform numerically singular, cond(P) = " << cond;
            throw std::invalid_argument(os.str());
        }
    }
}

double transform_condition(const ComplexMatrix& p) {
    Eigen::JacobiSVD<ComplexMatrix> svd(p);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

namespace {

ComplexMatrix jordan_block(cdouble theta, int p) {
    ComplexMatrix r = ComplexMatrix::Zero(p, p);
    for (int i = 0; i < p; ++i) {
        r(i, i) = theta;
        if (i + 1 < p) r(i, i + 1) = 1.0;
    }
    return r;
}

ComplexMatrix assemble_j2(const JordanSpec& spec) {
    const int r = spec.dimension();
    ComplexMatrix j = ComplexMatrix::Zero(r, r);
    int at = 0;
    for (const auto& ev : spec.eigenvalues)
        for (const auto& b : ev.blocks)
            for (int copy = 0; copy < b.multiplicity; ++copy) {
                j.block(at, at, b.p, b.p) = jordan_block(ev.theta, b.p);
                at += b.p;
            }
    return j;
}

}  // namespace

ComplexMatrix build_deformation(const JordanSpec& spec) {
    spec.validate();
    ComplexMatrix j2 = assemble_j2(spec);
    if (!spec.transform) return j2;
    const ComplexMatrix& p = *spec.transform;
    return p * j2 * p.inverse();
}

bool is_quaternion_structured(const ComplexMatrix& x, double tol) {
    if (x.rows() != x.cols() || x.rows() % 2 != 0) return false;
    const Eigen::Index n = x.rows() / 2;
    // blocks [[a, b], [-conj b, conj a]]
    double scale = std::max(x.cwiseAbs().maxCoeff(), 1.0);
    double err = std::max(
        (x.block(n, n, n, n) - x.block(0, 0, n, n).conjugate()).cwiseAbs().maxCoeff(),
        (x.block(n, 0, n, n) + x.block(0, n, n, n).conjugate()).cwiseAbs().maxCoeff());
    return err <= tol * scale;
}

ComplexMatrix embed_quaternion(const JordanSpec& spec) {
    spec.validate();
    for (const auto& ev : spec.eigenvalues)
        if (ev.theta.imag() < 0.0)
            throw std::invalid_argument(
                "embed_quaternion: eigenvalues require Im theta >= 0");
    const int r = spec.dimension();
    ComplexMatrix j2 = assemble_j2(spec);
    ComplexMatrix j = ComplexMatrix::Zero(2 * r, 2 * r);
    j.topLeftCorner(r, r) = j2;
    j.bottomRightCorner(r, r) = j2.conjugate();
    if (!spec.transform) return j;
    const ComplexMatrix& p = *spec.transform;
    if (p.rows() != 2 * r)
        throw std::invalid_argument("embed_quaternion: P must be 2r x 2r");
    if (!is_quaternion_structured(p))
        throw std::invalid_argument(
            "embed_quaternion: P must have the quaternion block form");
    return p * j * p.inverse();
}

CriticalityDescriptor describe_criticality(const JordanSpec& spec, cdouble z0) {
    spec.validate();
    CriticalityDescriptor d;
    d.z0 = z0;
    for (const auto& ev : spec.eigenvalues) {
        // exact equality: the caller declares criticality, no fuzzy matching
        if (ev.theta == z0) {
            d.critical_count += 1;
            for (const auto& b : ev.blocks) d.geometric_multiplicity += b.multiplicity;
        }
        if (std::abs(ev.theta) > 1.0)
            d.outlier_exponents.emplace_back(ev.theta,
                                             1.0 / (2.0 * ev.blocks.front().p));
    }
    return d;
}

ComplexMatrix EnsembleConfig::deformation_matrix() const {
    if (mean) return *mean;
    if (deformation.eigenvalues.empty()) return ComplexMatrix(0, 0);
    return dyson_index == 4 ? embed_quaternion(deformation)
                            : build_deformation(deformation);
}

void EnsembleConfig::validate() const {
    if (dyson_index != 1 && dyson_index != 2 && dyson_index != 4)
        throw std::invalid_argument("EnsembleConfig: dyson index must be 1, 2 or 4");
    if (dim <= 0) throw std::invalid_argument("EnsembleConfig: N must be positive");
    ComplexMatrix a0 = deformation_matrix();
    const int limit = dyson_index == 4 ? 2 * dim : dim;
    if (a0.size() > 0 && (a0.rows() > limit || a0.rows() != a0.cols()))
        throw std::invalid_argument("EnsembleConfig: deformation larger than N");
    if (dyson_index == 4 && a0.size() > 0 && !is_quaternion_structured(a0, 1e-10))
        throw std::invalid_argument(
            "EnsembleConfig: beta = 4 mean must satisfy X J = J conj(X)");
    for (const auto* cov : {&sigma, &gamma}) {
        if (!*cov) continue;
        const ComplexMatrix& m = **cov;
        const int n = dyson_index == 4 ? 2 * dim : dim;
        if (m.rows() != n || m.cols() != n)
            throw std::invalid_argument("EnsembleConfig: covariance shape mismatch");
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * m.cwiseAbs().maxCoeff())
            throw std::invalid_argument("EnsembleConfig: covariance not Hermitian");
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw std::invalid_argument("EnsembleConfig: covariance not positive definite");
        if (dyson_index == 4 && !is_quaternion_structured(m, 1e-10))
            throw std::invalid_argument(
                "EnsembleConfig: beta = 4 covariance must be quaternion structured");
    }
}

std::uint64_t EnsembleConfig::fingerprint() const {
    // FNV-1a over the structural content
    std::uint64_t h = 1469598103934665603ull;
    auto feed = [&h](const void* data, size_t len) {
        const auto* b = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    auto feed_d = [&](double v) { feed(&v, sizeof v); };
    feed(&dyson_index, sizeof dyson_index);
    feed(&dim, sizeof dim);
    double t = tau_or_default();
    feed_d(t);
    feed(&seed, sizeof seed);
    ComplexMatrix a0 = deformation_matrix();
    for (Eigen::Index j = 0; j < a0.cols(); ++j)
        for (Eigen::Index i = 0; i < a0.rows(); ++i) {
            feed_d(a0(i, j).real());
            feed_d(a0(i, j).imag());
        }
    for (const auto* cov : {&sigma, &gamma})
        if (*cov)
            for (Eigen::Index j = 0; j < (*cov)->cols(); ++j)
                for (Eigen::Index i = 0; i < (*cov)->rows(); ++i) {
                    feed_d((**cov)(i, j).real());
                    feed_d((**cov)(i, j).imag());
                }
    return h;
}

}  // namespace ginlab::model

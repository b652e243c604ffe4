#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "ginlab/edgestat.hpp"
#include "ginlab/numkit.hpp"
#include "ginlab/rng.hpp"
#include "ginlab/sampler.hpp"

using namespace ginlab;

namespace {

model::EnsembleConfig config(int beta, int n, std::uint64_t seed) {
    model::EnsembleConfig cfg;
    cfg.dyson_index = beta;
    cfg.dim = n;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("windowed_spectrum matches the filtered full spectrum") {
    auto cfg = config(2, 400, 3);
    cfg.deformation.eigenvalues.push_back({cdouble(1.0, 0.0), {{1, 1}}});
    ComplexMatrix x = sampler::sample_deformed(cfg, 0);
    const cdouble shift(1.0, 0.0);
    const double radius = 0.18;
    ComplexVector full = numkit::eigenvalues(x);
    std::vector<cdouble> expect;
    for (int i = 0; i < full.size(); ++i)
        if (std::abs(full[i] - shift) <= radius) expect.push_back(full[i]);
    ComplexVector got = edgestat::windowed_spectrum(x, shift, radius);
    REQUIRE(std::size_t(got.size()) == expect.size());
    for (int i = 0; i < got.size(); ++i) {
        double best = 1e99;
        for (const cdouble& e : expect) best = std::min(best, std::abs(got[i] - e));
        CHECK(best < 1e-8);
    }
}

TEST_CASE("windowed_spectrum small matrices use the dense path") {
    auto cfg = config(2, 64, 5);
    ComplexMatrix x = sampler::sample_deformed(cfg, 1);
    ComplexVector got = edgestat::windowed_spectrum(x, cdouble(0.0, 0.0), 0.5);
    ComplexVector full = numkit::eigenvalues(x);
    long expect = 0;
    for (int i = 0; i < full.size(); ++i)
        if (std::abs(full[i]) <= 0.5) ++expect;
    CHECK(got.size() == expect);
}

TEST_CASE("collect_edge bookkeeping identity") {
    auto cfg = config(2, 128, 7);
    auto frame = kernels::EdgeFrame::ue(1.0, 0);
    auto rep = edgestat::collect_edge(cfg, frame, 4.0, 0.5, 30);
    CHECK(rep.replicas == 30);
    const double total =
        std::accumulate(rep.counts.begin(), rep.counts.end(), 0.0);
    CHECK(total == doctest::Approx(double(rep.total_eigenvalues)));
    // empirical = counts / (M * area), exact per bin
    const double area = rep.bin_side * rep.bin_side;
    for (std::size_t k = 0; k < rep.counts.size(); ++k)
        CHECK(rep.empirical[k] ==
              doctest::Approx(rep.counts[k] / (30.0 * area)));
    CHECK(rep.chi.dof > 0);
    CHECK(std::isfinite(rep.chi.p_value));
}

TEST_CASE("bin geometry") {
    edgestat::EdgeReport rep;
    rep.window = 2.0;
    rep.bin_side = 1.0;
    rep.cells = 4;
    // centre bins lie inside the disk, corner bins do not
    CHECK(rep.bin_in_disk(1, 1));
    CHECK(rep.bin_in_disk(2, 2));
    CHECK(!rep.bin_in_disk(0, 0));
    CHECK(!rep.bin_in_disk(3, 3));
    const cdouble c = rep.bin_center(0, 0);
    CHECK(c.real() == doctest::Approx(-1.5));
    CHECK(c.imag() == doctest::Approx(-1.5));
}

TEST_CASE("collect_edge rejects off-circle z0 and oversized window") {
    auto cfg = config(2, 64, 9);
    kernels::EdgeFrame bad{cdouble(1.05, 0.0), 2, 0};
    CHECK_THROWS(edgestat::collect_edge(cfg, bad, 4.0, 0.5, 5));
    auto frame = kernels::EdgeFrame::ue(1.0, 0);
    CHECK_THROWS(edgestat::collect_edge(cfg, frame, 7.0, 0.5, 5));
}

TEST_CASE("outlier_scaling validates inputs") {
    CHECK_THROWS(edgestat::outlier_scaling(cdouble(1.5, 0.0), 4,
                                           {128, 256, 512, 2048}, 10, 1));
    CHECK_THROWS(edgestat::outlier_scaling(cdouble(1.1, 0.0), 1,
                                           {128, 256, 512, 2048}, 10, 1));
    CHECK_THROWS(
        edgestat::outlier_scaling(cdouble(1.5, 0.0), 1, {128, 256}, 10, 1));
}

TEST_CASE("outlier_scaling p=1 at small scale") {
    auto fit = edgestat::outlier_scaling(cdouble(1.5, 0.0), 1,
                                         {32, 64, 128, 256, 512}, 60, 11);
    REQUIRE(fit.dims.size() == 5);
    for (double s : fit.mean_spread) CHECK(s > 0.0);
    // generous desk-scale band around -1/2
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.25));
}

TEST_CASE("invariance_test reports t values and a p-value") {
    model::JordanSpec a, b;
    a.eigenvalues.push_back({cdouble(1.0, 0.0), {{1, 1}}});
    b.eigenvalues.push_back({cdouble(1.0, 0.0), {{1, 1}}});
    auto frame = kernels::EdgeFrame::ue(1.0, 1);
    auto rep = edgestat::invariance_test(a, b, frame, 128, 3.0, 0.5, 25, 13);
    CHECK(rep.t_a == 1);
    CHECK(rep.t_b == 1);
    // identical specs and seeds differ only by replica streams; must not
    // produce an extreme statistic
    CHECK(rep.chi.p_value > 1e-4);
}

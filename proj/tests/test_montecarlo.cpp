#include "hole_energy/errors.hpp"
#include "hole_energy/montecarlo.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace hole;
using doctest::Approx;
using C = std::complex<double>;

namespace {

int companion_count(const std::vector<C>& c, double rho) {
    const int n = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) m(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    int count = 0;
    for (int i = 0; i < n; ++i) count += std::abs(solver.eigenvalues()[i]) < rho ? 1 : 0;
    return count;
}

}  // namespace

TEST_CASE("SU(2) basis norms") {
    const auto spec = EnsembleSpec::su2(2, 1, 100);
    REQUIRE(spec.basis_norms.size() == 3);
    CHECK(spec.basis_norms[0] == Approx(std::sqrt(3.0)));
    CHECK(spec.basis_norms[1] == Approx(std::sqrt(6.0)));
    CHECK(spec.basis_norms[2] == Approx(std::sqrt(3.0)));
    CHECK(EnsembleSpec::su2(0, 1, 100).basis_norms.size() == 1);
}

TEST_CASE("samples depend only on seed and index") {
    const auto spec = EnsembleSpec::su2(6, 99, 100);
    CHECK(sample_section(spec, 7) == sample_section(spec, 7));
    CHECK(sample_section(spec, 7) != sample_section(spec, 8));
    auto other = spec;
    other.seed = 100;
    CHECK(sample_section(spec, 7) != sample_section(other, 7));
}

TEST_CASE("standard complex Gaussians have unit second moment") {
    const auto spec = EnsembleSpec::su2(3, 5, 100);
    double sum = 0.0;
    C mean{0.0, 0.0};
    const int N = 20000;
    for (int i = 0; i < N; ++i)
        for (const auto& a : sample_gaussians(spec, static_cast<std::uint64_t>(i))) {
            sum += std::norm(a);
            mean += a;
        }
    CHECK(sum / (4.0 * N) == Approx(1.0).epsilon(0.02));
    CHECK(std::abs(mean) / (4.0 * N) < 0.02);
}

TEST_CASE("degree one zero sits at -a0/a1") {
    const auto spec = EnsembleSpec::su2(1, 3, 100);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto c = sample_section(spec, i);
        const double root = std::abs(c[0] / c[1]);
        CHECK(count_zeros_in_disc(c, root * 1.01) == 1);
        CHECK(count_zeros_in_disc(c, root * 0.99) == 0);
    }
}

TEST_CASE("simple winding counts") {
    CHECK(count_zeros_in_disc({0.0, 0.0, 0.0, 2.0}, 1.0) == 3);
    CHECK(count_zeros_in_disc({1.0, 0.1}, 1.0) == 0);
    CHECK(count_zeros_in_disc({3.0}, 5.0) == 0);
    CHECK(count_zeros_in_disc({1.0, 2.0, 1.0}, 2.0) == 2);  // double root at -1
    CHECK(count_zeros_in_disc({1.0, 0.0, 0.0}, 0.0) == 0);
}

TEST_CASE("zero on the contour is resolved by jitter") {
    const int k = count_zeros_in_disc({-1.0, 1.0}, 1.0);
    CHECK((k == 0 || k == 1));
}

TEST_CASE("identically zero section is a contour error") {
    try {
        (void)count_zeros_in_disc({0.0, 0.0}, 1.0);
        FAIL("expected a contour error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::contour);
    }
}

TEST_CASE("winding count equals the companion matrix count") {
    std::mt19937_64 rng(5);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const int n = 2 + static_cast<int>(rng() % 11);
        const auto c = sample_section(EnsembleSpec::su2(n, 17, 1), static_cast<std::uint64_t>(i));
        const double rho = std::exp(std::uniform_real_distribution<double>(-1.5, 1.5)(rng));
        mismatches += count_zeros_in_disc(c, rho) != companion_count(c, rho);
    }
    CHECK(mismatches == 0);
    for (int i = 0; i < 200; ++i) {
        const auto c = sample_section(EnsembleSpec::su2(8, 23, 1), static_cast<std::uint64_t>(i));
        CHECK(count_zeros_in_disc(c, 0.7) == companion_count(c, 0.7));
    }
}

TEST_CASE("every zero lies inside the root bound") {
    const auto spec = EnsembleSpec::su2(12, 4, 100);
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto c = sample_section(spec, i);
        CHECK(count_zeros_in_disc(c, root_bound(c)) == 12);
    }
}

TEST_CASE("Wilson interval values") {
    const auto half = wilson_interval(5000, 10000);
    CHECK(half.lo == Approx(0.490201).epsilon(1e-5));
    CHECK(half.hi == Approx(0.509799).epsilon(1e-5));
    const auto none = wilson_interval(0, 100);
    CHECK(none.lo == 0.0);
    CHECK(none.hi == Approx(3.841458820694124 / (100.0 + 3.841458820694124)).epsilon(1e-12));
}

TEST_CASE("hole probability closed forms") {
    const auto one = hole_probability_chart(EnsembleSpec::su2(1, 42, 10000), 1.0);
    CHECK(one.wilson_lo <= 0.5);
    CHECK(0.5 <= one.wilson_hi);
    CHECK(one.wilson_lo <= one.p_hat);
    CHECK(one.p_hat <= one.wilson_hi);
    CHECK(one.hits <= one.samples);
    CHECK(hole_probability_chart(EnsembleSpec::su2(0, 42, 1000), 1.0).p_hat == 1.0);
    CHECK(hole_probability_chart(EnsembleSpec::su2(5, 42, 1000), 0.0).p_hat == 1.0);
    CHECK_THROWS_AS((void)hole_probability_chart(EnsembleSpec::su2(1, 42, 50), 1.0), Error);
}

TEST_CASE("geodesic radius converts through Fubini-Study") {
    const auto fs = ChartMetric::fubini_study();
    const double r = chart_to_geodesic(0.5, fs);
    const auto est = hole_probability(EnsembleSpec::su2(2, 8, 1000), r, fs);
    CHECK(est.r_chart == Approx(0.5).epsilon(1e-12));
    CHECK(est.r_geodesic == r);
}

TEST_CASE("estimates do not depend on the worker count") {
    const auto spec = EnsembleSpec::su2(6, 77, 5000);
    const auto a = hole_probability_chart(spec, 0.4, 1);
    const auto b = hole_probability_chart(spec, 0.4, 3);
    CHECK(a.hits == b.hits);
    CHECK(a.p_hat == b.p_hat);
    CHECK(a.wilson_lo == b.wilson_lo);
}

TEST_CASE("zeros equidistribute at n = 50") {
    const int n = 50;
    const double rho = 0.7;
    const auto spec = EnsembleSpec::su2(n, 2024, 1000);
    double sum = 0.0, sum2 = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const double k = count_zeros_in_disc(sample_section(spec, i), rho);
        sum += k;
        sum2 += k * k;
    }
    const double mean = sum / 1000.0;
    const double se = std::sqrt((sum2 / 1000.0 - mean * mean) / 999.0);
    const double expected = n * rho * rho / (1.0 + rho * rho);
    CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("rate trend bookkeeping") {
    CHECK(rate_trend({}).rows.empty());
    RateTrendOptions opts;
    opts.r_geodesic = chart_to_geodesic(0.3, ChartMetric::fubini_study());
    opts.samples = 10000;
    opts.seed = 42;
    const auto t = rate_trend({1}, opts);
    REQUIRE(t.rows.size() == 1);
    // Degree one: the single zero avoids |z| < rho with probability 1/(1 + rho^2).
    const double exact = 1.0 / (1.0 + 0.09);
    CHECK(t.rows[0].r_chart == Approx(0.3).epsilon(1e-12));
    CHECK(t.rows[0].estimate.wilson_lo <= exact);
    CHECK(exact <= t.rows[0].estimate.wilson_hi);
    CHECK_FALSE(t.rows[0].flagged);
    CHECK(t.rows[0].min_energy > 0.0);
    CHECK(radius_for_energy(0.01) > 0.0);
}

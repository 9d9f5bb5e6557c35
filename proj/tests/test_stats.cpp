#include "doctest.h"

#include <cmath>
#include <tuple>
#include <vector>

#include "countsim/rng.hpp"
#include "countsim/stats.hpp"

using namespace countsim;
namespace st = countsim::stats;

namespace {

// Independent quadrature for the studentized range CDF: plain Simpson over
// both integrals, written apart from the Gauss-Legendre implementation.
double simpson_range_cdf(double q, int k, double dof) {
    auto inner = [k](double w) {
        if (w <= 0.0) return 0.0;
        const double lo = -8.0, hi = w + 8.0;
        const int n = 4000; // even
        const double h = (hi - lo) / n;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double z = lo + i * h;
            const double f =
                st::normal_pdf(z) * std::pow(st::normal_cdf(z) - st::normal_cdf(z - w), k - 1);
            acc += f * ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0));
        }
        return k * acc * h / 3.0;
    };
    const double log_c =
        std::log(2.0) + 0.5 * dof * (std::log(dof) - std::log(2.0)) - std::lgamma(dof / 2.0);
    const double hi = 1.0 + 10.0 / std::sqrt(dof) + 2.0;
    const int n = 2000;
    const double h = hi / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double u = i * h;
        double f = 0.0;
        if (u > 0.0)
            f = std::exp(log_c + (dof - 1.0) * std::log(u) - 0.5 * dof * u * u) * inner(q * u);
        acc += f * ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return acc * h / 3.0;
}

} // namespace

TEST_CASE("regularized incomplete beta: closed forms") {
    CHECK(st::reg_incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(st::reg_incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-10));
    // I_x(2,2) = 3x^2 - 2x^3
    CHECK(st::reg_incomplete_beta(2.0, 2.0, 0.25) == doctest::Approx(0.15625).epsilon(1e-10));
    CHECK(st::reg_incomplete_beta(3.0, 1.0, 0.5) == doctest::Approx(0.125).epsilon(1e-10));
}

TEST_CASE("normal and t distribution reference points") {
    CHECK(st::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(st::normal_cdf(1.959964) == doctest::Approx(0.975).epsilon(1e-5));
    // t tables: two-tailed p for t=1, dof=8 is 0.3466; t=2.228, dof=10 is 0.05.
    CHECK(st::student_t_two_tailed_p(1.0, 8.0) == doctest::Approx(0.3466).epsilon(1e-3));
    CHECK(st::student_t_two_tailed_p(2.228139, 10.0) == doctest::Approx(0.05).epsilon(1e-4));
    CHECK(st::student_t_two_tailed_quantile(0.05, 10.0) == doctest::Approx(2.228139).epsilon(1e-4));
}

TEST_CASE("one-way anova: hand-computed example") {
    // Groups {1,2,3},{2,3,4},{3,4,5}: SSB=6 (df 2), SSW=6 (df 6), F=3,
    // p = I_{6/12}(3,1) = 0.5^3 = 0.125 exactly.
    const std::vector<std::vector<double>> groups = {{1, 2, 3}, {2, 3, 4}, {3, 4, 5}};
    const auto r = st::one_way_anova(groups);
    CHECK(r.f == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.dof_between == 2.0);
    CHECK(r.dof_within == 6.0);
    CHECK(r.p == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(!r.degenerate_variance);
}

TEST_CASE("anova dof bookkeeping matches the 3x30 pattern") {
    Rng rng(1);
    std::vector<std::vector<double>> groups(3, std::vector<double>(30));
    for (auto& g : groups)
        for (double& v : g) v = rng.uniform01();
    const auto r = st::one_way_anova(groups);
    CHECK(r.dof_between == 2.0);
    CHECK(r.dof_within == 87.0);
}

TEST_CASE("anova edge cases") {
    const std::vector<std::vector<double>> same = {{1, 2, 3}, {1, 2, 3}};
    const auto r = st::one_way_anova(same);
    CHECK(r.f == 0.0);
    CHECK(r.p == 1.0);

    const std::vector<std::vector<double>> degenerate = {{1, 1}, {2, 2}};
    const auto d = st::one_way_anova(degenerate);
    CHECK(d.p == 0.0);
    CHECK(d.degenerate_variance);

    const std::vector<std::vector<double>> one = {{1, 2, 3}};
    CHECK_THROWS(st::one_way_anova(one));
}

TEST_CASE("anova F equals t squared for two groups") {
    Rng rng(2);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> a(12), b(17);
        for (double& v : a) v = rng.uniform01();
        for (double& v : b) v = rng.uniform01() + 0.2;
        const std::vector<std::vector<double>> groups = {a, b};
        const auto f = st::one_way_anova(groups);
        const auto t = st::two_sample_t(a, b, false);
        CHECK(std::fabs(f.f - t.t * t.t) < 1e-9 * std::max(1.0, f.f));
        CHECK(std::fabs(f.p - t.p) < 1e-9);
    }
}

TEST_CASE("two-sample t: reference values and dof patterns") {
    const std::vector<double> a = {1, 2, 3, 4, 5};
    const std::vector<double> b = {2, 3, 4, 5, 6};
    const auto r = st::two_sample_t(a, b, false);
    CHECK(r.t == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.dof == 8.0);
    CHECK(r.p == doctest::Approx(0.3466).epsilon(1e-3));

    Rng rng(3);
    std::vector<double> x(30), y(20);
    for (double& v : x) v = rng.uniform01();
    for (double& v : y) v = rng.uniform01();
    CHECK(st::two_sample_t(x, y, false).dof == 48.0); // 30+20-2
    std::vector<double> z(30);
    for (double& v : z) v = rng.uniform01();
    CHECK(st::two_sample_t(x, z, false).dof == 58.0); // 30+30-2
    CHECK(st::two_sample_t(x, z, true).dof == 29.0);  // paired: n-1

    const auto eq = st::two_sample_t(a, a, false);
    CHECK(eq.t == 0.0);
    CHECK(eq.p == 1.0);

    const std::vector<double> c1 = {1, 1, 1};
    const std::vector<double> c2 = {2, 2, 2};
    const auto deg = st::two_sample_t(c1, c2, false);
    CHECK(deg.p == 0.0);
    CHECK(deg.degenerate_variance);
}

TEST_CASE("paired t equals one-sample t on differences") {
    const std::vector<double> a = {3.1, 2.9, 3.6, 3.2, 3.0};
    const std::vector<double> b = {2.8, 2.9, 3.1, 3.0, 2.7};
    const auto r = st::two_sample_t(a, b, true);
    // differences: 0.3, 0.0, 0.5, 0.2, 0.3 -> mean 0.26, sd 0.18166, t = 3.2005
    CHECK(r.t == doctest::Approx(3.2005).epsilon(1e-4));
    CHECK(r.dof == 4.0);
    CHECK_THROWS(st::two_sample_t(a, std::vector<double>{1, 2}, true));
}

TEST_CASE("studentized range: critical-value tables and the k=2 identity") {
    // Standard 5% critical values: q(2,10)=3.151, q(3,10)=3.877, q(3,60)=3.399.
    CHECK(st::studentized_range_cdf(3.151, 2, 10.0) == doctest::Approx(0.95).epsilon(4e-3));
    CHECK(st::studentized_range_cdf(3.877, 3, 10.0) == doctest::Approx(0.95).epsilon(4e-3));
    CHECK(st::studentized_range_cdf(3.399, 3, 60.0) == doctest::Approx(0.95).epsilon(4e-3));

    // k=2: P(Q <= q) = P(|T| <= q/sqrt(2)).
    for (double q : {1.0, 2.5, 3.151, 4.0})
        for (double dof : {6.0, 10.0, 48.0}) {
            const double via_t = 1.0 - st::student_t_two_tailed_p(q / std::sqrt(2.0), dof);
            CHECK(st::studentized_range_cdf(q, 2, dof) == doctest::Approx(via_t).epsilon(5e-6));
        }
}

TEST_CASE("studentized range matches an independent Simpson quadrature") {
    const std::vector<std::tuple<double, int, double>> cases = {
        {3.0, 3, 12.0}, {4.2, 4, 30.0}, {2.2, 3, 87.0}};
    for (const auto& [q, k, dof] : cases) {
        const double a = st::studentized_range_cdf(q, k, dof);
        const double b = simpson_range_cdf(q, k, dof);
        CHECK(a == doctest::Approx(b).epsilon(1e-5));
    }
}

TEST_CASE("tukey hsd: pair count, identical groups, worked example") {
    const std::vector<std::vector<double>> same = {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}};
    const auto pairs = st::tukey_hsd(same);
    REQUIRE(pairs.size() == 3);
    for (const auto& p : pairs) CHECK(p.p == doctest::Approx(1.0).epsilon(1e-9));

    // Hand example from the anova test: MSW=1, n=3, means 2,3,4 ->
    // q12 = 1/sqrt(1/3) = 1.7321, q13 = 3.4641, dof 6, k 3.
    const std::vector<std::vector<double>> groups = {{1, 2, 3}, {2, 3, 4}, {3, 4, 5}};
    const auto hsd = st::tukey_hsd(groups);
    REQUIRE(hsd.size() == 3);
    CHECK(hsd[0].q == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    CHECK(hsd[1].q == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-9));
    for (const auto& p : hsd) {
        const double oracle = 1.0 - simpson_range_cdf(p.q, 3, 6.0);
        CHECK(p.p == doctest::Approx(oracle).epsilon(1e-4));
    }
}

TEST_CASE("mean with 95% confidence interval") {
    const std::vector<double> ones = {1.0, 1.0, 1.0, 1.0};
    const auto a = st::mean_ci95(ones);
    CHECK(a.mean == 1.0);
    CHECK(a.ci_low == doctest::Approx(1.0));
    CHECK(a.ci_high == doctest::Approx(1.0));

    // Textbook: mean 0.7, sd 0.141421, t(1, .975) = 12.7062 -> half-width 1.27062.
    const std::vector<double> two = {0.6, 0.8};
    const auto b = st::mean_ci95(two);
    CHECK(b.mean == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(b.ci_high - b.mean == doctest::Approx(1.27062).epsilon(1e-4));

    const std::vector<double> one = {0.5};
    CHECK(!st::mean_ci95(one).ci_defined);
}

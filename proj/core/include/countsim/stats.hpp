#pragma once

#include <span>
#include <string>
#include <vector>

namespace countsim::stats {

// Tail probabilities go through the regularized incomplete beta function;
// absolute accuracy on p-values is better than 1e-6.
double reg_incomplete_beta(double a, double b, double x);

double normal_cdf(double z);
double normal_pdf(double z);

// Two-tailed p-value of Student's t.
double student_t_two_tailed_p(double t, double dof);
// Upper quantile: returns q >= 0 with P(|T| > q) = alpha.
double student_t_two_tailed_quantile(double alpha, double dof);

// Upper-tail p-value of the F distribution.
double f_upper_tail_p(double f, double dof1, double dof2);

// P(Q <= q) for the studentized range of k groups with `dof` error degrees of
// freedom. Double Gauss-Legendre quadrature: outer over the chi scale, inner
// over the normal range.
double studentized_range_cdf(double q, int k, double dof);

struct AnovaResult {
    double f = 0.0;
    double dof_between = 0.0;
    double dof_within = 0.0;
    double p = 1.0;
    double ms_within = 0.0;
    std::vector<double> group_means;
    std::vector<int> group_sizes;
    bool degenerate_variance = false; // zero within-group variance, unequal means
};

AnovaResult one_way_anova(std::span<const std::vector<double>> groups);

struct TukeyPair {
    int a = 0;
    int b = 0;
    double q = 0.0;
    double p = 1.0;
    bool degenerate_variance = false;
};

// Tukey's HSD over all group pairs (Tukey-Kramer for unequal sizes).
std::vector<TukeyPair> tukey_hsd(std::span<const std::vector<double>> groups);

struct TTestResult {
    double t = 0.0;
    double dof = 0.0;
    double p = 1.0;
    bool degenerate_variance = false;
};

// Student's t. Unpaired: pooled variance, dof = n_a + n_b - 2. Paired:
// one-sample t on differences, dof = n - 1.
TTestResult two_sample_t(std::span<const double> a, std::span<const double> b, bool paired);

struct MeanCi {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int n = 0;
    bool ci_defined = false; // needs n >= 2
};

// Mean with the t-based 95% confidence interval.
MeanCi mean_ci95(std::span<const double> values);

double mean_of(std::span<const double> values);
double sample_variance(std::span<const double> values);

} // namespace countsim::stats

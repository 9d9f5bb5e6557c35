#include "countsim/stats.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace countsim::stats {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

// 64-point Gauss-Legendre nodes/weights on [-1,1] (positive half; symmetric).
constexpr std::array<double, 32> kGlNodes = {
    0.0243502926634244, 0.0729931217877990, 0.1214628192961206, 0.1696444204239928,
    0.2174236437400071, 0.2646871622087674, 0.3113228719902110, 0.3572201583376681,
    0.4022701579639916, 0.4463660172534641, 0.4894031457070530, 0.5312794640198946,
    0.5718956462026340, 0.6111553551723933, 0.6489654712546573, 0.6852363130542333,
    0.7198818501716109, 0.7528199072605319, 0.7839723589433414, 0.8132653151227975,
    0.8406292962525803, 0.8659993981540928, 0.8893154459951141, 0.9105221370785028,
    0.9295691721319396, 0.9464113748584028, 0.9610087996520538, 0.9733268277899110,
    0.9833362538846260, 0.9910133714767443, 0.9963401167719553, 0.9993050417357722};
constexpr std::array<double, 32> kGlWeights = {
    0.0486909570091397, 0.0485754674415034, 0.0483447622348030, 0.0479993885964583,
    0.0475401657148303, 0.0469681828162100, 0.0462847965813144, 0.0454916279274181,
    0.0445905581637566, 0.0435837245293235, 0.0424735151236536, 0.0412625632426235,
    0.0399537411327203, 0.0385501531786156, 0.0370551285402400, 0.0354722132568824,
    0.0338051618371416, 0.0320579283548516, 0.0302346570724025, 0.0283396726142595,
    0.0263774697150547, 0.0243527025687109, 0.0222701738083833, 0.0201348231535302,
    0.0179517157756973, 0.0157260304760247, 0.0134630478967186, 0.0111681394601311,
    0.0088467598263639, 0.0065044579689784, 0.0041470332605625, 0.0017832807216964};

template <typename F>
double gauss_legendre(F&& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
        const double dx = half * kGlNodes[i];
        sum += kGlWeights[i] * (f(mid + dx) + f(mid - dx));
    }
    return sum * half;
}

// P(range of k standard normals <= w).
double normal_range_cdf(double w, int k) {
    if (w <= 0.0) return 0.0;
    auto integrand = [w, k](double z) {
        const double span = normal_cdf(z) - normal_cdf(z - w);
        return normal_pdf(z) * std::pow(span, k - 1);
    };
    // Integrand support is effectively z in [-8, w + 8].
    const double lo = -8.0, hi = w + 8.0;
    // Piecewise to keep the quadrature sharp for wide ranges.
    const int pieces = std::max(2, static_cast<int>((hi - lo) / 4.0));
    double total = 0.0;
    for (int i = 0; i < pieces; ++i) {
        const double a = lo + (hi - lo) * i / pieces;
        const double b = lo + (hi - lo) * (i + 1) / pieces;
        total += gauss_legendre(integrand, a, b);
    }
    return k * total;
}

} // namespace

double reg_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("reg_incomplete_beta: a,b must be > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log(1.0 - x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
}

double student_t_two_tailed_p(double t, double dof) {
    if (dof <= 0.0) throw std::invalid_argument("student_t: dof must be > 0");
    const double x = dof / (dof + t * t);
    return reg_incomplete_beta(dof / 2.0, 0.5, x);
}

double student_t_two_tailed_quantile(double alpha, double dof) {
    if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("t quantile: alpha in (0,1)");
    double lo = 0.0, hi = 1.0;
    while (student_t_two_tailed_p(hi, dof) > alpha) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_two_tailed_p(mid, dof) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double f_upper_tail_p(double f, double dof1, double dof2) {
    if (dof1 <= 0.0 || dof2 <= 0.0) throw std::invalid_argument("f p: dofs must be > 0");
    if (f <= 0.0) return 1.0;
    return reg_incomplete_beta(dof2 / 2.0, dof1 / 2.0, dof2 / (dof2 + dof1 * f));
}

double studentized_range_cdf(double q, int k, double dof) {
    if (k < 2) throw std::invalid_argument("studentized range: k >= 2");
    if (dof <= 0.0) throw std::invalid_argument("studentized range: dof > 0");
    if (q <= 0.0) return 0.0;
    if (dof > 5000.0) return normal_range_cdf(q, k); // chi scale is 1 in the limit

    // Density of U = sqrt(chi^2_dof / dof), in log space.
    const double log_c = std::log(2.0) + 0.5 * dof * (std::log(dof) - std::log(2.0)) -
                         std::lgamma(dof / 2.0);
    auto outer = [&](double u) {
        const double log_f = log_c + (dof - 1.0) * std::log(u) - 0.5 * dof * u * u;
        return std::exp(log_f) * normal_range_cdf(q * u, k);
    };
    // U concentrates around 1; integrate a generous bracket piecewise.
    const double hi = 1.0 + 10.0 / std::sqrt(dof) + 2.0;
    const int pieces = 12;
    double total = 0.0;
    for (int i = 0; i < pieces; ++i) {
        const double a = hi * i / pieces, b = hi * (i + 1) / pieces;
        total += gauss_legendre(outer, a, b);
    }
    return std::min(1.0, total);
}

double mean_of(std::span<const double> values) {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
    const double m = mean_of(values);
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return s / static_cast<double>(values.size() - 1);
}

AnovaResult one_way_anova(std::span<const std::vector<double>> groups) {
    if (groups.size() < 2) throw std::invalid_argument("anova: need k >= 2 groups");
    AnovaResult r;
    int n_total = 0;
    double grand = 0.0;
    for (const auto& g : groups) {
        if (g.size() < 2) throw std::invalid_argument("anova: each group needs >= 2 values");
        r.group_means.push_back(mean_of(g));
        r.group_sizes.push_back(static_cast<int>(g.size()));
        for (double v : g) grand += v;
        n_total += static_cast<int>(g.size());
    }
    grand /= n_total;

    double ss_between = 0.0, ss_within = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double m = r.group_means[i];
        ss_between += groups[i].size() * (m - grand) * (m - grand);
        for (double v : groups[i]) ss_within += (v - m) * (v - m);
    }
    r.dof_between = static_cast<double>(groups.size()) - 1.0;
    r.dof_within = static_cast<double>(n_total - static_cast<int>(groups.size()));
    r.ms_within = ss_within / r.dof_within;

    if (ss_within == 0.0) {
        if (ss_between == 0.0) {
            r.f = 0.0;
            r.p = 1.0;
        } else {
            r.f = std::numeric_limits<double>::infinity();
            r.p = 0.0;
            r.degenerate_variance = true;
        }
        return r;
    }
    r.f = (ss_between / r.dof_between) / r.ms_within;
    r.p = f_upper_tail_p(r.f, r.dof_between, r.dof_within);
    return r;
}

std::vector<TukeyPair> tukey_hsd(std::span<const std::vector<double>> groups) {
    const AnovaResult anova = one_way_anova(groups);
    const int k = static_cast<int>(groups.size());
    std::vector<TukeyPair> pairs;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            TukeyPair pr;
            pr.a = i;
            pr.b = j;
            const double diff = std::fabs(anova.group_means[static_cast<std::size_t>(i)] -
                                          anova.group_means[static_cast<std::size_t>(j)]);
            if (anova.ms_within == 0.0) {
                pr.q = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
                pr.p = diff == 0.0 ? 1.0 : 0.0;
                pr.degenerate_variance = diff != 0.0;
            } else {
                // Tukey-Kramer standard error.
                const double se = std::sqrt(
                    anova.ms_within / 2.0 *
                    (1.0 / anova.group_sizes[static_cast<std::size_t>(i)] +
                     1.0 / anova.group_sizes[static_cast<std::size_t>(j)]));
                pr.q = diff / se;
                pr.p = 1.0 - studentized_range_cdf(pr.q, k, anova.dof_within);
            }
            pairs.push_back(pr);
        }
    return pairs;
}

TTestResult two_sample_t(std::span<const double> a, std::span<const double> b, bool paired) {
    TTestResult r;
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("t-test: need >= 2 per sample");
    if (paired) {
        if (a.size() != b.size()) throw std::invalid_argument("paired t-test: unequal sizes");
        std::vector<double> diff(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
        const double m = mean_of(diff);
        const double var = sample_variance(diff);
        r.dof = static_cast<double>(a.size()) - 1.0;
        if (var == 0.0) {
            r.t = m == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), m);
            r.p = m == 0.0 ? 1.0 : 0.0;
            r.degenerate_variance = m != 0.0;
            return r;
        }
        r.t = m / std::sqrt(var / static_cast<double>(a.size()));
    } else {
        const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
        const double ma = mean_of(a), mb = mean_of(b);
        const double va = sample_variance(a), vb = sample_variance(b);
        r.dof = na + nb - 2.0;
        const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / r.dof;
        if (pooled == 0.0) {
            r.t = ma == mb ? 0.0
                           : std::copysign(std::numeric_limits<double>::infinity(), ma - mb);
            r.p = ma == mb ? 1.0 : 0.0;
            r.degenerate_variance = ma != mb;
            return r;
        }
        r.t = (ma - mb) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    }
    r.p = student_t_two_tailed_p(r.t, r.dof);
    return r;
}

MeanCi mean_ci95(std::span<const double> values) {
    MeanCi r;
    r.n = static_cast<int>(values.size());
    if (r.n == 0) return r;
    r.mean = mean_of(values);
    if (r.n < 2) return r; // CI undefined
    const double sd = std::sqrt(sample_variance(values));
    const double tq = student_t_two_tailed_quantile(0.05, static_cast<double>(r.n - 1));
    const double half = tq * sd / std::sqrt(static_cast<double>(r.n));
    r.ci_low = r.mean - half;
    r.ci_high = r.mean + half;
    r.ci_defined = true;
    return r;
}

} // namespace countsim::stats

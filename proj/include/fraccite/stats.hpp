#pragma once

// Statistical inference over group samples: Levene's homogeneity test,
// one-way ANOVA, Tukey-Kramer and Dunnett's C pairwise comparisons,
// Kruskal-Wallis, and Spearman rank correlation. All functions are pure;
// samples are taken by value-semantics spans and never mutated.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraccite/distributions.hpp"
#include "fraccite/numeric.hpp"

namespace fraccite {

struct group_sample {
    std::string label;
    std::vector<double> values;
};

struct stats_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// All within-group |deviations| are constant, Levene's denominator is zero.
struct degenerate_variance_error : stats_error {
    using stats_error::stats_error;
};
// Every value in every group identical; no variance to decompose.
struct no_variation_error : stats_error {
    using stats_error::stats_error;
};
// A correlation input sequence is constant; ranks carry no information.
struct constant_input_error : stats_error {
    using stats_error::stats_error;
};

inline double sample_mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("sample_mean: empty sample");
    return compensated_sum(v) / static_cast<double>(v.size());
}

// Unbiased variance (divisor n-1).
inline double sample_variance(std::span<const double> v) {
    if (v.size() < 2) throw std::invalid_argument("sample_variance: need n >= 2");
    const double m = sample_mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size() - 1);
}

// Average (fractional) 1-based ranks with ties shared.
inline std::vector<double> average_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double shared = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = shared;
        i = j + 1;
    }
    return ranks;
}

struct levene_result {
    double w = 0.0;
    double df1 = 0.0;
    double df2 = 0.0;
    double p_value = 1.0;
};

enum class levene_center { mean, median };

namespace detail {

inline void check_groups(std::span<const group_sample> groups, std::size_t min_group_n) {
    if (groups.size() < 2) throw std::invalid_argument("need at least 2 groups");
    for (const auto& g : groups)
        if (g.values.size() < min_group_n)
            throw std::invalid_argument("group '" + g.label + "' needs at least " +
                                        std::to_string(min_group_n) + " observations");
}

inline double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + n / 2, v.end());
    double hi = v[n / 2];
    if (n % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.end());
    return 0.5 * (v[n / 2 - 1] + hi);
}

}  // namespace detail

// Levene's test of variance homogeneity on |Y_ij - center_i|; the
// classic mean-centered variant by default, median-centered
// (Brown-Forsythe) as an option.
inline levene_result levene_test(std::span<const group_sample> groups,
                                 levene_center center = levene_center::mean) {
    detail::check_groups(groups, 2);
    const std::size_t k = groups.size();
    std::size_t total = 0;
    std::vector<std::vector<double>> z(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& v = groups[i].values;
        const double c = center == levene_center::mean ? sample_mean(v) : detail::median_of(v);
        z[i].reserve(v.size());
        for (double x : v) z[i].push_back(std::abs(x - c));
        total += v.size();
    }
    const double n = static_cast<double>(total);
    double grand = 0.0;
    std::vector<double> zbar(k);
    for (std::size_t i = 0; i < k; ++i) {
        zbar[i] = sample_mean(z[i]);
        grand += zbar[i] * static_cast<double>(z[i].size());
    }
    grand /= n;
    double between = 0.0, within = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        between += static_cast<double>(z[i].size()) * (zbar[i] - grand) * (zbar[i] - grand);
        for (double zij : z[i]) within += (zij - zbar[i]) * (zij - zbar[i]);
    }
    if (within == 0.0)
        throw degenerate_variance_error("levene_test: within-group deviation spread is zero");
    levene_result r;
    r.df1 = static_cast<double>(k - 1);
    r.df2 = n - static_cast<double>(k);
    r.w = (r.df2 / r.df1) * (between / within);
    r.p_value = tail_prob(tail_kind::fisher_f, r.w, r.df1, r.df2);
    return r;
}

struct anova_result {
    std::size_t k = 0;
    std::size_t total_n = 0;
    double ss_between = 0.0;
    double ss_within = 0.0;
    double df_between = 0.0;
    double df_within = 0.0;
    double mse = 0.0;  // mean square within
    double f = 0.0;
    double p_value = 1.0;
};

inline anova_result oneway_anova(std::span<const group_sample> groups) {
    detail::check_groups(groups, 1);
    anova_result r;
    r.k = groups.size();
    for (const auto& g : groups) r.total_n += g.values.size();
    if (r.total_n <= r.k) throw std::invalid_argument("oneway_anova: need N > k");
    double grand = 0.0;
    std::vector<double> means(r.k);
    for (std::size_t i = 0; i < r.k; ++i) {
        means[i] = sample_mean(groups[i].values);
        grand += means[i] * static_cast<double>(groups[i].values.size());
    }
    grand /= static_cast<double>(r.total_n);
    for (std::size_t i = 0; i < r.k; ++i) {
        const double d = means[i] - grand;
        r.ss_between += static_cast<double>(groups[i].values.size()) * d * d;
        for (double x : groups[i].values) r.ss_within += (x - means[i]) * (x - means[i]);
    }
    r.df_between = static_cast<double>(r.k - 1);
    r.df_within = static_cast<double>(r.total_n - r.k);
    r.mse = r.ss_within / r.df_within;
    if (r.mse == 0.0) {
        if (r.ss_between == 0.0)
            throw no_variation_error("oneway_anova: all values identical in every group");
        r.f = std::numeric_limits<double>::infinity();
        r.p_value = 0.0;
        return r;
    }
    r.f = (r.ss_between / r.df_between) / r.mse;
    r.p_value = tail_prob(tail_kind::fisher_f, r.f, r.df_between, r.df_within);
    return r;
}

struct pairwise_comparison {
    std::string unit_i;
    std::string unit_j;
    double mean_diff = 0.0;  // mean(i) - mean(j)
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool significant = false;
    double alpha = 0.05;

    pairwise_comparison reversed() const {
        pairwise_comparison r = *this;
        std::swap(r.unit_i, r.unit_j);
        r.mean_diff = -mean_diff;
        r.ci_low = -ci_high;
        r.ci_high = -ci_low;
        return r;
    }
};

namespace detail {

inline void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must be in (0,1)");
}

inline pairwise_comparison make_comparison(const group_sample& gi, const group_sample& gj,
                                           double se, double half_width, double alpha) {
    pairwise_comparison c;
    c.unit_i = gi.label;
    c.unit_j = gj.label;
    c.mean_diff = sample_mean(gi.values) - sample_mean(gj.values);
    c.std_error = se;
    c.ci_low = c.mean_diff - half_width;
    c.ci_high = c.mean_diff + half_width;
    c.significant = c.ci_low > 0.0 || c.ci_high < 0.0;
    c.alpha = alpha;
    return c;
}

}  // namespace detail

// Tukey-Kramer simultaneous comparisons: SE_ij = sqrt(MSE*(1/n_i+1/n_j)),
// half-width = q(1-alpha, k, df_within)/sqrt(2) * SE_ij.
inline std::vector<pairwise_comparison> tukey_kramer(std::span<const group_sample> groups,
                                                     double alpha) {
    detail::check_alpha(alpha);
    const anova_result a = oneway_anova(groups);
    const double q = studentized_range_quantile(1.0 - alpha, static_cast<int>(a.k), a.df_within);
    std::vector<pairwise_comparison> out;
    out.reserve(a.k * (a.k - 1) / 2);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            const double ni = static_cast<double>(groups[i].values.size());
            const double nj = static_cast<double>(groups[j].values.size());
            const double se = std::sqrt(a.mse * (1.0 / ni + 1.0 / nj));
            const double half = q / std::sqrt(2.0) * se;
            out.push_back(detail::make_comparison(groups[i], groups[j], se, half, alpha));
        }
    }
    return out;
}

// Dunnett's C comparisons for heterogeneous variances. Per pair, with
// v_i = s_i^2/n_i:
//   half-width = sqrt((v_i+v_j)/2) * (q(k,n_i-1)*v_i + q(k,n_j-1)*v_j) / (v_i+v_j)
//   SE = sqrt(v_i + v_j)
inline std::vector<pairwise_comparison> dunnett_c(std::span<const group_sample> groups,
                                                  double alpha) {
    detail::check_alpha(alpha);
    detail::check_groups(groups, 2);
    const int k = static_cast<int>(groups.size());
    std::vector<double> v(groups.size()), qcrit(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double ni = static_cast<double>(groups[i].values.size());
        v[i] = sample_variance(groups[i].values) / ni;
        qcrit[i] = studentized_range_quantile(1.0 - alpha, k, ni - 1.0);
    }
    std::vector<pairwise_comparison> out;
    out.reserve(groups.size() * (groups.size() - 1) / 2);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            const double vv = v[i] + v[j];
            const double se = std::sqrt(vv);
            const double half =
                vv > 0.0 ? std::sqrt(vv / 2.0) * (qcrit[i] * v[i] + qcrit[j] * v[j]) / vv : 0.0;
            out.push_back(detail::make_comparison(groups[i], groups[j], se, half, alpha));
        }
    }
    return out;
}

enum class posthoc_method { tukey_kramer, dunnett_c };

inline const char* posthoc_method_name(posthoc_method m) {
    return m == posthoc_method::tukey_kramer ? "tukey-kramer" : "dunnett-c";
}

struct posthoc_result {
    posthoc_method method = posthoc_method::tukey_kramer;
    double alpha = 0.05;
    double levene_p = 1.0;
    std::vector<pairwise_comparison> comparisons;
};

inline posthoc_result run_posthoc(std::span<const group_sample> groups, double alpha,
                                  posthoc_method method) {
    posthoc_result r;
    r.method = method;
    r.alpha = alpha;
    r.levene_p = std::numeric_limits<double>::quiet_NaN();
    r.comparisons = method == posthoc_method::tukey_kramer ? tukey_kramer(groups, alpha)
                                                           : dunnett_c(groups, alpha);
    return r;
}

// Dunnett's C when Levene rejects homogeneity at alpha, Tukey-Kramer
// otherwise.
inline posthoc_result select_posthoc(std::span<const group_sample> groups, double alpha) {
    detail::check_alpha(alpha);
    const levene_result lev = levene_test(groups);
    posthoc_result r = run_posthoc(
        groups, alpha,
        lev.p_value < alpha ? posthoc_method::dunnett_c : posthoc_method::tukey_kramer);
    r.levene_p = lev.p_value;
    return r;
}

struct kruskal_result {
    double h = 0.0;
    double df = 0.0;
    double p_value = 1.0;
};

// Kruskal-Wallis with average-rank ties and tie correction
// 1 - sum(t^3 - t)/(N^3 - N).
inline kruskal_result kruskal_wallis(std::span<const group_sample> groups) {
    detail::check_groups(groups, 1);
    const std::size_t k = groups.size();
    std::vector<double> pooled;
    for (const auto& g : groups) pooled.insert(pooled.end(), g.values.begin(), g.values.end());
    const std::size_t total = pooled.size();
    if (total < k + 1) throw std::invalid_argument("kruskal_wallis: need N >= k+1");
    const double n = static_cast<double>(total);
    const std::vector<double> ranks = average_ranks(pooled);

    kruskal_result r;
    r.df = static_cast<double>(k - 1);
    double stat = 0.0;
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double rank_sum = 0.0;
        for (std::size_t t = 0; t < g.values.size(); ++t) rank_sum += ranks[offset + t];
        const double ni = static_cast<double>(g.values.size());
        const double dev = rank_sum / ni - (n + 1.0) / 2.0;
        stat += ni * dev * dev;
        offset += g.values.size();
    }
    stat *= 12.0 / (n * (n + 1.0));

    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_sum = 0.0;
    std::size_t i = 0;
    while (i < total) {
        std::size_t j = i;
        while (j + 1 < total && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        tie_sum += t * t * t - t;
        i = j + 1;
    }
    const double correction = 1.0 - tie_sum / (n * n * n - n);
    if (correction <= 0.0) {
        r.h = 0.0;  // every pooled value identical
        r.p_value = 1.0;
        return r;
    }
    r.h = stat / correction;
    r.p_value = tail_prob(tail_kind::chi_square, r.h, r.df);
    return r;
}

struct correlation_result {
    double rho = 0.0;
    std::size_t n = 0;
    double p_value = 1.0;  // two-tailed
};

// Significance stars: 2 for p < 0.01, 1 for p < 0.05, else 0.
inline int significance_stars(double p) {
    if (p < 0.01) return 2;
    if (p < 0.05) return 1;
    return 0;
}

// Spearman rank correlation with average ranks; two-tailed p via
// t = rho*sqrt((n-2)/(1-rho^2)) on n-2 degrees of freedom.
inline correlation_result spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman_rho: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("spearman_rho: need n >= 3");
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double t) { return t == v.front(); });
    };
    if (constant(x) || constant(y))
        throw constant_input_error("spearman_rho: constant input sequence");
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const double mx = sample_mean(rx), my = sample_mean(ry);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    correlation_result r;
    r.n = x.size();
    r.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    if (std::abs(r.rho) == 1.0) {
        r.p_value = 0.0;
        return r;
    }
    const double df = static_cast<double>(r.n - 2);
    const double t = r.rho * std::sqrt(df / (1.0 - r.rho * r.rho));
    r.p_value = tail_prob(tail_kind::student_t, t, df);
    return r;
}

}  // namespace fraccite

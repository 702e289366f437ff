#pragma once

// Distribution functions used by the statistical tests: regularized
// incomplete beta/gamma, normal CDF/quantile, tail probabilities for
// t/F/chi-square/normal, and the studentized range distribution
// (CDF, PDF, quantile) evaluated by Gauss-Legendre quadrature.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fraccite {

namespace detail {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Legendre nodes/weights on [-1, 1], by Newton iteration on the
// Legendre polynomial roots.
inline std::vector<std::pair<double, double>> gauss_legendre(int n) {
    std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        out[static_cast<std::size_t>(i)] = {-z, w};
        out[static_cast<std::size_t>(n - 1 - i)] = {z, w};
    }
    return out;
}

inline double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// Continued fraction for the regularized incomplete beta (modified
// Lentz); converges for x < (a+1)/(a+b+2).
inline double beta_cf(double a, double b, double x) {
    const double eps = 1e-15, tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double regularized_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0) || !(x <= 1.0))
        throw std::domain_error("regularized_beta: require a,b > 0 and x in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                               a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0))
        return bt * detail::beta_cf(a, b, x) / a;
    return 1.0 - bt * detail::beta_cf(b, a, 1.0 - x) / b;
}

// Regularized lower incomplete gamma P(a, x); series for x < a+1,
// continued fraction otherwise.
inline double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0))
        throw std::domain_error("regularized_gamma_p: require a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    const double lga = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int n = 0; n < 500; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lga);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    const double q = std::exp(-x + a * std::log(x) - lga) * h;
    return 1.0 - q;
}

inline double regularized_gamma_q(double a, double x) {
    return 1.0 - regularized_gamma_p(a, x);
}

inline double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * detail::kPi);
}

inline double norm_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// Upper tail of the standard normal.
inline double norm_sf(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

// Inverse standard normal CDF: Acklam's rational approximation polished
// by two Halley steps against erfc.
inline double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("norm_quantile: p must be in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= phigh) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double e = norm_cdf(x) - p;
        const double u = e / norm_pdf(x);
        x -= u / (1.0 + x * u / 2.0);
    }
    return x;
}

enum class tail_kind { student_t, fisher_f, chi_square, std_normal };

// Conventional tail probability for each caller: two-tailed for
// student_t, upper tail for fisher_f / chi_square / std_normal.
inline double tail_prob(tail_kind kind, double statistic, double df1 = 0.0, double df2 = 0.0) {
    switch (kind) {
        case tail_kind::student_t: {
            if (!(df1 > 0.0)) throw std::domain_error("tail_prob: student_t needs df > 0");
            const double t2 = statistic * statistic;
            if (std::isinf(t2)) return 0.0;
            return regularized_beta(df1 / (df1 + t2), df1 / 2.0, 0.5);
        }
        case tail_kind::fisher_f: {
            if (!(df1 > 0.0) || !(df2 > 0.0))
                throw std::domain_error("tail_prob: fisher_f needs df1, df2 > 0");
            if (statistic <= 0.0) return 1.0;
            if (std::isinf(statistic)) return 0.0;
            return regularized_beta(df2 / (df2 + df1 * statistic), df2 / 2.0, df1 / 2.0);
        }
        case tail_kind::chi_square: {
            if (!(df1 > 0.0)) throw std::domain_error("tail_prob: chi_square needs df > 0");
            if (statistic <= 0.0) return 1.0;
            return regularized_gamma_q(df1 / 2.0, statistic / 2.0);
        }
        case tail_kind::std_normal:
            return norm_sf(statistic);
    }
    throw std::domain_error("tail_prob: unknown kind");
}

namespace detail {

// Fixed quadrature grid for the infinite-df studentized range integral
// over the standard normal axis. Nodes cover [-8.5, 8.5]; phi beyond is
// below 1e-16.
struct srange_grid {
    std::vector<double> z;       // node position
    std::vector<double> wphi;    // node weight * phi(z)
    std::vector<double> big_phi; // Phi(z)
};

inline const srange_grid& srange_inner_grid() {
    static const srange_grid grid = [] {
        srange_grid g;
        const int panels = 17, order = 12;
        const double lo = -8.5, hi = 8.5;
        const auto gl = gauss_legendre(order);
        const double width = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double a = lo + p * width;
            for (const auto& [x, w] : gl) {
                const double z = a + 0.5 * width * (x + 1.0);
                g.z.push_back(z);
                g.wphi.push_back(0.5 * width * w * norm_pdf(z));
                g.big_phi.push_back(norm_cdf(z));
            }
        }
        return g;
    }();
    return grid;
}

inline double srange_cdf_inf(double q, int k) {
    if (q <= 0.0) return 0.0;
    const auto& g = srange_inner_grid();
    double sum = 0.0;
    for (std::size_t j = 0; j < g.z.size(); ++j)
        sum += g.wphi[j] * ipow(g.big_phi[j] - norm_cdf(g.z[j] - q), k - 1);
    return std::min(1.0, k * sum);
}

inline double srange_pdf_inf(double q, int k) {
    if (q <= 0.0) return 0.0;
    const auto& g = srange_inner_grid();
    double sum = 0.0;
    for (std::size_t j = 0; j < g.z.size(); ++j)
        sum += g.wphi[j] * norm_pdf(g.z[j] - q) *
               ipow(g.big_phi[j] - norm_cdf(g.z[j] - q), k - 2);
    return k * (k - 1.0) * sum;
}

// Quadrature grid over the chi-distributed scale s = sqrt(chi2_df/df)
// for finite degrees of freedom.
struct scale_grid {
    std::vector<double> s;
    std::vector<double> w; // node weight * density(s)
};

inline scale_grid make_scale_grid(double df) {
    scale_grid g;
    const int panels = 16, order = 12;
    const double spread = 10.0 / std::sqrt(df);
    const double lo = std::max(1e-10, 1.0 - spread), hi = 1.0 + spread;
    const double log_c =
        (1.0 - df / 2.0) * std::log(2.0) + (df / 2.0) * std::log(df) - std::lgamma(df / 2.0);
    const auto gl = gauss_legendre(order);
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * width;
        for (const auto& [x, w] : gl) {
            const double s = a + 0.5 * width * (x + 1.0);
            const double log_f = log_c + (df - 1.0) * std::log(s) - df * s * s / 2.0;
            g.s.push_back(s);
            g.w.push_back(0.5 * width * w * std::exp(log_f));
        }
    }
    return g;
}

// df values above this are numerically indistinguishable from infinity.
constexpr double kSrangeInfiniteDf = 1e4;

inline void srange_check_args(int k, double df) {
    if (k < 2) throw std::domain_error("studentized range: k must be >= 2");
    if (!(df >= 1.0))
        throw std::domain_error("studentized range: df must be >= 1 (or infinite)");
}

}  // namespace detail

// CDF of the studentized range with k groups and df error degrees of
// freedom (df may be +infinity). Absolute accuracy well below 1e-5.
inline double studentized_range_cdf(double q, int k, double df) {
    detail::srange_check_args(k, df);
    if (!(q >= 0.0)) throw std::domain_error("studentized range: q must be >= 0");
    if (q == 0.0) return 0.0;
    if (std::isinf(df) || df > detail::kSrangeInfiniteDf)
        return detail::srange_cdf_inf(q, k);
    const auto grid = detail::make_scale_grid(df);
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.s.size(); ++i)
        sum += grid.w[i] * detail::srange_cdf_inf(q * grid.s[i], k);
    return std::min(1.0, sum);
}

inline double studentized_range_pdf(double q, int k, double df) {
    detail::srange_check_args(k, df);
    if (!(q >= 0.0)) throw std::domain_error("studentized range: q must be >= 0");
    if (q == 0.0) return 0.0;
    if (std::isinf(df) || df > detail::kSrangeInfiniteDf)
        return detail::srange_pdf_inf(q, k);
    const auto grid = detail::make_scale_grid(df);
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.s.size(); ++i)
        sum += grid.w[i] * grid.s[i] * detail::srange_pdf_inf(q * grid.s[i], k);
    return sum;
}

namespace detail {

// Safeguarded Newton on the CDF: bisection narrows the bracket, Newton
// steps are accepted only while they stay inside it.
template <class Cdf, class Pdf>
double srange_solve(double p, const Cdf& cdf, const Pdf& pdf) {
    double lo = 0.0, hi = 1.0;
    while (cdf(hi) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw std::domain_error("studentized range quantile: no bracket");
    }
    for (int i = 0; i < 12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
    }
    double q = 0.5 * (lo + hi);
    for (int i = 0; i < 40; ++i) {
        const double f = cdf(q) - p;
        (f < 0.0 ? lo : hi) = q;
        const double d = pdf(q);
        double next = (d > 0.0) ? q - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - q) < 1e-10 * std::max(1.0, q)) return next;
        q = next;
    }
    return q;
}

}  // namespace detail

// Quantile (inverse CDF) of the studentized range; p is the cumulative
// probability, e.g. p = 0.95 gives the upper-5% critical value.
inline double studentized_range_quantile(double p, int k, double df) {
    detail::srange_check_args(k, df);
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("studentized range: p must be in (0,1)");
    const bool infinite = std::isinf(df) || df > detail::kSrangeInfiniteDf;
    const double q_inf = detail::srange_solve(
        p, [k](double q) { return detail::srange_cdf_inf(q, k); },
        [k](double q) { return detail::srange_pdf_inf(q, k); });
    if (infinite) return q_inf;
    const auto grid = detail::make_scale_grid(df);
    auto cdf = [&](double q) {
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.s.size(); ++i)
            sum += grid.w[i] * detail::srange_cdf_inf(q * grid.s[i], k);
        return sum;
    };
    auto pdf = [&](double q) {
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.s.size(); ++i)
            sum += grid.w[i] * grid.s[i] * detail::srange_pdf_inf(q * grid.s[i], k);
        return sum;
    };
    // The finite-df quantile is at least the infinite-df one; polish
    // from there with the same safeguarded solver on a shifted bracket.
    double lo = q_inf * 0.5, hi = q_inf;
    while (cdf(hi) < p) {
        lo = hi;
        hi *= 1.5;
        if (hi > 1e6) throw std::domain_error("studentized range quantile: no bracket");
    }
    double q = 0.5 * (lo + hi);
    for (int i = 0; i < 40; ++i) {
        const double f = cdf(q) - p;
        (f < 0.0 ? lo : hi) = q;
        const double d = pdf(q);
        double next = (d > 0.0) ? q - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - q) < 1e-10 * std::max(1.0, q)) return next;
        q = next;
    }
    return q;
}

}  // namespace fraccite

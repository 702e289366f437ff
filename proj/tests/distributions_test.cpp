#include "fraccite/distributions.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "testutil.hpp"

using namespace fraccite;

TEST(TailProb, StudentTAtZeroIsOne) {
    EXPECT_DOUBLE_EQ(tail_prob(tail_kind::student_t, 0.0, 12.0), 1.0);
}

TEST(TailProb, ChiSquareClosedFormAtTwoDf) {
    // upper tail at df=2 is exp(-x/2)
    const double h = 4.5714;
    EXPECT_NEAR(tail_prob(tail_kind::chi_square, h, 2.0), std::exp(-h / 2.0), 1e-12);
}

TEST(TailProb, FisherSymmetricAtOne) {
    EXPECT_NEAR(tail_prob(tail_kind::fisher_f, 1.0, 7.0, 7.0), 0.5, 1e-10);
    EXPECT_NEAR(tail_prob(tail_kind::fisher_f, 1.0, 40.0, 40.0), 0.5, 1e-10);
}

TEST(TailProb, MatchesReferenceGrid) {
    for (const auto& e : testutil::stats_oracle()["tails"]) {
        const std::string kind = e["kind"];
        const double stat = e["stat"], df1 = e["df1"], df2 = e["df2"];
        const double expected = e["p"];
        double got = 0.0;
        if (kind == "student_t") got = tail_prob(tail_kind::student_t, stat, df1);
        else if (kind == "fisher_f") got = tail_prob(tail_kind::fisher_f, stat, df1, df2);
        else if (kind == "chi_square") got = tail_prob(tail_kind::chi_square, stat, df1);
        else got = tail_prob(tail_kind::std_normal, stat);
        EXPECT_NEAR(got, expected, 1e-10 + 1e-10 * expected)
            << kind << " stat=" << stat << " df=(" << df1 << "," << df2 << ")";
    }
}

TEST(TailProb, RejectsInvalidDf) {
    EXPECT_THROW(tail_prob(tail_kind::student_t, 1.0, 0.0), std::domain_error);
    EXPECT_THROW(tail_prob(tail_kind::fisher_f, 1.0, 2.0, -1.0), std::domain_error);
    EXPECT_THROW(tail_prob(tail_kind::chi_square, 1.0, 0.0), std::domain_error);
}

TEST(NormQuantile, InvertsCdf) {
    for (double p : {1e-8, 0.001, 0.025, 0.5, 0.8, 0.975, 0.9999}) {
        EXPECT_NEAR(norm_cdf(norm_quantile(p)), p, 1e-12 + 1e-10 * p);
    }
    EXPECT_THROW(norm_quantile(0.0), std::domain_error);
    EXPECT_THROW(norm_quantile(1.0), std::domain_error);
}

TEST(StudentizedRange, CdfAtZeroIsZeroAndMonotone) {
    EXPECT_DOUBLE_EQ(studentized_range_cdf(0.0, 4, 10.0), 0.0);
    double prev = 0.0;
    for (double q = 0.25; q <= 10.0; q += 0.25) {
        const double c = studentized_range_cdf(q, 4, 10.0);
        EXPECT_GE(c, prev);
        prev = c;
    }
}

TEST(StudentizedRange, TwoGroupInfiniteDfClosedForm) {
    // range of two standard normals: CDF(q) = 2*Phi(q/sqrt(2)) - 1
    const double inf = std::numeric_limits<double>::infinity();
    for (double q : {0.5, 1.0, 2.0, 2.7718, 4.0}) {
        EXPECT_NEAR(studentized_range_cdf(q, 2, inf),
                    2.0 * norm_cdf(q / std::sqrt(2.0)) - 1.0, 1e-10)
            << "q=" << q;
    }
    EXPECT_NEAR(studentized_range_quantile(0.95, 2, inf),
                std::sqrt(2.0) * norm_quantile(0.975), 5e-7);
}

TEST(StudentizedRange, CdfMatchesReferenceGrid) {
    for (const auto& e : testutil::stats_oracle()["srange"]["cdf"]) {
        const double q = e["q"], df = e["df"], expected = e["cdf"];
        const int k = e["k"];
        EXPECT_NEAR(studentized_range_cdf(q, k, df), expected, 2e-6)
            << "q=" << q << " k=" << k << " df=" << df;
    }
}

TEST(StudentizedRange, QuantileMatchesReferenceGrid) {
    for (const auto& e : testutil::stats_oracle()["srange"]["quantile"]) {
        const double p = e["p"], df = e["df"], expected = e["q"];
        const int k = e["k"];
        EXPECT_NEAR(studentized_range_quantile(p, k, df), expected, 5e-4)
            << "p=" << p << " k=" << k << " df=" << df;
    }
}

TEST(StudentizedRange, QuantileCdfRoundTrip) {
    const double inf = std::numeric_limits<double>::infinity();
    for (double df : {5.0, 30.0, inf}) {
        for (int k = 2; k <= 10; ++k) {
            for (double q = 0.5; q <= 8.0; q += 1.5) {
                const double p = studentized_range_cdf(q, k, df);
                if (p <= 0.0 || p >= 1.0) continue;
                const double back = studentized_range_quantile(p, k, df);
                EXPECT_NEAR(back, q, 1e-4) << "k=" << k << " df=" << df << " q=" << q;
            }
        }
    }
}

TEST(StudentizedRange, LargeDfDelegatesToInfiniteForm) {
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_DOUBLE_EQ(studentized_range_cdf(3.0, 5, 2e4), studentized_range_cdf(3.0, 5, inf));
}

TEST(StudentizedRange, RejectsBadArguments) {
    EXPECT_THROW(studentized_range_cdf(1.0, 1, 10.0), std::domain_error);
    EXPECT_THROW(studentized_range_cdf(-1.0, 3, 10.0), std::domain_error);
    EXPECT_THROW(studentized_range_cdf(1.0, 3, 0.5), std::domain_error);
    EXPECT_THROW(studentized_range_quantile(0.0, 3, 10.0), std::domain_error);
    EXPECT_THROW(studentized_range_quantile(1.0, 3, 10.0), std::domain_error);
}

TEST(RegularizedBeta, KnownValues) {
    EXPECT_NEAR(regularized_beta(0.5, 2.0, 2.0), 0.5, 1e-12);
    EXPECT_NEAR(regularized_beta(0.25, 1.0, 1.0), 0.25, 1e-12);
    EXPECT_DOUBLE_EQ(regularized_beta(0.0, 3.0, 4.0), 0.0);
    EXPECT_DOUBLE_EQ(regularized_beta(1.0, 3.0, 4.0), 1.0);
}

TEST(RegularizedGamma, ComplementsSumToOne) {
    for (double a : {0.5, 2.0, 7.5, 40.0}) {
        for (double x : {0.1, 1.0, 5.0, 50.0}) {
            EXPECT_NEAR(regularized_gamma_p(a, x) + regularized_gamma_q(a, x), 1.0, 1e-12);
        }
    }
}

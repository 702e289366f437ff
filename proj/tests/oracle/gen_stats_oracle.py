#!/usr/bin/env python3
"""Generates the frozen statistical oracle fixture (stats_oracle.json).

Reference implementations: scipy.stats for Levene, one-way ANOVA,
Kruskal-Wallis, Spearman and the studentized range distribution;
Tukey-Kramer and Dunnett's C comparisons are computed here from their
textbook formulas on top of scipy's studentized-range quantiles, and the
Tukey confidence intervals are cross-checked against
scipy.stats.tukey_hsd before being recorded.

The output is committed; regenerating it requires scipy >= 1.8:

    python3 tests/oracle/gen_stats_oracle.py > tests/fixtures/stats_oracle.json
"""

import json
import sys

import numpy as np
from scipy import stats

ALPHA = 0.05
N_INSTANCES = 50


def tukey_kramer(groups, alpha):
    k = len(groups)
    ns = [len(g) for g in groups]
    means = [float(np.mean(g)) for g in groups]
    n_total = sum(ns)
    mse = sum(float(np.sum((np.asarray(g) - m) ** 2)) for g, m in zip(groups, means)) / (
        n_total - k
    )
    df = n_total - k
    q = float(stats.studentized_range.ppf(1 - alpha, k, df))
    rows = []
    for i in range(k):
        for j in range(i + 1, k):
            se = float(np.sqrt(mse * (1.0 / ns[i] + 1.0 / ns[j])))
            half = q / np.sqrt(2.0) * se
            diff = means[i] - means[j]
            rows.append(
                {
                    "i": i,
                    "j": j,
                    "mean_diff": diff,
                    "se": se,
                    "ci_low": diff - half,
                    "ci_high": diff + half,
                    "significant": bool(diff - half > 0 or diff + half < 0),
                }
            )
    return rows


def dunnett_c(groups, alpha):
    k = len(groups)
    rows = []
    v = [float(np.var(g, ddof=1)) / len(g) for g in groups]
    q = [float(stats.studentized_range.ppf(1 - alpha, k, len(g) - 1)) for g in groups]
    means = [float(np.mean(g)) for g in groups]
    for i in range(k):
        for j in range(i + 1, k):
            vv = v[i] + v[j]
            se = float(np.sqrt(vv))
            half = float(np.sqrt(vv / 2.0) * (q[i] * v[i] + q[j] * v[j]) / vv)
            diff = means[i] - means[j]
            rows.append(
                {
                    "i": i,
                    "j": j,
                    "mean_diff": diff,
                    "se": se,
                    "ci_low": diff - half,
                    "ci_high": diff + half,
                    "significant": bool(diff - half > 0 or diff + half < 0),
                }
            )
    return rows


def clear_margins(rows, margin=1e-3):
    return all(
        min(abs(r["ci_low"]), abs(r["ci_high"])) > margin for r in rows
    )


def make_instance(rng, name):
    while True:
        k = int(rng.integers(2, 8))
        groups = []
        for gi in range(k):
            n = int(rng.integers(3, 41))
            shift = rng.uniform(0.0, 3.0)
            vals = rng.uniform(0.0, 10.0, size=n) * rng.uniform(0.3, 1.5) + shift
            if rng.integers(2) == 0:
                vals = np.round(vals * 2.0) / 2.0  # force ties
            groups.append(vals.tolist())
        flat = [np.asarray(g) for g in groups]
        lev = stats.levene(*flat, center="mean")
        if not np.isfinite(lev.statistic):
            continue
        anova = stats.f_oneway(*flat)
        if not np.isfinite(anova.statistic):
            continue
        kr = stats.kruskal(*flat)
        tukey = tukey_kramer(groups, ALPHA)
        dunn = dunnett_c(groups, ALPHA)
        if not (clear_margins(tukey) and clear_margins(dunn)):
            continue

        # cross-check against scipy's own Tukey HSD intervals
        sp = stats.tukey_hsd(*flat)
        ci = sp.confidence_interval(1 - ALPHA)
        for row in tukey:
            assert abs(ci.low[row["i"], row["j"]] - row["ci_low"]) < 1e-8
            assert abs(ci.high[row["i"], row["j"]] - row["ci_high"]) < 1e-8

        n = int(rng.integers(5, 41))
        x = rng.uniform(0.0, 10.0, size=n)
        y = 0.5 * x + rng.normal(0.0, 2.0, size=n)
        if rng.integers(2) == 0:
            x = np.round(x)
            y = np.round(y)
        if len(set(x.tolist())) < 2 or len(set(y.tolist())) < 2:
            continue
        rho, pval = stats.spearmanr(x, y)
        if not np.isfinite(rho):
            continue

        n_total = sum(len(g) for g in groups)
        return {
            "name": name,
            "groups": groups,
            "levene": {"w": float(lev.statistic), "p": float(lev.pvalue)},
            "anova": {
                "f": float(anova.statistic),
                "p": float(anova.pvalue),
                "df_between": k - 1,
                "df_within": n_total - k,
            },
            "kruskal": {"h": float(kr.statistic), "p": float(kr.pvalue)},
            "tukey": tukey,
            "dunnett_c": dunn,
            "spearman": {
                "x": x.tolist(),
                "y": y.tolist(),
                "rho": float(rho),
                "p": float(pval),
            },
        }


def srange_grid():
    entries = []
    for k in (2, 3, 5, 7, 10):
        for df in (2, 5, 10, 30, 120, 1000, 1e6):
            for q in (0.5, 1.5, 2.5, 3.5, 4.5, 6.0, 8.0):
                cdf = float(stats.studentized_range.cdf(q, k, df))
                entries.append({"q": q, "k": k, "df": df, "cdf": cdf})
    quantiles = []
    for k in (2, 3, 5, 7, 10):
        for df in (5, 30, 1000):
            for p in (0.9, 0.95):
                quantiles.append(
                    {
                        "p": p,
                        "k": k,
                        "df": df,
                        "q": float(stats.studentized_range.ppf(p, k, df)),
                    }
                )
    quantiles.append(
        {"p": 0.95, "k": 7, "df": 1e6, "q": float(stats.studentized_range.ppf(0.95, 7, 1e6))}
    )
    return {"cdf": entries, "quantile": quantiles}


def tail_grid(rng):
    entries = []
    for _ in range(20):
        t = float(rng.uniform(-4.0, 4.0))
        df = float(rng.integers(1, 200))
        entries.append(
            {"kind": "student_t", "stat": t, "df1": df, "df2": 0.0,
             "p": float(2 * stats.t.sf(abs(t), df))}
        )
    for _ in range(20):
        f = float(rng.uniform(0.01, 8.0))
        d1 = float(rng.integers(1, 40))
        d2 = float(rng.integers(1, 2000))
        entries.append(
            {"kind": "fisher_f", "stat": f, "df1": d1, "df2": d2,
             "p": float(stats.f.sf(f, d1, d2))}
        )
    for _ in range(20):
        df = float(rng.integers(1, 60))
        x = float(rng.uniform(0.01, 3.0) * df)
        entries.append(
            {"kind": "chi_square", "stat": x, "df1": df, "df2": 0.0,
             "p": float(stats.chi2.sf(x, df))}
        )
    for _ in range(10):
        z = float(rng.uniform(-6.0, 6.0))
        entries.append(
            {"kind": "std_normal", "stat": z, "df1": 0.0, "df2": 0.0,
             "p": float(stats.norm.sf(z))}
        )
    return entries


def named_fixtures():
    lev = stats.levene([1, 2, 3, 4], [1, 1, 5, 5], center="mean")
    anova = stats.f_oneway([1, 2, 3], [2, 3, 4], [3, 4, 5])
    groups = [
        [1.0, 1.2, 0.8, 1.1, 0.9],
        [2.0, 2.5, 1.5, 2.2, 1.8],
        [3.0, 4.0, 2.0, 3.5, 2.5],
    ]
    het = [
        [10.0, 10.1, 9.9, 10.05, 9.95, 10.02],
        [12.0, 14.0, 10.0, 13.0, 11.0, 12.5],
        [20.0, 26.0, 14.0, 23.0, 17.0, 20.5],
    ]
    lev_het = stats.levene(*[np.asarray(g) for g in het], center="mean")
    return {
        "levene_example": {"w": float(lev.statistic), "p": float(lev.pvalue)},
        "anova_example": {"f": float(anova.statistic), "p": float(anova.pvalue)},
        "tukey_balanced": tukey_kramer(groups, ALPHA),
        "tukey_balanced_groups": groups,
        "dunnett_het": dunnett_c(het, ALPHA),
        "dunnett_het_groups": het,
        "dunnett_het_levene": {"w": float(lev_het.statistic), "p": float(lev_het.pvalue)},
    }


def main():
    rng = np.random.default_rng(20100421)
    doc = {
        "alpha": ALPHA,
        "instances": [make_instance(rng, f"i{n:02d}") for n in range(N_INSTANCES)],
        "srange": srange_grid(),
        "tails": tail_grid(rng),
        "named": named_fixtures(),
    }
    json.dump(doc, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()

"""Reference statistics for the oracle fixtures.

Usage:
    cargo run -p tsdiag-core --example dump_fixtures -- /tmp/oracle
    python3 oracle.py /tmp/oracle

Uses statsmodels 0.14 and scipy 1.15. Phillips-Perron has no statsmodels
implementation, so it is written out below from the textbook Z_tau formula.
"""

import json
import sys
from pathlib import Path

import numpy as np
from scipy import stats
from statsmodels.stats.diagnostic import het_arch
from statsmodels.tsa.stattools import adfuller, kpss

SPECS = json.loads((Path(__file__).parent / "oracle_specs.json").read_text())


def schwert(n):
    return int(np.floor(12 * (n / 100) ** 0.25))


def newey_west(u, lags):
    n = len(u)
    s = u @ u / n
    for j in range(1, lags + 1):
        s += 2 * (1 - j / (lags + 1)) * (u[j:] @ u[:-j]) / n
    return s


def phillips_perron(y, trend):
    n = len(y)
    cols = [y[:-1], np.ones(n - 1)]
    if trend == "ct":
        cols.append(np.arange(1, n, dtype=float))
    x = np.column_stack(cols)
    lhs = y[1:]
    beta, *_ = np.linalg.lstsq(x, lhs, rcond=None)
    u = lhs - x @ beta
    nobs, k = x.shape
    s2 = u @ u / (nobs - k)
    se = np.sqrt(s2 * np.linalg.inv(x.T @ x)[0, 0])
    tau = (beta[0] - 1) / se
    gamma0 = u @ u / nobs
    lam2 = newey_west(u, int(np.floor(4 * (n / 100) ** (2 / 9))))
    lam = np.sqrt(lam2)
    return np.sqrt(gamma0 / lam2) * tau - 0.5 * (lam2 - gamma0) / lam * nobs * se / np.sqrt(s2)


def phase_groups(y, period):
    # Centred moving average; even periods use the 2 x period filter.
    if period % 2:
        w = np.ones(period) / period
    else:
        w = np.r_[0.5, np.ones(period - 1), 0.5] / period
    ma = np.convolve(y, w, mode="valid")
    half = period // 2
    t = np.arange(half, half + len(ma))
    d = y[t] - ma
    return [d[t % period == p] for p in range(period)]


def main(directory):
    out = {}
    for name in SPECS:
        data = np.loadtxt(Path(directory) / f"{name}.csv", delimiter=",", skiprows=1)
        y = data[:, 1]
        n = len(y)
        row = {}
        for trend in ("c", "ct"):
            res = adfuller(y, maxlag=schwert(n), regression=trend, autolag="AIC")
            row[f"adf_{trend}"] = res[0]
            row[f"adf_{trend}_lags"] = res[2]
            row[f"kpss_{trend}"] = kpss(y, regression=trend, nlags=schwert(n))[0]
            row[f"pp_{trend}"] = phillips_perron(y, trend)
        halves = np.array_split(y, 2)
        row["levene"] = stats.levene(*halves, center="median").statistic
        row["bartlett"] = stats.bartlett(*halves).statistic
        q = max(1, min(10, n // 20))
        row["arch_lm"] = het_arch(y - y.mean(), nlags=q)[0]
        row["kruskal_weekly"] = stats.kruskal(*phase_groups(y, 7)).statistic
        out[name] = row
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main(sys.argv[1])

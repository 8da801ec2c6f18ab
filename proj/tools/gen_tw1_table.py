#!/usr/bin/env python3
"""Offline generator for the GOE (order-1) Tracy-Widom CDF table.

Computes F1 from the Hastings-McLeod solution q of the Painleve II
equation q'' = s*q + 2*q^3 with q(s) ~ Ai(s) as s -> +inf:

    F2(s) = exp(-J(s)),            J(s) = int_s^inf (x - s) q(x)^2 dx
    F1(s) = sqrt(F2(s)) * exp(-I(s)/2),   I(s) = int_s^inf q(x) dx

The augmented system (q, q', I, K, J) with I' = -q, K' = -q^2, J' = -K
is integrated downward from s0 = 10 with DOP853 at tight tolerances.
Initial conditions use Airy identities:

    K(s) = Ai'(s)^2 - s*Ai(s)^2
    J(s) = (2*s^2*Ai(s)^2 - 2*s*Ai'(s)^2 - Ai(s)*Ai'(s)) / 3

Outputs (paths relative to the repository root):
  core/data/tw1_cdf.csv        -- shipped knot table (x, F)
  core/src/tw1_table_data.inc  -- same knots as a C++ initializer list
  tests/tw1_oracle.inc         -- off-knot oracle points + quantile anchors
                                  frozen into the test suite

Run from the repository root:  python3 tools/gen_tw1_table.py
"""

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq
from scipy.special import airy

S0 = 8.0           # start of backward integration (Ai regime)
X_LO = -9.0        # left end of the shipped table
X_HI = 7.5         # right end of the shipped table
STEP = 0.025       # knot spacing
RTOL = 1e-13
ATOL = 1e-16
SOURCE_TAG = (
    f"tw1-goe-painleve2-dop853;s0={S0};rtol={RTOL};atol={ATOL};"
    f"range={X_LO}:{X_HI}:{STEP}"
)


def rhs(s, y):
    q, qp, i_int, k_int, j_int = y
    return [qp, s * q + 2.0 * q**3, -q, -(q * q), -k_int]


def initial_conditions(s0):
    ai, aip, _, _ = airy(s0)
    # scipy's itairy loses accuracy for x near 8, so quadrature the Ai tail
    i0 = quad(lambda x: airy(x)[0], s0, s0 + 40.0, epsabs=1e-18)[0]
    k0 = aip**2 - s0 * ai**2
    j0 = (2.0 * s0**2 * ai**2 - 2.0 * s0 * aip**2 - ai * aip) / 3.0
    return [ai, aip, i0, k0, j0]


def main():
    sol = solve_ivp(
        rhs,
        (S0, X_LO - 0.5),
        initial_conditions(S0),
        method="DOP853",
        rtol=RTOL,
        atol=ATOL,
        dense_output=True,
    )
    assert sol.success, sol.message

    def f1(s):
        s = np.asarray(s, dtype=float)
        out = np.empty_like(s)
        for idx, sv in np.ndenumerate(s):
            if sv >= S0:
                out[idx] = 1.0
            else:
                _, _, i_int, _, j_int = sol.sol(sv)
                out[idx] = np.exp(-0.5 * i_int - 0.5 * j_int)
        return out if out.shape else float(out)

    # Sanity anchors: Hastings-McLeod value at 0 and classic GOE quantiles.
    q0 = sol.sol(0.0)[0]
    assert abs(q0 - 0.36706155154807806) < 5e-9, q0
    for prob, ref in [(0.95, 0.9793), (0.99, 2.0234), (0.995, 2.4224)]:
        s_hat = brentq(lambda s: f1(s) - prob, -5.0, 6.0, xtol=1e-12)
        assert abs(s_hat - ref) < 2e-4, (prob, s_hat, ref)

    # Moments (literature: mean -1.2065335746, var 1.607781034581).
    grid = np.linspace(-12.0, 9.0, 40001)
    dens = np.gradient(f1(np.clip(grid, X_LO - 0.4, S0 - 1e-9)), grid)
    mean = np.trapezoid(grid * dens, grid)
    var = np.trapezoid(grid**2 * dens, grid) - mean**2
    assert abs(mean - (-1.2065335746)) < 5e-4, mean
    assert abs(var - 1.607781034581) < 5e-3, var

    knots_x = np.arange(X_LO, X_HI + STEP / 2, STEP)
    knots_f = f1(knots_x)
    assert np.all(np.diff(knots_f) > 0), "CDF knots must be strictly increasing"
    assert knots_f[0] < 1e-6 and knots_f[-1] > 1.0 - 1e-6, "coverage"

    with open("core/data/tw1_cdf.csv", "w") as fh:
        fh.write(f"source_tag={SOURCE_TAG}\n")
        for x, f in zip(knots_x, knots_f):
            fh.write(f"{x:.17g},{f:.17g}\n")

    with open("core/src/tw1_table_data.inc", "w") as fh:
        fh.write("// Generated by tools/gen_tw1_table.py -- do not edit.\n")
        fh.write(f"// source_tag: {SOURCE_TAG}\n")
        for x, f in zip(knots_x, knots_f):
            fh.write(f"    {{{x:.17g}, {f:.17g}}},\n")

    # Off-knot oracle points for the interpolation-accuracy test, plus
    # upper-quantile anchors (gamma, s) with F1(s) = 1 - gamma.
    rng_lo, rng_hi = -8.2, 6.8
    offsets = np.linspace(rng_lo, rng_hi, 100) + STEP * 0.37
    oracle_f = f1(offsets)
    gammas = [0.5, 0.25, 0.1, 0.05, 0.01, 0.005, 0.001]
    with open("tests/tw1_oracle.inc", "w") as fh:
        fh.write("// Generated by tools/gen_tw1_table.py -- do not edit.\n")
        fh.write("// Off-knot (x, F1(x)) pairs from the Painleve II oracle.\n")
        fh.write("static const struct { double x, f; } kTw1OraclePoints[] = {\n")
        for x, f in zip(offsets, oracle_f):
            fh.write(f"    {{{x:.17g}, {f:.17g}}},\n")
        fh.write("};\n\n")
        fh.write("// (gamma, s) anchors with F1(s) = 1 - gamma.\n")
        fh.write("static const struct { double gamma, s; } kTw1QuantileAnchors[] = {\n")
        for g in gammas:
            s_hat = brentq(lambda s: f1(s) - (1.0 - g), -6.0, 7.0, xtol=1e-12)
            fh.write(f"    {{{g}, {s_hat:.17g}}},\n")
        fh.write("};\n")

    print(f"knots: {len(knots_x)}  F-range: [{knots_f[0]:.3e}, 1-{1-knots_f[-1]:.3e}]")
    print(f"q(0) = {q0:.12f}  mean = {mean:.6f}  var = {var:.6f}")
    for g in (0.05, 0.01, 0.005):
        s_hat = brentq(lambda s: f1(s) - (1.0 - g), -6.0, 7.0, xtol=1e-12)
        print(f"s({g}) = {s_hat:.6f}")


if __name__ == "__main__":
    main()

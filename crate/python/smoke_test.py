#!/usr/bin/env python3
"""Smoke test for the lindeberg_py extension module.

Build the module first:

    cargo build -p lindeberg-py --release

then run:

    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / "release" / "liblindeberg_py.so",
        ROOT / "target" / "debug" / "liblindeberg_py.so",
        ROOT / "target" / "release" / "liblindeberg_py.dylib",
        ROOT / "target" / "debug" / "liblindeberg_py.dylib",
    ]
    built = next((c for c in candidates if c.exists()), None)
    if built is None:
        sys.exit("build the extension first: cargo build -p lindeberg-py --release")
    staging = Path(tempfile.mkdtemp(prefix="lindeberg_py_"))
    suffix = ".so" if built.suffix == ".so" else ".so"  # CPython loads .so on mac too
    shutil.copy2(built, staging / f"lindeberg_py{suffix}")
    sys.path.insert(0, str(staging))
    import lindeberg_py

    return lindeberg_py


def approx(a, b, tol):
    assert abs(a - b) < tol, f"{a} vs {b} (tol {tol})"


def main():
    lp = load_module()

    # Named constants.
    c = lp.core_constants()
    approx(c["x0"], 5.487414, 1e-5)
    approx(c["kappa"], 0.5315, 1e-4)
    approx(c["gamma_star"], 0.5599, 1e-4)
    approx(c["x_phi"], 0.213105, 1e-6)
    approx(c["c_phi"], 0.54093, 1e-5)
    approx(c["p_phi"], 0.9565, 1e-4)
    approx(c["p0"], 0.6823, 1e-4)
    approx(c["gamma0"], 4.7010, 1e-3)
    approx(lp.gamma0(), c["gamma0"], 1e-12)

    # Special functions.
    approx(lp.std_normal_cdf(0.0), 0.5, 1e-15)
    approx(lp.std_normal_cdf(1.0), 0.8413447460685429, 1e-14)
    approx(lp.upper_gamma(1.0, 1.0), math.exp(-1.0), 1e-14)
    approx(lp.lower_gamma(1.0, 1.0), 1.0 - math.exp(-1.0), 1e-14)
    approx(lp.bessel_i0_scaled(1.0), 0.46575960759364043, 1e-13)
    assert lp.bessel_i0(0.0) == 1.0

    # Distance envelope and one-summand distance.
    approx(lp.psi(0.0), 0.5, 1e-15)
    approx(lp.psi_tilde(0.5), 0.3413447460685429, 1e-14)
    approx(lp.delta1(0.5), lp.psi_tilde(0.5), 1e-15)
    approx(lp.delta1(0.3), lp.delta1(0.7), 1e-15)

    # Distributions, convolution, and the exact distance.
    d = lp.Distribution.two_point(0.9)
    approx(d.mean(), 0.0, 1e-14)
    approx(d.variance(), 1.0, 1e-14)
    approx(d.tail_second_moment(2.0), 0.9, 1e-14)
    law = lp.convolve_iid(d, 1)
    approx(law.uniform_distance_to_normal(), lp.delta1(0.9), 1e-12)

    half = lp.Distribution.two_point(0.5)
    law4 = lp.convolve_iid(half, 4)
    assert law4.n == 4
    approx(law4.b_n, 2.0, 1e-14)
    probs = [p for (_, p) in law4.atoms()]
    approx(probs[0], 1 / 16, 1e-15)
    approx(probs[2], 6 / 16, 1e-15)

    # JSON round trip with the documented schema.
    parsed = lp.Distribution.from_json('{"atoms":[{"x":-1,"p":0.5},{"x":1,"p":0.5}]}')
    assert parsed.atoms() == half.atoms()

    # Fractions: brute force vs closed form.
    for (kind, g, eps, gamma, n) in [
        ("esseen", "gstar", 1.0, 1.0, 1),
        ("esseen", "g0", math.inf, 5.0, 1),
        ("rozovskii", "gc", math.inf, 2.0, 3),
        ("rozovskii", "g1", 1.7, 0.8, 5),
    ]:
        p = 0.8
        dd = lp.Distribution.two_point(p)
        fn = lp.esseen_fraction if kind == "esseen" else lp.rozovskii_fraction
        brute, _where = fn(dd, n, g, eps, gamma)
        closed = lp.two_point_fraction_closed_form(kind, g, p, n, eps, gamma)
        approx(brute, closed, 1e-12 * max(1.0, brute))

    # min(eps, 1/sqrt(n)) identity for the symmetric two-point law.
    v, _ = lp.esseen_fraction(half, 4, "gstar", 2.0, 1.0)
    approx(v, 0.5, 1e-13)
    approx(lp.lindeberg_fraction(half, 4, 0.25), 1.0, 1e-13)

    # Bounds.
    approx(lp.aex_upper_esseen(2.24, 1.0), 1.73996, 5e-5)
    approx(lp.aex_upper_rozovskii(1.21, 0.2), 1.93474, 5e-5)
    v, p_star = lp.abe_lower_esseen(1.0)
    approx(v, 0.4097321837023963, 1e-12)
    approx(p_star, math.sqrt(2.5) - 1.0, 1e-6)
    approx(lp.abe_lower_rozovskii(1.0, 1.0), 1.0 / math.sqrt(2.0 * math.pi), 1e-13)

    lows = lp.exact_constant_lower_bounds(1.0, 1.0)
    ce = next(b for b in lows if b["target"] == "ExactEsseenLower")
    assert ce["value"] > 0.5685
    approx(ce["witness_p"], 0.9058, 1e-3)

    assert len(lp.table3()) == 38
    assert len(lp.table4()) == 10

    # Error paths surface as ValueError.
    for bad in (lambda: lp.delta1(1.5), lambda: lp.upper_gamma(-1.0, 0.5), lambda: lp.Distribution.two_point(0.0)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("lindeberg_py smoke test: all checks passed")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Freeze the closed-form reference values used by the acceptance tests.

Every number is computed with mpmath at 40 digits straight from the closed
forms, independently of the Rust code:

  * reflectionless Pöschl-Teller partner, T = -(1 - ik)/(1 + ik)
  * super-Scarf partner 2 product formula, n = 2, l = 1
  * centrifugal zero mode |alpha2|^2, both from the Gamma-ratio formula and
    from direct quadrature of the spinor
  * scalar single-bound-state well: kappa_B, E_B, T(k) and |N1|^2
  * Nogami-Toyama ground state: squared norm of the unnormalized profile

    python3 tools/gen_oracles.py
"""

import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
OUT = Path(__file__).resolve().parent.parent / "crates/core/tests/data/oracles.json"


def cx(z):
    z = mp.mpc(z)
    return [float(z.real), float(z.imag)]


def poeschl_teller(lam=2, m=1):
    ks = [mp.mpf("0.2") + (mp.mpf(3) - mp.mpf("0.2")) * j / 9 for j in range(10)]
    rows = []
    for k in ks:
        e = mp.sqrt(m * m + lam * lam + k * k)
        t = -(1 - 1j * k) / (1 + 1j * k)
        rows.append({"k": float(k), "E": float(e), "T": cx(t)})
    return {"lambda": lam, "m": m, "eps": 0.1, "rows": rows}


def super_scarf(n=2, l=1, m=1):
    rows = []
    for k in [mp.mpf(v) for v in ("0.3", "0.7", "1.0", "1.6", "2.5")]:
        ik = 1j * k
        t = mp.mpc((-1) ** (n + l))
        for j in range(1, n + 1):
            t *= (j - ik) / (j + ik)
        for j in range(1, l + 1):
            h = j - mp.mpf(1) / 2
            t *= (h - ik) / (h + ik)
        rows.append({"k": float(k), "E": float(mp.sqrt(m * m + n * n + k * k)), "T2": cx(t)})
    return {"n": n, "l": l, "m": m, "rows": rows}


def centrifugal_zero_mode(c_prime=1, m=1, eps=mp.mpf("0.1")):
    beta = mp.sqrt(1 + 16 * c_prime * m)
    g = (1 - beta) / 2
    closed = eps**beta / (
        mp.sqrt(mp.pi)
        * (eps**2 * mp.gamma(beta / 2 - 1) / mp.gamma((beta - 1) / 2) + g * g / (4 * m * m) * mp.gamma(beta / 2) / mp.gamma((beta + 1) / 2))
    )

    def dens(x):
        z = mp.mpc(x, eps)
        return abs(z**g) ** 2 + abs(g * z ** (g - 1) / (2 * m)) ** 2

    quad = 1 / mp.quad(dens, [-mp.inf, -1, 0, 1, mp.inf])
    return {"c_prime": c_prime, "m": m, "eps": float(eps), "beta": float(beta), "alpha2_sq_closed": float(closed), "alpha2_sq_quad": float(quad)}


def scalar(c_s=1, m=1):
    # kappa_B = c_S m / sqrt(c_S^2 + 4), E_B = 2m / sqrt(c_S^2 + 4)
    kappa = mp.mpf(c_s * m) / mp.sqrt(c_s * c_s + 4)
    e_b = 2 * m / mp.sqrt(c_s * c_s + 4)
    rows = []
    for e in [mp.mpf(v) for v in ("1.2", "1.5", "2.0", "3.0")]:
        k = mp.sqrt(e * e - m * m)
        rows.append({"E": float(e), "T": cx((1j * k - kappa) / (1j * k + kappa))})
    eps = mp.mpf("0.3")
    n1 = mp.sin(kappa * eps) * mp.cos(kappa * eps) / (4 * eps)
    return {
        "c_s": c_s,
        "m": m,
        "kappa_b": float(kappa),
        "E_b": float(e_b),
        "eps_b": float((e_b**2 - m * m) / (2 * m)),
        "rows": rows,
        "n1_sq_eps": float(eps),
        "n1_sq": float(n1),
    }


def nogami_toyama(lam=2, eps=mp.mpf("0.1")):
    def psi(x):
        z = mp.mpc(x, eps)
        return 1 / (lam * mp.cosh(lam * z) - mp.tanh(z) * mp.sinh(lam * z))

    norm_sq = mp.quad(lambda x: abs(psi(x)) ** 2, [-mp.inf, -2, 0, 2, mp.inf])
    return {"lambda": lam, "eps": float(eps), "m": 1, "levels": [0.0, float(mp.mpf(lam * lam - 1) / 2)], "ground_norm_sq": float(norm_sq)}


def main():
    data = {
        "poeschl_teller": poeschl_teller(),
        "super_scarf": super_scarf(),
        "centrifugal_zero_mode": centrifugal_zero_mode(),
        "scalar": scalar(),
        "nogami_toyama": nogami_toyama(),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()

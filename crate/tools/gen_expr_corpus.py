#!/usr/bin/env python3
"""Generate the expression corpus used by the parser tests.

Each entry is a random expression in the DSL with a reference value from
mpmath at 50 digits. Expressions whose double-precision value (cmath, same
branch conventions) strays from the reference are dropped, so the corpus
only holds well-conditioned cases.

    python3 tools/gen_expr_corpus.py [--count 500] [--seed 20240611]
"""

import argparse
import cmath
import json
import random
import re
from pathlib import Path

import mpmath

mpmath.mp.dps = 50

FUNCS = ["exp", "ln", "sin", "cos", "sinh", "cosh", "tanh", "coth", "sqrt", "abs"]
PARAMS = ["a", "b", "c_1"]
OUT = Path(__file__).resolve().parent.parent / "crates/core/tests/data/expr_corpus.json"


class Reject(Exception):
    pass


def gen(rng, depth):
    if depth == 0 or rng.random() < 0.12:
        r = rng.random()
        if r < 0.35:
            return ("x",)
        if r < 0.6:
            return ("num", rng.choice([rng.randint(1, 9), round(rng.uniform(0.05, 5), rng.randint(1, 4))]))
        if r < 0.8:
            return ("param", rng.choice(PARAMS))
        return ("i",) if rng.random() < 0.6 else ("pi",)
    r = rng.random()
    if r < 0.15:
        return ("neg", gen(rng, depth - 1))
    if r < 0.45:
        return ("call", rng.choice(FUNCS), gen(rng, depth - 1))
    op = rng.choice("+-*/^")
    if op == "^":
        # small exponents keep magnitudes sane
        e = ("num", rng.choice([2, 3, -1, -2, 0.5, 1.5])) if rng.random() < 0.7 else gen(rng, 0)
        return ("bin", "^", gen(rng, depth - 1), e)
    return ("bin", op, gen(rng, depth - 1), gen(rng, depth - 1))


PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def prec(t):
    if t[0] == "bin":
        return PREC[t[1]]
    if t[0] == "neg":
        return 3
    return 5


def render(t, rng):
    """Source text with minimal parentheses plus random extra ones and spaces."""
    sp = lambda: " " if rng.random() < 0.3 else ""

    def wrap(child, need):
        s = render(child, rng)
        if prec(child) < need or rng.random() < 0.1:
            return "(" + sp() + s + sp() + ")"
        return s

    kind = t[0]
    if kind == "x":
        return "x"
    if kind == "i":
        return "i"
    if kind == "pi":
        return "pi"
    if kind == "param":
        return t[1]
    if kind == "num":
        return repr(t[1])
    if kind == "neg":
        return "-" + sp() + wrap(t[1], 3)
    if kind == "call":
        return t[1] + "(" + sp() + render(t[2], rng) + sp() + ")"
    op, a, b = t[1], t[2], t[3]
    p = PREC[op]
    if op == "^":
        # base must be atomic; the exponent may carry a sign
        return wrap(a, 5) + sp() + "^" + sp() + wrap(b, 3)
    return wrap(a, p) + sp() + op + sp() + wrap(b, p + 1)


def near_cut(z):
    return z.real < 0 and abs(z.imag) <= 1e-8 * abs(z)


def evaluate(t, x, env, lib):
    """Evaluate with either mpmath (lib='mp') or cmath (lib='c')."""
    m = lib == "mp"
    C = (lambda v: mpmath.mpc(v)) if m else complex
    kind = t[0]
    if kind == "x":
        return C(x)
    if kind == "i":
        return C(1j)
    if kind == "pi":
        return mpmath.mpc(mpmath.pi) if m else complex(cmath.pi)
    if kind == "param":
        return C(env[t[1]])
    if kind == "num":
        return C(t[1])
    if kind == "neg":
        return C(0) - evaluate(t[1], x, env, lib)
    if kind == "call":
        z = evaluate(t[2], x, env, lib)
        f = t[1]
        if abs(z) > 30 and f in ("exp", "sinh", "cosh", "sin", "cos"):
            raise Reject
        if f in ("ln", "sqrt") and (near_cut(complex(z)) or abs(z) < 1e-6):
            raise Reject
        if f == "abs":
            return C(abs(z))
        if f == "coth":
            s = mpmath.sinh(z) if m else cmath.sinh(z)
            if abs(s) < 1e-6:
                raise Reject
            return (mpmath.cosh(z) if m else cmath.cosh(z)) / s
        if f == "ln":
            return mpmath.log(z) if m else cmath.log(z)
        mod = mpmath if m else cmath
        return getattr(mod, f)(z)
    op = t[1]
    a = evaluate(t[2], x, env, lib)
    b = evaluate(t[3], x, env, lib)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if abs(b) < 1e-6:
            raise Reject
        return a / b
    # power: integer real exponents are repeated products, others exp(b ln a)
    if complex(b).imag == 0 and float(complex(b).real).is_integer() and abs(complex(b).real) <= 1024:
        n = int(complex(b).real)
        if n < 0 and abs(a) < 1e-6:
            raise Reject
        return a**n
    if abs(a) < 1e-6 or near_cut(complex(a)):
        raise Reject
    return (mpmath.exp(b * mpmath.log(a))) if m else cmath.exp(b * cmath.log(a))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=20240611)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = []
    tries = 0
    while len(out) < args.count:
        tries += 1
        tree = gen(rng, rng.randint(2, 5))
        src = render(tree, rng)
        x = round(rng.uniform(-2.0, 2.0), 6)
        env = {p: complex(round(rng.uniform(-2, 2), 3), round(rng.uniform(-1, 1), 3) if rng.random() < 0.4 else 0.0) for p in PARAMS}
        try:
            ref = evaluate(tree, x, env, "mp")
            dbl = evaluate(tree, x, env, "c")
        except (Reject, ZeroDivisionError, OverflowError, ValueError):
            continue
        ref = complex(ref)
        scale = max(1.0, abs(ref))
        if not (abs(ref) < 1e6) or abs(dbl - ref) > 1e-15 * scale:
            continue
        used = sorted(p for p in PARAMS if re.search(rf"\b{p}\b", src))
        out.append(
            {
                "src": src,
                "x": x,
                "bindings": {p: [env[p].real, env[p].imag] for p in used},
                "value": [ref.real, ref.imag],
            }
        )
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"seed": args.seed, "generator": "mpmath 50 digits", "cases": out}, indent=1) + "\n")
    print(f"wrote {len(out)} cases ({tries} tries) to {OUT}")


if __name__ == "__main__":
    main()

"""Regenerate the shipped algebra data files in src/cycord/data/.

Each shipped extension is monogenic with a power basis 1, theta, ...,
theta^(n-1), so the relative multiplication table and the matrix of the
automorphism are obtained by polynomial reduction mod the minimal polynomial.
The script recomputes everything symbolically with sympy, checks the
invariants (automorphism order, ring homomorphism property, numeric
embeddings along the automorphism orbit), and writes the JSON files.

Run from the repository root:  python tools/gen_algebra_specs.py
"""

from __future__ import annotations

import json
import math
import pathlib

import sympy

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "cycord" / "data"

X = sympy.Symbol("x")


def reduce_poly(poly: sympy.Poly, minpoly: sympy.Poly) -> list[int]:
    rem = (poly % minpoly).all_coeffs()[::-1]
    coeffs = [int(c) for c in rem]
    coeffs += [0] * (minpoly.degree() - len(coeffs))
    return coeffs


def build_spec(
    name: str,
    base_ring: str,
    minpoly_coeffs: list[int],
    sigma_poly_coeffs: list[int],
    u: str,
    theta_orbit: list[sympy.Expr],
    claims_division: bool,
    notes: str,
) -> dict:
    n = len(minpoly_coeffs) - 1
    minpoly = sympy.Poly(minpoly_coeffs[::-1], X)
    sigma_theta = sympy.Poly(sigma_poly_coeffs[::-1], X)

    # multiplication table of the power basis
    mult = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = sympy.Poly(X**(i + j), X)
            row.append(reduce_poly(prod, minpoly))
        mult.append(row)

    # sigma on each basis element: sigma(theta^j) = sigma(theta)^j
    sigma_cols = []
    power = sympy.Poly(1, X)
    for j in range(n):
        sigma_cols.append(reduce_poly(power, minpoly))
        power = (power * sigma_theta) % minpoly
    sigma_matrix = [[sigma_cols[j][r] for j in range(n)] for r in range(n)]

    # order of sigma must be exactly n
    current = sigma_theta
    for step in range(1, n + 1):
        is_identity = reduce_poly(current, minpoly) == reduce_poly(sympy.Poly(X, X), minpoly)
        if step < n:
            assert not is_identity, f"{name}: sigma has order < {n}"
        else:
            assert is_identity, f"{name}: sigma does not have order {n}"
        current = sympy.Poly(current.as_expr().subs(X, sigma_theta.as_expr()), X) % minpoly

    # embeddings in automorphism-orbit order: emb_j(theta) = emb_0(sigma^j(theta))
    assert len(theta_orbit) == n
    embeddings = []
    for t in theta_orbit:
        row = []
        for k in range(n):
            val = complex(sympy.N(t**k, 30))
            row.append([val.real, val.imag])
        embeddings.append(row)

    # each orbit value must be a root of the minimal polynomial
    for t in theta_orbit:
        val = complex(sympy.N(minpoly.as_expr().subs(X, t), 30))
        assert abs(val) < 1e-20, f"{name}: orbit value {t} is not a root"

    # orbit consistency: emb_{j+1}(theta) == emb_j(sigma(theta))
    for j in range(n):
        lhs = complex(sympy.N(theta_orbit[(j + 1) % n], 30))
        rhs = complex(sympy.N(sigma_theta.as_expr().subs(X, theta_orbit[j]), 30))
        assert abs(lhs - rhs) < 1e-18, f"{name}: embedding orbit out of order at {j}"

    def fmt(c: int) -> str:
        return str(c)

    return {
        "name": name,
        "base_ring": base_ring,
        "degree": n,
        "basis": ["1"] + [f"theta^{k}" if k > 1 else "theta" for k in range(1, n)],
        "min_poly": [fmt(c) for c in minpoly_coeffs],
        "mult_table": [[[fmt(c) for c in cell] for cell in row] for row in mult],
        "sigma_matrix": [[fmt(c) for c in entry] for entry in sigma_matrix],
        "embeddings": embeddings,
        "u": u,
        "claims_division": claims_division,
        "notes": notes,
    }


def main() -> None:
    two_pi = 2 * sympy.pi
    specs = [
        build_spec(
            name="golden_u_i",
            base_ring="gaussian",
            minpoly_coeffs=[-1, -1, 1],  # x^2 - x - 1
            sigma_poly_coeffs=[1, -1],   # sigma(theta) = 1 - theta
            u="i",
            theta_orbit=[(1 + sympy.sqrt(5)) / 2, (1 - sympy.sqrt(5)) / 2],
            claims_division=True,
            notes=(
                "Degree-2 extension of Q(i) generated by the golden ratio; "
                "u = i makes the algebra a division algebra (the Golden code algebra)."
            ),
        ),
        build_spec(
            name="golden_u_1pi",
            base_ring="gaussian",
            minpoly_coeffs=[-1, -1, 1],
            sigma_poly_coeffs=[1, -1],
            u="1+i",
            theta_orbit=[(1 + sympy.sqrt(5)) / 2, (1 - sympy.sqrt(5)) / 2],
            claims_division=True,
            notes=(
                "Same field as golden_u_i but with u = 1+i, so u generates the "
                "ramified prime above 2 and quotients by (1+i) become nilpotent."
            ),
        ),
        build_spec(
            name="q7_cubic",
            base_ring="eisenstein",
            minpoly_coeffs=[-1, -2, 1, 1],  # x^3 + x^2 - 2x - 1
            sigma_poly_coeffs=[-2, 0, 1],   # sigma(theta) = theta^2 - 2
            u="w",
            theta_orbit=[
                2 * sympy.cos(two_pi / 7),
                2 * sympy.cos(2 * two_pi / 7),
                2 * sympy.cos(4 * two_pi / 7),
            ],
            claims_division=True,
            notes=(
                "Degree-3 extension of Q(w) generated by 2cos(2pi/7); "
                "u = w. The automorphism doubles the cosine angle."
            ),
        ),
        build_spec(
            name="q15_quartic",
            base_ring="gaussian",
            minpoly_coeffs=[1, 4, -4, -1, 1],  # x^4 - x^3 - 4x^2 + 4x + 1
            sigma_poly_coeffs=[-2, 0, 1],      # sigma(theta) = theta^2 - 2
            u="i",
            theta_orbit=[
                2 * sympy.cos(two_pi / 15),
                2 * sympy.cos(2 * two_pi / 15),
                2 * sympy.cos(4 * two_pi / 15),
                2 * sympy.cos(8 * two_pi / 15),
            ],
            claims_division=True,
            notes=(
                "Degree-4 extension of Q(i) generated by 2cos(2pi/15); u = i."
            ),
        ),
        build_spec(
            name="gauss_over_Q",
            base_ring="rational",
            minpoly_coeffs=[1, 0, 1],  # x^2 + 1
            sigma_poly_coeffs=[0, -1],  # sigma(i) = -i
            u="-1",
            theta_orbit=[sympy.I, -sympy.I],
            claims_division=True,
            notes=(
                "Q(i) over Q with complex conjugation; u = -1 by default "
                "(override u to explore non-division cases such as u = 5)."
            ),
        ),
    ]
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for spec in specs:
        path = DATA_DIR / f"{spec['name']}.json"
        with open(path, "w") as fh:
            json.dump(spec, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()

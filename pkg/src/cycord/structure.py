"""Structure of the finite quotients Lambda/q^s Lambda.

Each quotient of the natural order by a prime power of the base ring falls
into one of six shapes, split along two axes: whether the prime is inert or
split in O_K, and whether the twisting unit u stays invertible in the
residue ring.  When u is invertible the quotient is a full matrix ring and
we produce an explicit isomorphism certificate:

* s = 1: solve a norm equation to replace z by an element y with y^n = 1,
  then send x to its multiplication action on the residue ring of O_K
  (`build_matrix_iso_s1`).
* s > 1: pull the matrix units of the s = 1 image back, lift them through
  the nilpotent kernel by idempotent refinement and corner corrections, and
  read matrix entries off the lifted units (`lift_matrix_iso_power`).

When u falls into the prime the quotient is never a matrix ring; instead its
two-sided ideals form a completely explicit lattice: a chain of powers of z
in the inert case, and a cyclic staircase of monomial ideals in the split
case (`enumerate_monomial_ideals`).

`verify_isomorphism` checks certificates against nothing but ring axioms:
exact spot products, a kernel rank over the prime field, cardinality count,
and bulk product checks run through numpy on the linearized tensors.  A
certificate is never trusted until it has survived this.
"""

from __future__ import annotations

import enum
import itertools
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .base_rings import BaseElement, ResidueTable, divides
from .errors import (
    IncompatibleAlgebras,
    LiftDivergence,
    TooLargeToEnumerate,
    UnsupportedCase,
    VerificationFailed,
    WrongCase,
    ZeroTarget,
)
from .extension import IdealSpec
from .order import AlgebraSpec
from .residue import (
    ENUM_LIMIT,
    FpView,
    GcaElement,
    QuotientIdeal,
    QuotientRing,
    ResidueElement,
    ResidueRing,
    Splitting,
    _prime_factors,
    factor_prime,
    fp_table_digits,
    ideal_elements,
    quotient_of,
    skew_poly_ideal_chain,
)

# Pair-product checks switch from all pairs to sampling above this count.
PAIR_EXHAUSTIVE_LIMIT = 1 << 18
# Sampled pair counts for the two verification modes.
PAIR_SAMPLE_EXHAUSTIVE = 100_000
PAIR_SAMPLE = 10_000
# Object-level (non-linearized) product checks per verification run.
SPOT_CHECKS = 200
# Largest component field scanned exhaustively in the norm-equation fallback.
NORM_SCAN_LIMIT = 1 << 16


class QuotientCase(enum.Enum):
    """The six classified shapes of Lambda/q^s Lambda for unramified q."""

    INERT_UNIT = "InertUnit"
    INERT_NILPOTENT = "InertNilpotent"
    INERT_UNIT_POWER = "InertUnitPower"
    SPLIT_UNIT = "SplitUnit"
    SPLIT_NILPOTENT = "SplitNilpotent"
    SPLIT_UNIT_POWER = "SplitUnitPower"


# -- matrix rings over a residue table ----------------------------------------------


class MatRing:
    """Square matrices over the residue ring O_F/(alpha^s), entries as table codes."""

    __slots__ = ("table", "n", "label")

    def __init__(self, table: ResidueTable, n: int, label: str | None = None):
        self.table = table
        self.n = n
        self.label = label or f"M_{n}(R_{table.size})"

    @property
    def cardinality(self) -> int:
        return self.table.size ** (self.n * self.n)

    def __eq__(self, other):
        return (
            isinstance(other, MatRing)
            and self.n == other.n
            and self.table.ring == other.table.ring
        )

    def __hash__(self):
        return hash((self.n, self.table.ring))

    def __repr__(self):
        return f"MatRing({self.label})"

    def element(self, entries) -> "MatElement":
        rows = tuple(tuple(int(c) for c in row) for row in entries)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise ValueError(f"expected a {self.n} x {self.n} matrix")
        return MatElement(self, rows)

    @property
    def zero(self) -> "MatElement":
        z = self.table.zero
        return MatElement(self, tuple((z,) * self.n for _ in range(self.n)))

    @property
    def one(self) -> "MatElement":
        return self.scalar(self.table.one)

    def scalar(self, code: int) -> "MatElement":
        z = self.table.zero
        return MatElement(
            self,
            tuple(
                tuple(code if r == c else z for c in range(self.n))
                for r in range(self.n)
            ),
        )

    def unit(self, i: int, j: int) -> "MatElement":
        """The matrix unit e_ij (single one at row i, column j)."""
        z = self.table.zero
        return MatElement(
            self,
            tuple(
                tuple(self.table.one if (r, c) == (i, j) else z
                      for c in range(self.n))
                for r in range(self.n)
            ),
        )


class MatElement:
    """Matrix over a residue table; entries are table codes."""

    __slots__ = ("ring", "entries")

    def __init__(self, ring: MatRing, entries):
        self.ring = ring
        self.entries = entries

    def _check(self, other):
        if not isinstance(other, MatElement) or other.ring != self.ring:
            raise IncompatibleAlgebras("matrices over different rings")

    def __add__(self, other):
        self._check(other)
        add = self.ring.table.add
        return MatElement(
            self.ring,
            tuple(
                tuple(add[a][b] for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __sub__(self, other):
        self._check(other)
        add, neg = self.ring.table.add, self.ring.table.neg
        return MatElement(
            self.ring,
            tuple(
                tuple(add[a][neg[b]] for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __neg__(self):
        neg = self.ring.table.neg
        return MatElement(
            self.ring, tuple(tuple(neg[a] for a in row) for row in self.entries)
        )

    def __mul__(self, other):
        self._check(other)
        n = self.ring.n
        add, mul = self.ring.table.add, self.ring.table.mul
        a, b = self.entries, other.entries
        out = []
        for r in range(n):
            row = []
            for c in range(n):
                acc = self.ring.table.zero
                for k in range(n):
                    acc = add[acc][mul[a[r][k]][b[k][c]]]
                row.append(acc)
            out.append(tuple(row))
        return MatElement(self.ring, tuple(out))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative matrix powers are not supported")
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, code: int) -> "MatElement":
        """Entrywise multiplication by a residue-table scalar."""
        mul = self.ring.table.mul
        return MatElement(
            self.ring,
            tuple(tuple(mul[code][a] for a in row) for row in self.entries),
        )

    def __eq__(self, other):
        return (
            isinstance(other, MatElement)
            and self.ring == other.ring
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    def encode(self) -> int:
        total = 0
        for row in reversed(self.entries):
            for c in reversed(row):
                total = total * self.ring.table.size + c
        return total

    def __str__(self):
        dec = self.ring.table.decode
        rows = ", ".join(
            "[" + ", ".join(str(dec(c)) for c in row) + "]" for row in self.entries
        )
        return f"[{rows}]"

    def __repr__(self):
        return f"<{self} in {self.ring.label}>"


class MatFpView:
    """F_p digit coordinates for a matrix ring of prime characteristic."""

    __slots__ = ("ring", "p", "k", "dim", "_digits", "_code_of", "_tensor")

    def __init__(self, ring: MatRing):
        self.ring = ring
        self.p, self.k, self._digits, self._code_of = fp_table_digits(ring.table)
        self.dim = ring.n * ring.n * self.k
        self._tensor = None

    def digits(self, m: MatElement) -> tuple[int, ...]:
        out = []
        for row in m.entries:
            for code in row:
                out.extend(self._digits[code])
        return tuple(out)

    def element(self, digs) -> MatElement:
        digs = tuple(int(d) % self.p for d in digs)
        n, k = self.ring.n, self.k
        pos = 0
        rows = []
        for _ in range(n):
            row = []
            for _ in range(n):
                row.append(self._code_of[digs[pos:pos + k]])
                pos += k
            rows.append(tuple(row))
        return MatElement(self.ring, tuple(rows))

    def basis_elements(self) -> list[MatElement]:
        out = []
        for a in range(self.dim):
            digs = [0] * self.dim
            digs[a] = 1
            out.append(self.element(digs))
        return out

    def tensor(self) -> np.ndarray:
        if self._tensor is None:
            basis = self.basis_elements()
            d = self.dim
            T = np.zeros((d, d, d), dtype=np.int64)
            for a in range(d):
                for b in range(d):
                    T[a, b, :] = self.digits(basis[a] * basis[b])
            self._tensor = T
        return self._tensor

    def mul_digits(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        T = self.tensor()
        return np.einsum("na,nb,abd->nd", X, Y, T) % self.p


# -- F_p linear algebra helpers -----------------------------------------------------


def _row_reduce_mod_p(A: np.ndarray, p: int):
    """Return (rref matrix, pivot column list) of A over F_p."""
    R = A.copy() % p
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for rr in range(r, rows):
            if R[rr, c] % p:
                pivot = rr
                break
        if pivot is None:
            continue
        R[[r, pivot]] = R[[pivot, r]]
        R[r] = (R[r] * pow(int(R[r, c]), p - 2, p)) % p
        for rr in range(rows):
            if rr != r and R[rr, c]:
                R[rr] = (R[rr] - R[rr, c] * R[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def _rank_mod_p(A: np.ndarray, p: int) -> int:
    _, pivots = _row_reduce_mod_p(A, p)
    return len(pivots)


def _kernel_vector_mod_p(A: np.ndarray, p: int):
    """A nonzero kernel vector of A over F_p, or None if A is injective."""
    R, pivots = _row_reduce_mod_p(A, p)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    if not free:
        return None
    c = free[0]
    v = np.zeros(cols, dtype=np.int64)
    v[c] = 1
    for r, pc in enumerate(pivots):
        v[pc] = (-R[r, c]) % p
    return v


def _inverse_mod_p(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    aug = np.concatenate([A % p, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = _row_reduce_mod_p(aug, p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular mod p")
    return R[:, n:] % p


# -- norm equations in component fields ---------------------------------------------


class ComponentField:
    """One simple component v*S of a residue ring S = O_K/qO_K.

    v is a primitive idempotent acting as the component identity; sigma^step
    stabilizes the component and generates its automorphisms over the base
    residue field F_P, so the component is a field with P^f elements.
    """

    __slots__ = ("S", "v", "f", "step", "_elements", "_gen")

    def __init__(self, S: ResidueRing, v: ResidueElement, f: int, step: int):
        self.S = S
        self.v = v
        self.f = f
        self.step = step
        self._elements = None
        self._gen = None

    @property
    def size(self) -> int:
        return self.S.table.size ** self.f

    def elements(self) -> list[ResidueElement]:
        if self._elements is None:
            if self.S.size > NORM_SCAN_LIMIT:
                raise TooLargeToEnumerate(
                    f"component of a ring with {self.S.size} elements"
                )
            seen = {}
            for s in self.S.elements(limit=NORM_SCAN_LIMIT):
                x = self.S.mul(self.v, s)
                seen.setdefault(x.encode(), x)
            out = [seen[k] for k in sorted(seen)]
            assert len(out) == self.size, "component has unexpected cardinality"
            self._elements = out
        return self._elements

    def mul(self, x: ResidueElement, y: ResidueElement) -> ResidueElement:
        return self.S.mul(x, y)

    def pow(self, x: ResidueElement, e: int) -> ResidueElement:
        result = self.v
        base = x
        while e:
            if e & 1:
                result = self.S.mul(result, base)
            base = self.S.mul(base, base)
            e >>= 1
        return result

    def inv(self, x: ResidueElement) -> ResidueElement:
        if x.is_zero:
            raise ZeroDivisionError("zero has no inverse in the component field")
        return self.pow(x, self.size - 2)

    def norm(self, x: ResidueElement) -> ResidueElement:
        """Product of the f conjugates of x under sigma^step."""
        acc = self.v
        y = x
        for _ in range(self.f):
            acc = self.S.mul(acc, y)
            y = y.sigma(self.step)
        return acc

    def generator(self) -> ResidueElement:
        """Smallest multiplicative generator of the component, by encoding."""
        if self._gen is None:
            order = self.size - 1
            primes = _prime_factors(order) if order > 1 else []
            for x in self.elements():
                if x.is_zero:
                    continue
                if order == 1 or all(
                    self.pow(x, order // q) != self.v for q in primes
                ):
                    self._gen = x
                    break
            else:  # pragma: no cover
                raise WrongCase("component has no multiplicative generator")
        return self._gen

    def dlog(self, x: ResidueElement):
        """Discrete log of x base generator(), baby-step giant-step; None if absent."""
        if x.is_zero:
            return None
        g = self.generator()
        order = self.size - 1
        if order == 1:
            return 0 if x == self.v else None
        m = math.isqrt(order) + 1
        baby = {}
        cur = self.v
        for j in range(m):
            baby.setdefault(cur.encode(), j)
            cur = self.S.mul(cur, g)
        giant = self.inv(self.pow(g, m))
        cur = x
        for i in range(m + 1):
            j = baby.get(cur.encode())
            if j is not None:
                return (i * m + j) % order
            cur = self.S.mul(cur, giant)
        return None


def solve_norm_equation(component: ComponentField, target: ResidueElement) -> ResidueElement:
    """Find k in the component field whose norm to F_P equals target.

    On the cyclic unit group the norm is the power map e -> e * (Q-1)/(P-1),
    so the equation reduces to a linear congruence in discrete logs.  The
    returned solution is always re-checked against the actual twisted product
    of conjugates; if that ever disagreed we would fall back to an exhaustive
    scan rather than trust the power-map model.
    """
    if target.is_zero:
        raise ZeroTarget("norm equations are only posed for unit targets")
    Q = component.size
    P = component.S.table.size
    M = (Q - 1) // (P - 1)
    t = component.dlog(target)
    if t is not None:
        d = math.gcd(M, Q - 1)
        if t % d == 0:
            mod = (Q - 1) // d
            if mod == 1:
                e = 0
            else:
                e = (t // d) * pow(M // d, -1, mod) % mod
            k = component.pow(component.generator(), e)
            if component.norm(k) == target:
                return k
    for k in component.elements():  # pragma: no cover - fallback path
        if not k.is_zero and component.norm(k) == target:
            return k
    raise WrongCase("target is outside the image of the component norm")


# -- isomorphism certificates -------------------------------------------------------


@dataclass
class IsoCertificate:
    """Images of the quotient generators in a matrix ring, plus evaluation.

    The forward map is determined by the images of the residue power basis
    (sitting at z^0) and of z: it is additive, O_F/(alpha^s)-linear on
    coefficients, and multiplicative, so
    forward(sum_j s_j z^j) = sum_j lambda(s_j) * z_image^j.
    """

    source: QuotientRing
    target: MatRing
    basis_images: tuple
    z_image: MatElement
    witnesses: dict = field(default_factory=dict, repr=False)
    verified: bool = False

    def __post_init__(self):
        zp = [self.target.one]
        for _ in range(self.source.n - 1):
            zp.append(zp[-1] * self.z_image)
        self._zpowers = zp

    def forward(self, x: GcaElement) -> MatElement:
        if x.ring != self.source:
            raise IncompatibleAlgebras("element is not in the certificate's source")
        table = self.source.S.table
        acc = self.target.zero
        for j, s in enumerate(x.zcoords):
            lam = self.target.zero
            for i, code in enumerate(s.codes):
                if code != table.zero:
                    lam = lam + self.basis_images[i].scale(code)
            acc = acc + lam * self._zpowers[j]
        return acc


def _mult_matrix(mat: MatRing, S: ResidueRing, s: ResidueElement) -> MatElement:
    """Matrix of multiplication by s on S, columns = coordinates of s * b_c."""
    cols = [S.mul(s, S.basis(c)).codes for c in range(S.n)]
    return mat.element(
        [[cols[c][r] for c in range(S.n)] for r in range(S.n)]
    )


def build_matrix_iso_s1(algebra: AlgebraSpec, ideal: IdealSpec) -> IsoCertificate:
    """Certificate Lambda/q Lambda = M_n(F_P) when u is a unit mod q.

    Solves the norm equation N(k) = 1/u in the first component field, sets
    w = k on that component and 1 elsewhere, and replaces z by y = w z which
    satisfies y^n = 1.  The quotient then acts on S = O_K/qO_K by
    multiplication and sigma, which is everything M_n(F_P) has.
    """
    if ideal.s != 1:
        raise WrongCase("expected a prime ideal, not a proper power")
    Q = quotient_of(algebra, ideal)
    S = Q.S
    table = S.table
    n = Q.n
    ucode = table.encode(algebra.u)
    if table.inv[ucode] is None:
        raise WrongCase("u is not a unit modulo the prime")
    split = factor_prime(algebra.ext, ideal.alpha)
    v1 = split.idempotents[0]
    comp = ComponentField(S, v1, split.f, split.g)
    target = v1 * table.decode(table.inv[ucode])
    k = solve_norm_equation(comp, target)
    rest = S.one - v1
    w = k + rest
    w_inv = comp.inv(k) + rest
    assert S.mul(w, w_inv) == S.one, "w is not invertible"
    y = Q.from_residue(w) * Q.z
    assert y ** n == Q.one, "y = w z does not have y^n = 1"

    mat = MatRing(table, n, label=f"M_{n}(F_{table.size})")
    T = mat.element([[S.sig[c][r] for c in range(n)] for r in range(n)])
    basis_images = tuple(_mult_matrix(mat, S, S.basis(i)) for i in range(n))
    z_image = _mult_matrix(mat, S, w_inv) * T

    # crossed-product relations, all exact
    assert T ** n == mat.one, "sigma matrix does not have order dividing n"
    for i in range(n):
        bi = S.basis(i)
        assert T * _mult_matrix(mat, S, bi) == _mult_matrix(mat, S, bi.sigma()) * T
    assert z_image ** n == mat.scalar(ucode), "z image does not satisfy z^n = u"

    cert = IsoCertificate(
        source=Q,
        target=mat,
        basis_images=basis_images,
        z_image=z_image,
        witnesses={"w": Q.from_residue(w), "y": y, "norm_solution": k},
    )
    assert cert.forward(Q.one) == mat.one
    assert cert.forward(y) == T
    return cert


def _lift_idempotent(x: GcaElement, s: int) -> GcaElement:
    """Refine x to an exact idempotent; its reduction mod q must already be one."""
    for _ in range(s + 2):
        if x * x == x:
            return x
        x2 = x * x
        x = 3 * x2 - 2 * (x2 * x)
    raise LiftDivergence("idempotent refinement did not stabilize")


def lift_matrix_iso_power(algebra: AlgebraSpec, ideal: IdealSpec) -> IsoCertificate:
    """Certificate Lambda/q^s Lambda = M_n(O_F/q^s) for s > 1, u a unit mod q.

    The kernel of reduction to the s = 1 quotient is nilpotent, so the
    matrix units of the s = 1 image lift: diagonal idempotents by the
    3e^2 - 2e^3 refinement inside shrinking corners, off-diagonal units by
    correcting one factor of each e_1j, e_j1 pair with the inverse of their
    product on the corner (a finite geometric series).  Matrix entries of
    the lifted map are read off by corner extraction.
    """
    if ideal.s < 2:
        raise WrongCase("expected a proper prime power")
    cert1 = build_matrix_iso_s1(algebra, IdealSpec(alpha=ideal.alpha, s=1))
    Q1 = cert1.source
    Qs = quotient_of(algebra, ideal)
    S = Qs.S
    table = S.table
    n = Qs.n

    # pull the s = 1 matrix units back through the linear inverse of cert1
    sview = FpView(Q1)
    tview = MatFpView(cert1.target)
    p = sview.p
    Phi = np.zeros((tview.dim, sview.dim), dtype=np.int64)
    for a, e in enumerate(sview.basis_elements()):
        Phi[:, a] = tview.digits(cert1.forward(e))
    try:
        Phi_inv = _inverse_mod_p(Phi, p)
    except ValueError as exc:  # pragma: no cover - cert1 is checked at build
        raise VerificationFailed("s = 1 certificate is not bijective") from exc
    ebar = {}
    for i in range(n):
        for j in range(n):
            digs = (Phi_inv @ np.array(tview.digits(cert1.target.unit(i, j)))) % p
            ebar[(i, j)] = sview.element(digs)

    def up(x1: GcaElement) -> GcaElement:
        return Qs.reduce(Q1.lift(x1))

    def down(xs: GcaElement) -> GcaElement:
        return Q1.reduce(Qs.lift(xs))

    # diagonal idempotents, lifted inside shrinking corners so they stay orthogonal
    es = []
    corner = Qs.one
    for i in range(n - 1):
        x = corner * up(ebar[(i, i)]) * corner
        x = _lift_idempotent(x, ideal.s)
        if down(x) != ebar[(i, i)]:
            raise LiftDivergence("lifted idempotent left its reduction class")
        es.append(x)
        corner = corner - x
    if corner * corner != corner or down(corner) != ebar[(n - 1, n - 1)]:
        raise LiftDivergence("final corner idempotent is inconsistent")
    es.append(corner)

    units = [[Qs.zero] * n for _ in range(n)]
    units[0][0] = es[0]
    for j in range(1, n):
        units[j][j] = es[j]
        a = es[0] * up(ebar[(0, j)]) * es[j]
        b = es[j] * up(ebar[(j, 0)]) * es[0]
        t = a * b
        delta = es[0] - t
        inv = es[0]
        term = es[0]
        for _ in range(ideal.s):
            term = term * delta
            inv = inv + term
        if t * inv != es[0] or inv * t != es[0]:
            raise LiftDivergence("corner product is not invertible")
        units[0][j] = a
        units[j][0] = b * inv
    for i in range(1, n):
        for j in range(1, n):
            if i != j:
                units[i][j] = units[i][0] * units[0][j]

    # exact matrix-unit relations
    total = Qs.zero
    for i in range(n):
        total = total + units[i][i]
    if total != Qs.one:
        raise LiftDivergence("lifted diagonal units do not sum to 1")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    prod = units[i][j] * units[k][l]
                    expect = units[i][l] if j == k else Qs.zero
                    if prod != expect:
                        raise LiftDivergence(
                            f"matrix unit relation e{i}{j} e{k}{l} failed"
                        )

    # corner extraction: e_1k x e_l1 = r * e_11 with r in O_F/(alpha^s)
    e00 = units[0][0]
    flat00 = [code for s_ in e00.zcoords for code in s_.codes]
    pos = next(
        (idx for idx, c in enumerate(flat00) if table.inv[c] is not None), None
    )
    if pos is None:
        raise LiftDivergence("corner idempotent has no unit coordinate")
    inv0 = table.inv[flat00[pos]]

    def extract(c: GcaElement) -> int:
        ccode = [code for s_ in c.zcoords for code in s_.codes][pos]
        r = table.mul[ccode][inv0]
        if c != e00 * table.decode(r):
            raise VerificationFailed("corner element is not a scalar multiple of e11")
        return r

    mat = MatRing(
        table,
        n,
        label=f"M_{n}({table.ring.base.kind.value} mod {ideal})",
    )

    def phi(x: GcaElement) -> MatElement:
        return mat.element(
            [
                [extract(units[0][r] * x * units[c][0]) for c in range(n)]
                for r in range(n)
            ]
        )

    basis_images = tuple(phi(Qs.from_residue(S.basis(i))) for i in range(n))
    z_image = phi(Qs.z)
    assert basis_images[0] == mat.one, "1 must map to the identity"
    assert z_image ** n == mat.scalar(table.encode(algebra.u))

    cert = IsoCertificate(
        source=Qs,
        target=mat,
        basis_images=basis_images,
        z_image=z_image,
        witnesses={
            "matrix_units": tuple(tuple(row) for row in units),
            "s1_certificate": cert1,
        },
    )
    # the linear evaluation must agree with direct corner extraction
    rng = random.Random(7)
    for _ in range(20):
        x = Qs.random_element(rng)
        if cert.forward(x) != phi(x):
            raise VerificationFailed("linear evaluation disagrees with extraction")
    return cert


# -- monomial ideals in the split nilpotent case ------------------------------------


def stairwell_contains(anchor, probe, g: int, n: int) -> bool:
    """Is the monomial v_p z^q in the two-sided ideal generated by v_i z^j?

    Components are indexed 1..g cyclically (v_{p+g} = v_p), powers 0..n-1.
    Multiplying v_i z^j by z on the left moves to v_{i+1} z^{j+1}, so the
    ideal reaches (p, q) exactly when q >= j + ((p - i) mod g).
    """
    i, j = anchor
    p, q = probe
    if not 0 <= q < n:
        return False
    d = (p - i) % g
    return j + d <= q


@dataclass(frozen=True)
class MonomialIdeal:
    """A two-sided ideal generated by monomials v_i z^j.

    generators holds the minimal generating monomials sorted by (i, j);
    thresholds[p-1] is the least q with v_p z^q in the ideal (n if none).
    """

    g: int
    n: int
    generators: tuple
    thresholds: tuple

    @property
    def symbol_count(self) -> int:
        """Number of monomials in the ideal (its component-field dimension)."""
        return sum(self.n - t for t in self.thresholds)

    def contains_monomial(self, p: int, q: int) -> bool:
        return any(stairwell_contains(a, (p, q), self.g, self.n) for a in self.generators)

    def __str__(self):
        if not self.generators:
            return "0"
        if all(t == 0 for t in self.thresholds):
            return "ring"
        parts = []
        for i, j in self.generators:
            if j == 0:
                parts.append(f"v{i}")
            elif j == 1:
                parts.append(f"v{i} z")
            else:
                parts.append(f"v{i} z^{j}")
        return "<" + ", ".join(parts) + ">"


def enumerate_monomial_ideals(algebra: AlgebraSpec, ideal: IdealSpec) -> list[MonomialIdeal]:
    """All two-sided ideals of Lambda/q Lambda when u lies in the split prime q.

    Every ideal is spanned by the monomials v_p z^q it contains, and the set
    of thresholds t_p = min q is an arbitrary vector in {0..n}^g subject to
    the cyclic staircase condition t_{p+1} <= t_p + 1.  Enumerating those
    vectors directly produces each ideal exactly once; minimal generators
    are the anchors no other anchor's stairwell covers.
    """
    if ideal.s != 1:
        raise WrongCase("monomial lattices are classified at s = 1 only")
    Q = quotient_of(algebra, ideal)
    if not Q.ubar.is_zero:
        raise WrongCase("u is a unit modulo the prime; the quotient is a matrix ring")
    split = factor_prime(algebra.ext, ideal.alpha)
    g, n = split.g, Q.n
    out = []
    for t in itertools.product(range(n + 1), repeat=g):
        if any(t[(p + 1) % g] > t[p] + 1 for p in range(g)):
            continue
        anchors = [(p + 1, t[p]) for p in range(g) if t[p] < n]
        minimal = tuple(
            sorted(
                a
                for a in anchors
                if not any(
                    b != a and stairwell_contains(b, a, g, n) for b in anchors
                )
            )
        )
        out.append(
            MonomialIdeal(g=g, n=n, generators=minimal, thresholds=tuple(t))
        )
    out.sort(key=lambda m: (-m.symbol_count, m.generators))
    return out


def monomial_generator_elements(Q: QuotientRing, split: Splitting, mi: MonomialIdeal):
    """The generators of a monomial ideal as actual quotient elements."""
    out = []
    for i, j in mi.generators:
        out.append(Q.from_residue(split.idempotents[i - 1]) * Q.z ** j)
    return tuple(out)


# -- verification -------------------------------------------------------------------


class VerifyMode(enum.Enum):
    EXHAUSTIVE = "Exhaustive"
    SAMPLED = "Sampled"


@dataclass(frozen=True)
class VerificationReport:
    """What a certificate check actually looked at."""

    mode: VerifyMode
    source_cardinality: int
    target_cardinality: int
    rank: int
    dim: int
    elements_enumerated: int
    pairs_checked: int
    pairs_exhaustive: bool
    exact_spot_checks: int
    passed: bool


def _fail(message: str, pair=None):
    err = VerificationFailed(message)
    err.pair = pair
    raise err


def verify_isomorphism(
    cert: IsoCertificate,
    mode: VerifyMode = VerifyMode.EXHAUSTIVE,
    seed: int = 0,
) -> VerificationReport:
    """Check an isomorphism certificate against ring axioms only.

    Always performed: exact object-level product/sum spot checks, agreement
    of the exact map with its F_p linearization, kernel rank of the
    linearization (injectivity), and cardinality equality (surjectivity).
    Exhaustive mode additionally maps every element and insists the images
    are pairwise distinct, and checks every product pair when there are at
    most PAIR_EXHAUSTIVE_LIMIT of them; otherwise products are sampled.
    Raises VerificationFailed carrying a counterexample pair.
    """
    Q = cert.source
    N = Q.cardinality
    if mode is VerifyMode.EXHAUSTIVE and N > ENUM_LIMIT:
        raise TooLargeToEnumerate(
            f"{N} elements exceed the exhaustive verification limit {ENUM_LIMIT}"
        )
    sview = FpView(Q)
    tview = MatFpView(cert.target)
    p = sview.p
    dim = sview.dim

    Phi = np.zeros((tview.dim, dim), dtype=np.int64)
    for a, e in enumerate(sview.basis_elements()):
        Phi[:, a] = tview.digits(cert.forward(e))

    # exact spot checks: the certificate map itself, no linearization shortcuts
    rng = random.Random(seed)
    spots = 0
    for _ in range(SPOT_CHECKS):
        x = Q.random_element(rng)
        y = Q.random_element(rng)
        fx, fy = cert.forward(x), cert.forward(y)
        if cert.forward(x + y) != fx + fy:
            _fail(f"additivity fails at x = {x}, y = {y}", (x, y))
        if cert.forward(x * y) != fx * fy:
            _fail(f"multiplicativity fails at x = {x}, y = {y}", (x, y))
        lin = (Phi @ np.array(sview.digits(x))) % p
        if tuple(int(v) for v in lin) != tview.digits(fx):
            _fail(f"linearization disagrees with the map at x = {x}", (x, x))
        spots += 1

    rank = _rank_mod_p(Phi, p)
    if rank < dim:
        kv = _kernel_vector_mod_p(Phi, p)
        xk = sview.element(kv)
        _fail(f"map has nontrivial kernel containing {xk}", (xk, Q.zero))

    tcard = cert.target.cardinality
    if N != tcard:
        _fail(f"cardinalities differ: source {N}, target {tcard}")

    elements_enumerated = 0
    E = None
    if mode is VerifyMode.EXHAUSTIVE:
        assert N == p ** dim, "prime-characteristic digit count must match"
        codes = np.arange(N, dtype=np.int64)
        E = np.stack(
            [(codes // p ** a) % p for a in range(dim)], axis=1
        )
        imgs = (E @ Phi.T) % p
        uniq, inverse = np.unique(imgs, axis=0, return_inverse=True)
        if uniq.shape[0] != N:
            order = np.argsort(inverse, kind="stable")
            dup = next(
                (order[i], order[i + 1])
                for i in range(N - 1)
                if inverse[order[i]] == inverse[order[i + 1]]
            )
            x1 = sview.element(E[dup[0]])
            x2 = sview.element(E[dup[1]])
            _fail(f"two elements share an image: {x1} and {x2}", (x1, x2))
        elements_enumerated = N

    # bulk product checks over the linearized tensors
    Ts = sview.tensor()
    pairs_exhaustive = mode is VerifyMode.EXHAUSTIVE and N * N <= PAIR_EXHAUSTIVE_LIMIT
    if pairs_exhaustive:
        idx = np.arange(N)
        X = E[np.repeat(idx, N)]
        Y = E[np.tile(idx, N)]
    else:
        count = PAIR_SAMPLE_EXHAUSTIVE if mode is VerifyMode.EXHAUSTIVE else PAIR_SAMPLE
        nprng = np.random.default_rng(seed)
        X = nprng.integers(0, p, size=(count, dim), dtype=np.int64)
        Y = nprng.integers(0, p, size=(count, dim), dtype=np.int64)
    prod_digits = np.einsum("na,nb,abd->nd", X, Y, Ts) % p
    lhs = (prod_digits @ Phi.T) % p
    fX = (X @ Phi.T) % p
    fY = (Y @ Phi.T) % p
    rhs = tview.mul_digits(fX, fY)
    bad = np.nonzero((lhs != rhs).any(axis=1))[0]
    if bad.size:
        b = int(bad[0])
        x = sview.element(X[b])
        y = sview.element(Y[b])
        _fail(f"product check fails at x = {x}, y = {y}", (x, y))

    cert.verified = True
    return VerificationReport(
        mode=mode,
        source_cardinality=N,
        target_cardinality=tcard,
        rank=rank,
        dim=dim,
        elements_enumerated=elements_enumerated,
        pairs_checked=int(X.shape[0]),
        pairs_exhaustive=pairs_exhaustive,
        exact_spot_checks=spots,
        passed=True,
    )


# -- classification -----------------------------------------------------------------


@dataclass
class StructureReport:
    """Classification of one quotient: case, target shape, proof artifacts."""

    case: QuotientCase
    quotient: QuotientRing
    splitting: Splitting
    target: str
    certificate: IsoCertificate | None
    ideal_lattice: list

    @property
    def cardinality(self) -> int:
        return self.quotient.cardinality

    def to_dict(self) -> dict:
        lattice = []
        for ideal in self.ideal_lattice:
            lattice.append(
                {
                    "label": ideal.label,
                    "size": None if ideal.elements is None else len(ideal.elements),
                    "generators": [str(x) for x in ideal.generators],
                }
            )
        cert = None
        if self.certificate is not None:
            cert = {
                "target": self.certificate.target.label,
                "z_image": str(self.certificate.z_image),
                "basis_images": [str(b) for b in self.certificate.basis_images],
                "verified": self.certificate.verified,
            }
        return {
            "case": self.case.value,
            "ideal": str(self.quotient.ideal),
            "g": self.splitting.g,
            "f": self.splitting.f,
            "cardinality": self.cardinality,
            "characteristic": self.quotient.char,
            "target": self.target,
            "certificate": cert,
            "ideal_lattice": lattice,
        }


def _safe_ideal_elements(Q: QuotientRing, generators):
    if Q.cardinality > ENUM_LIMIT:
        return None
    try:
        return ideal_elements(Q, generators)
    except (UnsupportedCase, TooLargeToEnumerate):
        return None


def _power_chain_lattice(Q: QuotientRing, ideal: IdealSpec) -> list[QuotientIdeal]:
    """The chain ring > qLambda > ... > q^s Lambda = 0 inside the quotient."""
    out = []
    power = ideal.alpha.ring.one
    for t in range(ideal.s + 1):
        gen = Q.one * power
        if t == 0:
            label = "ring"
        elif t == ideal.s:
            label = "0"
        else:
            label = f"q^{t}"
        elems = _safe_ideal_elements(Q, [gen])
        out.append(
            QuotientIdeal(
                label=label,
                generators=(gen,),
                elements=elems,
                note=f"image of q^{t} Lambda",
            )
        )
        power = power * ideal.alpha
    return out


def identify_quotient(algebra: AlgebraSpec, ideal: IdealSpec) -> StructureReport:
    """Classify Lambda/q^s Lambda and build its certificate or ideal lattice.

    Dispatches on whether q is inert or split (RamifiedPrime propagates from
    the splitting computation) and whether u is a unit mod q.  Unit cases
    come back with an unverified matrix-ring certificate; nilpotent cases
    come back with the full two-sided ideal lattice instead.
    """
    split = factor_prime(algebra.ext, ideal.alpha)
    Q = quotient_of(algebra, ideal)
    u_in_q = divides(ideal.alpha, algebra.u)
    g, n, s = split.g, Q.n, ideal.s

    if u_in_q and s > 1:
        raise UnsupportedCase(
            "u lies in q and s > 1: outside the classified cases"
        )

    if u_in_q:
        if g == 1:
            chain = skew_poly_ideal_chain(Q)
            ring_ideal = QuotientIdeal(
                label="ring",
                generators=(Q.one,),
                elements=_safe_ideal_elements(Q, [Q.one]),
                note="the whole quotient",
            )
            return StructureReport(
                case=QuotientCase.INERT_NILPOTENT,
                quotient=Q,
                splitting=split,
                target=f"F_{Q.S.size}[z; sigma] / (z^{n})",
                certificate=None,
                ideal_lattice=[ring_ideal] + chain,
            )
        monomials = enumerate_monomial_ideals(algebra, ideal)
        lattice = []
        for mi in monomials:
            gens = monomial_generator_elements(Q, split, mi)
            lattice.append(
                QuotientIdeal(
                    label=str(mi),
                    generators=gens,
                    elements=_safe_ideal_elements(Q, gens) if gens else frozenset({Q.zero.encode()}),
                    note=f"thresholds {mi.thresholds}",
                )
            )
        return StructureReport(
            case=QuotientCase.SPLIT_NILPOTENT,
            quotient=Q,
            splitting=split,
            target=(
                f"generalized cyclic algebra on {g} components "
                f"with {len(monomials)} monomial ideals"
            ),
            certificate=None,
            ideal_lattice=lattice,
        )

    if s == 1:
        cert = build_matrix_iso_s1(algebra, ideal)
        case = QuotientCase.INERT_UNIT if g == 1 else QuotientCase.SPLIT_UNIT
    else:
        cert = lift_matrix_iso_power(algebra, ideal)
        case = (
            QuotientCase.INERT_UNIT_POWER if g == 1 else QuotientCase.SPLIT_UNIT_POWER
        )
    return StructureReport(
        case=case,
        quotient=Q,
        splitting=split,
        target=cert.target.label,
        certificate=cert,
        ideal_lattice=_power_chain_lattice(Q, ideal),
    )

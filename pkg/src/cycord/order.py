"""The natural order of a cyclic algebra and its matrix embedding.

An algebra spec is (K/F, sigma, u): a cyclic extension together with a
nonzero u in O_F.  The natural order is the free left O_K-module with basis
1, z, ..., z^(n-1), where z*k = sigma(k)*z for k in O_K and z^n = u.  The
matrix embedding sends x = sum x_k z^k to the n x n matrix over O_K whose
column c holds sigma^c applied to the coefficients of x, with the wrapped
entries above the diagonal multiplied by u:

    M[r][c] = sigma^c(x[(r - c) mod n]) * (u if r < c else 1)

M(x) is the matrix of right multiplication by x on the module above, acting
on column coordinate vectors.  Right actions compose in reverse, so the
embedding satisfies M(x*y) == M(y)*M(x) exactly; the transposed map
x -> M(x).transpose() is multiplicative in the familiar order.  Determinants
do not see the difference.

The determinant of M(x) is fixed by sigma, hence lies in O_F; it is computed
exactly by cofactor expansion.
"""

from __future__ import annotations

import itertools
import json
from importlib import resources

from .base_rings import BaseElement
from .errors import IncompatibleAlgebras, NotInBaseRing
from .extension import ExtensionSpec, OKElement, extension_from_dict

SHIPPED_ALGEBRAS = (
    "golden_u_i",
    "golden_u_1pi",
    "q7_cubic",
    "q15_quartic",
    "gauss_over_Q",
)


class AlgebraSpec:
    """A cyclic algebra (K/F, sigma, u) restricted to its natural order."""

    __slots__ = ("ext", "u", "claims_division", "name", "notes")

    def __init__(
        self,
        ext: ExtensionSpec,
        u: BaseElement,
        claims_division: bool = False,
        name: str = "",
        notes: str = "",
    ):
        if u.ring != ext.base:
            raise IncompatibleAlgebras("u must live in the base ring of the extension")
        if u.is_zero:
            raise ValueError("u must be nonzero")
        self.ext = ext
        self.u = u
        self.claims_division = claims_division
        self.name = name or ext.name
        self.notes = notes

    @property
    def n(self) -> int:
        return self.ext.n

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraSpec)
            and self.ext == other.ext
            and self.u == other.u
        )

    def __hash__(self):
        return hash((self.ext, self.u.a, self.u.b))

    def __repr__(self):
        return f"AlgebraSpec({self.name}, u={self.u})"

    # -- constructors ----------------------------------------------------------

    def element(self, zcoords) -> "OrderElement":
        zcoords = tuple(zcoords)
        if len(zcoords) != self.n:
            raise ValueError(f"expected {self.n} z-coordinates")
        for c in zcoords:
            if not isinstance(c, OKElement) or c.ext != self.ext:
                raise IncompatibleAlgebras("z-coordinates must come from O_K")
        return OrderElement(self, zcoords)

    def from_ok(self, x: OKElement) -> "OrderElement":
        coords = [x] + [self.ext.zero] * (self.n - 1)
        return self.element(coords)

    @property
    def zero(self) -> "OrderElement":
        return self.from_ok(self.ext.zero)

    @property
    def one(self) -> "OrderElement":
        return self.from_ok(self.ext.one)

    @property
    def z(self) -> "OrderElement":
        coords = [self.ext.zero] * self.n
        coords[1 % self.n] = self.ext.one
        if self.n == 1:
            coords[0] = self.ext.from_base(self.u)
        return self.element(coords)

    # -- arithmetic ------------------------------------------------------------

    def mul(self, x: "OrderElement", y: "OrderElement") -> "OrderElement":
        n = self.n
        ext = self.ext
        out = [ext.zero] * n
        u_ok = ext.from_base(self.u)
        for i in range(n):
            xi = x.zcoords[i]
            if xi.is_zero:
                continue
            for j in range(n):
                yj = y.zcoords[j]
                if yj.is_zero:
                    continue
                term = xi * ext.sigma(yj, i)
                k = i + j
                if k >= n:
                    k -= n
                    term = term * u_ok
                out[k] = out[k] + term
        return OrderElement(self, tuple(out))

    # -- matrix embedding -------------------------------------------------------

    def matrix(self, x: "OrderElement") -> "OrderMatrix":
        """Matrix of right multiplication by x; M(x*y) == M(y)*M(x)."""
        n = self.n
        ext = self.ext
        u_ok = ext.from_base(self.u)
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                entry = ext.sigma(x.zcoords[(r - c) % n], c)
                if r < c:
                    entry = entry * u_ok
                row.append(entry)
            rows.append(tuple(row))
        return OrderMatrix(ext, tuple(rows))

    def reduced_det(self, x: "OrderElement") -> BaseElement:
        """Exact determinant of the matrix embedding, as an element of O_F."""
        det = self.matrix(x).det()
        if det.sigma() != det:
            raise NotInBaseRing(f"determinant {det} is not fixed by sigma")
        scalar = det.scalar_part()
        if scalar is None:
            raise NotInBaseRing(f"determinant {det} has nonzero coordinates beyond b0")
        return scalar

    def abs_det_sq(self, x: "OrderElement") -> int:
        """|det M(x)|^2 under the fixed complex embedding; exact integer."""
        return self.reduced_det(x).norm()

    def charpoly(self, x: "OrderElement") -> tuple[BaseElement, ...]:
        """Coefficients (low degree first) of det(t*I - M(x)); all in O_F."""
        ext = self.ext
        n = self.n
        mat = self.matrix(x)
        # polynomial entries: list of OKElement coefficients, low degree first
        entries = [
            [[-mat.entries[r][c], ext.one] if r == c else [-mat.entries[r][c]]
             for c in range(n)]
            for r in range(n)
        ]
        poly = _poly_matrix_det(ext, entries)
        coeffs = []
        for c in poly:
            scalar = c.scalar_part()
            if scalar is None or c.sigma() != c:
                raise NotInBaseRing(f"characteristic coefficient {c} is not in O_F")
            coeffs.append(scalar)
        return tuple(coeffs)


def _poly_add(ext, p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return out


def _poly_mul(ext, p, q):
    out = [ext.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def _poly_matrix_det(ext, entries):
    n = len(entries)
    if n == 1:
        return entries[0][0]
    total = [ext.zero]
    for c in range(n):
        minor = [
            [entries[r][cc] for cc in range(n) if cc != c]
            for r in range(1, n)
        ]
        term = _poly_mul(ext, entries[0][c], _poly_matrix_det(ext, minor))
        if c % 2:
            term = [-t for t in term]
        total = _poly_add(ext, total, term)
    return total


class OrderMatrix:
    """An n x n matrix over O_K (the image of the matrix embedding)."""

    __slots__ = ("ext", "entries")

    def __init__(self, ext: ExtensionSpec, entries):
        self.ext = ext
        self.entries = tuple(tuple(row) for row in entries)

    def __eq__(self, other):
        return (
            isinstance(other, OrderMatrix)
            and self.ext == other.ext
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    def __mul__(self, other):
        if not isinstance(other, OrderMatrix) or other.ext != self.ext:
            raise IncompatibleAlgebras("matrix operands do not match")
        n = len(self.entries)
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                acc = self.ext.zero
                for k in range(n):
                    acc = acc + self.entries[r][k] * other.entries[k][c]
                row.append(acc)
            rows.append(tuple(row))
        return OrderMatrix(self.ext, tuple(rows))

    def __add__(self, other):
        if not isinstance(other, OrderMatrix) or other.ext != self.ext:
            raise IncompatibleAlgebras("matrix operands do not match")
        rows = [
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)
        ]
        return OrderMatrix(self.ext, tuple(rows))

    def transpose(self) -> "OrderMatrix":
        n = len(self.entries)
        return OrderMatrix(
            self.ext,
            tuple(tuple(self.entries[r][c] for r in range(n)) for c in range(n)),
        )

    def det(self) -> OKElement:
        return _det_recursive(self.ext, [list(r) for r in self.entries])

    def numeric(self, embeddings_offset: int = 0) -> list[list[complex]]:
        """Entrywise image under the fixed embedding (index 0 by default)."""
        return [
            [e.embed(embeddings_offset) for e in row]
            for row in self.entries
        ]

    def __str__(self):
        return "[" + "; ".join(
            ", ".join(str(e) for e in row) for row in self.entries
        ) + "]"


def _det_recursive(ext, rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = ext.zero
    for c in range(n):
        pivot = rows[0][c]
        if pivot.is_zero:
            continue
        minor = [[rows[r][cc] for cc in range(n) if cc != c] for r in range(1, n)]
        term = pivot * _det_recursive(ext, minor)
        if c % 2:
            term = -term
        acc = acc + term
    return acc


class OrderElement:
    """Element sum x_k z^k of the natural order."""

    __slots__ = ("algebra", "zcoords")

    def __init__(self, algebra: AlgebraSpec, zcoords):
        self.algebra = algebra
        self.zcoords = tuple(zcoords)

    def _check(self, other):
        if not isinstance(other, OrderElement) or other.algebra != self.algebra:
            raise IncompatibleAlgebras("elements come from different algebras")

    def __add__(self, other):
        self._check(other)
        return OrderElement(
            self.algebra,
            tuple(a + b for a, b in zip(self.zcoords, other.zcoords)),
        )

    def __sub__(self, other):
        self._check(other)
        return OrderElement(
            self.algebra,
            tuple(a - b for a, b in zip(self.zcoords, other.zcoords)),
        )

    def __neg__(self):
        return OrderElement(self.algebra, tuple(-a for a in self.zcoords))

    def __mul__(self, other):
        if isinstance(other, (int, BaseElement)):
            return OrderElement(self.algebra, tuple(c * other for c in self.zcoords))
        if isinstance(other, OKElement):
            return self.algebra.mul(self, self.algebra.from_ok(other))
        self._check(other)
        return self.algebra.mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, BaseElement)):
            return self.__mul__(other)
        if isinstance(other, OKElement):
            return self.algebra.mul(self.algebra.from_ok(other), self)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined in the order")
        result = self.algebra.one
        square = self
        while e:
            if e & 1:
                result = result * square
            square = square * square
            e >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, OrderElement)
            and self.algebra == other.algebra
            and self.zcoords == other.zcoords
        )

    def __hash__(self):
        return hash(tuple(hash(c) for c in self.zcoords))

    def __bool__(self):
        return any(self.zcoords)

    @property
    def is_zero(self) -> bool:
        return not any(self.zcoords)

    def matrix(self) -> OrderMatrix:
        return self.algebra.matrix(self)

    def reduced_det(self) -> BaseElement:
        return self.algebra.reduced_det(self)

    def abs_det_sq(self) -> int:
        return self.algebra.abs_det_sq(self)

    def flat_ints(self) -> tuple[int, ...]:
        """All integer coordinates, flattened in (z-power, basis, a, b) order."""
        out = []
        for ok in self.zcoords:
            for c in ok.coords:
                out.append(c.a)
                out.append(c.b)
        return tuple(out)

    def __str__(self):
        parts = []
        for k, c in enumerate(self.zcoords):
            if c.is_zero:
                continue
            if k == 0:
                parts.append(f"{c}")
            else:
                zk = "z" if k == 1 else f"z^{k}"
                parts.append(f"({c})*{zk}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"<{self} in order({self.algebra.name})>"


# -- shipped data -----------------------------------------------------------


def load_algebra(source: str, u: str | BaseElement | None = None) -> AlgebraSpec:
    """Load an algebra spec from a shipped name or a JSON file path.

    `u` overrides the u recorded in the file (string forms like '5' or '1+i'
    are parsed in the base ring); overriding clears the division-algebra flag
    unless the override equals the recorded value.
    """
    if source in SHIPPED_ALGEBRAS:
        text = resources.files("cycord.data").joinpath(f"{source}.json").read_text()
    else:
        with open(source) as fh:
            text = fh.read()
    data = json.loads(text)
    ext = extension_from_dict(data)
    recorded_u = ext.base.parse(data["u"])
    claims = bool(data.get("claims_division", False))
    if u is None:
        u_val = recorded_u
    else:
        u_val = ext.base.parse(u) if isinstance(u, str) else u
        if u_val != recorded_u:
            claims = False
    return AlgebraSpec(
        ext,
        u_val,
        claims_division=claims,
        name=data.get("name", ""),
        notes=data.get("notes", ""),
    )


def box_values(bound: int) -> list[int]:
    """Integer digits ordered 0, 1, -1, 2, -2, ... out to the bound."""
    out = [0]
    for v in range(1, bound + 1):
        out.append(v)
        out.append(-v)
    return out


def box_elements(algebra: AlgebraSpec, bound: int) -> list[OrderElement]:
    """All order elements whose integer coordinates lie in [-bound, bound].

    The list is ordered lexicographically over the flattened coordinates with
    digit order 0, 1, -1, ...: the zero element comes first and elements with
    later or fewer nonzero digits come earlier.
    """
    ext = algebra.ext
    n = algebra.n
    rational = ext.base.kind.name == "RATIONAL"
    digits = box_values(bound)
    slots = n * n * (1 if rational else 2)
    out = []
    for combo in itertools.product(digits, repeat=slots):
        pos = 0
        zcoords = []
        for _ in range(n):
            coords = []
            for _ in range(n):
                if rational:
                    coords.append(ext.base.element(combo[pos]))
                    pos += 1
                else:
                    coords.append(ext.base.element(combo[pos], combo[pos + 1]))
                    pos += 2
            zcoords.append(ext.element(coords))
        out.append(algebra.element(zcoords))
    return out

"""Exact arithmetic in the three norm-Euclidean base rings Z, Z[i], Z[w].

Elements are stored as integer pairs (a, b) meaning a + b*delta, where delta
is 0 for Z, the imaginary unit i for the Gaussian integers, and the primitive
cube root of unity w = (-1 + sqrt(-3))/2 for the Eisenstein integers.  All
three rings are principal and carry a multiplicative Euclidean function
(the squared complex modulus), so gcds, modular inverses, and canonical
residues mod alpha^s are all computed exactly with integer arithmetic.

Residue rings O_F/(m) are materialized as lookup tables (`ResidueTable`) so
that the quotient layers above can run on small-integer indices instead of
object arithmetic.
"""

from __future__ import annotations

import enum
import re
from functools import lru_cache

from .errors import DivisionByZero, IncompatibleRings, UnsupportedSize

# Largest residue ring we are willing to materialize as tables.
TABLE_LIMIT = 4096


class RingKind(enum.Enum):
    RATIONAL = "Z"
    GAUSSIAN = "Z[i]"
    EISENSTEIN = "Z[w]"


_DELTA_COMPLEX = {
    RingKind.RATIONAL: 0.0 + 0.0j,
    RingKind.GAUSSIAN: 1.0j,
    RingKind.EISENSTEIN: -0.5 + 0.8660254037844386j,
}

_DELTA_NAME = {
    RingKind.RATIONAL: "",
    RingKind.GAUSSIAN: "i",
    RingKind.EISENSTEIN: "w",
}


class BaseRing:
    """One of the rings Z, Z[i], Z[w]; a stateless element factory."""

    __slots__ = ("kind",)

    def __init__(self, kind: RingKind):
        self.kind = kind

    def __eq__(self, other):
        return isinstance(other, BaseRing) and self.kind is other.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f"BaseRing({self.kind.value})"

    @property
    def delta_complex(self) -> complex:
        return _DELTA_COMPLEX[self.kind]

    def element(self, a: int, b: int = 0) -> "BaseElement":
        if self.kind is RingKind.RATIONAL and b != 0:
            raise ValueError("rational ring elements have no delta part")
        return BaseElement(self, int(a), int(b))

    @property
    def zero(self) -> "BaseElement":
        return BaseElement(self, 0, 0)

    @property
    def one(self) -> "BaseElement":
        return BaseElement(self, 1, 0)

    def units(self) -> tuple["BaseElement", ...]:
        if self.kind is RingKind.RATIONAL:
            raw = [(1, 0), (-1, 0)]
        elif self.kind is RingKind.GAUSSIAN:
            raw = [(1, 0), (-1, 0), (0, 1), (0, -1)]
        else:
            raw = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)]
        return tuple(BaseElement(self, a, b) for a, b in raw)

    def parse(self, text: str) -> "BaseElement":
        return parse_element(self, text)


RATIONAL = BaseRing(RingKind.RATIONAL)
GAUSSIAN = BaseRing(RingKind.GAUSSIAN)
EISENSTEIN = BaseRing(RingKind.EISENSTEIN)

_BY_NAME = {
    "rational": RATIONAL,
    "Z": RATIONAL,
    "gaussian": GAUSSIAN,
    "Z[i]": GAUSSIAN,
    "eisenstein": EISENSTEIN,
    "Z[w]": EISENSTEIN,
}


def ring_by_name(name: str) -> BaseRing:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown base ring {name!r}") from None


class BaseElement:
    """Immutable element a + b*delta of a base ring."""

    __slots__ = ("ring", "a", "b")

    def __init__(self, ring: BaseRing, a: int, b: int):
        self.ring = ring
        self.a = a
        self.b = b

    def _check(self, other: "BaseElement") -> None:
        if not isinstance(other, BaseElement) or other.ring != self.ring:
            raise IncompatibleRings(f"cannot combine {self!r} with {other!r}")

    def __add__(self, other):
        self._check(other)
        return BaseElement(self.ring, self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        self._check(other)
        return BaseElement(self.ring, self.a - other.a, self.b - other.b)

    def __neg__(self):
        return BaseElement(self.ring, -self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, int):
            return BaseElement(self.ring, self.a * other, self.b * other)
        if not isinstance(other, BaseElement):
            return NotImplemented  # let richer elements handle alpha * x
        self._check(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        kind = self.ring.kind
        if kind is RingKind.RATIONAL:
            return BaseElement(self.ring, a * c, 0)
        if kind is RingKind.GAUSSIAN:
            return BaseElement(self.ring, a * c - b * d, a * d + b * c)
        # w^2 = -1 - w
        return BaseElement(self.ring, a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative powers are not defined in the base ring")
        result = self.ring.one
        square = self
        e = exponent
        while e:
            if e & 1:
                result = result * square
            square = square * square
            e >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, BaseElement)
            and self.ring == other.ring
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.ring.kind, self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def conjugate(self) -> "BaseElement":
        kind = self.ring.kind
        if kind is RingKind.RATIONAL:
            return self
        if kind is RingKind.GAUSSIAN:
            return BaseElement(self.ring, self.a, -self.b)
        # conj(a + b*w) = a + b*w^2 = (a - b) - b*w
        return BaseElement(self.ring, self.a - self.b, -self.b)

    def norm(self) -> int:
        """Squared complex modulus: a^2, a^2+b^2, or a^2-ab+b^2."""
        kind = self.ring.kind
        if kind is RingKind.RATIONAL:
            return self.a * self.a
        if kind is RingKind.GAUSSIAN:
            return self.a * self.a + self.b * self.b
        return self.a * self.a - self.a * self.b + self.b * self.b

    def ideal_norm(self) -> int:
        """Number of residue classes mod self: |a| for Z, the norm otherwise."""
        if self.ring.kind is RingKind.RATIONAL:
            return abs(self.a)
        return self.norm()

    def is_unit(self) -> bool:
        return self.norm() == 1

    def complex(self) -> complex:
        return self.a + self.b * self.ring.delta_complex

    def __repr__(self):
        return f"<{self} in {self.ring.kind.value}>"

    def __str__(self):
        return format_element(self)


def format_element(x: BaseElement) -> str:
    name = _DELTA_NAME[x.ring.kind]
    if x.b == 0 or not name:
        return str(x.a)
    if x.b == 1:
        bpart = name
    elif x.b == -1:
        bpart = "-" + name
    else:
        bpart = f"{x.b}{name}"
    if x.a == 0:
        return bpart
    sign = "+" if x.b > 0 else ""
    return f"{x.a}{sign}{bpart}"


_ELEMENT_RE = re.compile(
    r"""^\s*
        (?P<first>[+-]?\s*(?:\d+|\d*\s*[iw]))
        \s*(?P<second>[+-]\s*(?:\d+|\d*\s*[iw]))?
        \s*$""",
    re.VERBOSE,
)


def parse_element(ring: BaseRing, text: str) -> BaseElement:
    """Parse strings like '2', '-1+i', '3-2w' into a base ring element."""
    match = _ELEMENT_RE.match(text)
    if not match:
        raise ValueError(f"cannot parse base ring element from {text!r}")
    a = 0
    b = 0
    symbol = _DELTA_NAME[ring.kind]
    for part in (match.group("first"), match.group("second")):
        if part is None:
            continue
        part = part.replace(" ", "")
        if part[-1] in "iw":
            if part[-1] != symbol:
                raise ValueError(f"symbol {part[-1]!r} does not belong to {ring.kind.value}")
            digits = part[:-1]
            if digits in ("", "+"):
                coeff = 1
            elif digits == "-":
                coeff = -1
            else:
                coeff = int(digits)
            b += coeff
        else:
            a += int(part)
    return ring.element(a, b)


def euclidean_divmod(x: BaseElement, m: BaseElement) -> tuple[BaseElement, BaseElement]:
    """Return (q, r) with x = q*m + r and norm(r) < norm(m).

    The quotient is the nearest-integer rounding of x/m coordinatewise; on
    half-integer ties every candidate rounding is tried and the remainder
    with the smallest (a, b) is kept, so the representative is canonical.
    """
    if x.ring != m.ring:
        raise IncompatibleRings("divmod operands come from different rings")
    if m.is_zero:
        raise DivisionByZero("division by zero in base ring")
    ring = x.ring
    num = x * m.conjugate()
    den = m.norm()

    def roundings(p: int) -> tuple[int, ...]:
        q0, rem = divmod(p, den)
        if 2 * rem < den:
            return (q0,)
        if 2 * rem > den:
            return (q0 + 1,)
        return (q0, q0 + 1)

    best = None
    for qa in roundings(num.a):
        for qb in roundings(num.b) if ring.kind is not RingKind.RATIONAL else (0,):
            q = ring.element(qa, qb)
            r = x - q * m
            key = (r.a, r.b)
            if best is None or key < best[0]:
                best = (key, q, r)
    _, q, r = best
    assert r.norm() < m.norm()
    return q, r


def divides(d: BaseElement, x: BaseElement) -> bool:
    if d.is_zero:
        return x.is_zero
    _, r = euclidean_divmod(x, d)
    return r.is_zero


def exact_div(x: BaseElement, d: BaseElement) -> BaseElement:
    q, r = euclidean_divmod(x, d)
    if not r.is_zero:
        raise ValueError(f"{x} is not divisible by {d}")
    return q


def xgcd(x: BaseElement, y: BaseElement) -> tuple[BaseElement, BaseElement, BaseElement]:
    """Extended gcd: returns (g, s, t) with s*x + t*y = g."""
    ring = x.ring
    r0, r1 = x, y
    s0, s1 = ring.one, ring.zero
    t0, t1 = ring.zero, ring.one
    while not r1.is_zero:
        q, r = euclidean_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def invert_mod(x: BaseElement, m: BaseElement) -> BaseElement:
    """Inverse of x modulo m; raises DivisionByZero when gcd(x, m) is not a unit."""
    g, s, _ = xgcd(x, m)
    if not g.is_unit():
        raise DivisionByZero(f"{x} is not invertible mod {m}")
    for unit in x.ring.units():
        if g * unit == x.ring.one:
            return euclidean_divmod(s * unit, m)[1]
    raise DivisionByZero(f"gcd {g} is not a unit")  # pragma: no cover


def _is_prime_int(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime_element(x: BaseElement) -> bool:
    """Exact primality in the base ring via the norm classification."""
    kind = x.ring.kind
    if kind is RingKind.RATIONAL:
        return _is_prime_int(abs(x.a))
    n = x.norm()
    if _is_prime_int(n):
        return True
    # inert rational primes: norm p^2 with x an associate of p
    root = int(round(n ** 0.5))
    while root * root < n:
        root += 1
    if root * root != n or not _is_prime_int(root):
        return False
    p = x.ring.element(root)
    if not (divides(p, x) and divides(x, p)):
        return False
    if kind is RingKind.GAUSSIAN:
        return root % 4 == 3
    return root % 3 == 2


class BaseQuotientRing:
    """The finite ring O_F/(m) with canonical euclidean representatives."""

    __slots__ = ("base", "modulus", "size", "_reps", "_table")

    def __init__(self, base: BaseRing, modulus: BaseElement):
        if modulus.ring != base:
            raise IncompatibleRings("modulus does not live in the stated ring")
        if modulus.is_zero:
            raise DivisionByZero("zero modulus")
        self.base = base
        self.modulus = modulus
        self.size = modulus.ideal_norm()
        self._reps = None
        self._table = None

    def __eq__(self, other):
        return (
            isinstance(other, BaseQuotientRing)
            and self.base == other.base
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.base, self.modulus.a, self.modulus.b))

    def __repr__(self):
        return f"BaseQuotientRing({self.base.kind.value} mod {self.modulus})"

    def reduce(self, x: BaseElement) -> BaseElement:
        _, r = euclidean_divmod(x, self.modulus)
        return r

    def elements(self) -> tuple[BaseElement, ...]:
        """All canonical representatives, sorted by (a, b)."""
        if self._reps is None:
            if self.size > TABLE_LIMIT:
                raise UnsupportedSize(
                    f"residue ring of size {self.size} exceeds the table limit {TABLE_LIMIT}"
                )
            reps = {self.reduce(pt) for pt in self._transversal()}
            assert len(reps) == self.size
            self._reps = tuple(sorted(reps, key=lambda e: (e.a, e.b)))
        return self._reps

    def _transversal(self):
        m = self.modulus
        if self.base.kind is RingKind.RATIONAL:
            return [self.base.element(a) for a in range(abs(m.a))]
        # Hermite form of the lattice spanned by m and m*delta gives an exact
        # box transversal {(a, b): 0 <= a < d0, 0 <= b < d1}.
        delta = self.base.element(0, 1)
        c1 = [m.a, m.b]
        c2v = m * delta
        c2 = [c2v.a, c2v.b]
        while c2[1] != 0:
            if c1[1] == 0 or (c2[1] != 0 and abs(c2[1]) < abs(c1[1])):
                c1, c2 = c2, c1
            if c1[1] != 0 and c2[1] != 0:
                q = c2[1] // c1[1]
                c2 = [c2[0] - q * c1[0], c2[1] - q * c1[1]]
        d0 = abs(c2[0])
        d1 = abs(c1[1])
        assert d0 * d1 == self.size
        return [
            self.base.element(a, b) for b in range(d1) for a in range(d0)
        ]

    def table(self) -> "ResidueTable":
        if self._table is None:
            self._table = ResidueTable(self)
        return self._table


class LocalBaseRing(BaseQuotientRing):
    """O_F/(alpha^s) for a prime alpha: the local base of a quotient algebra."""

    __slots__ = ("alpha", "s")

    def __init__(self, base: BaseRing, alpha: BaseElement, s: int = 1):
        if s < 1:
            raise ValueError("exponent s must be at least 1")
        if not is_prime_element(alpha):
            raise ValueError(f"{alpha} is not prime in {base.kind.value}")
        super().__init__(base, alpha**s)
        self.alpha = alpha
        self.s = s

    @property
    def residue_size(self) -> int:
        return self.size

    @property
    def is_field(self) -> bool:
        return self.s == 1

    def __repr__(self):
        return f"LocalBaseRing({self.base.kind.value} mod ({self.alpha})^{self.s})"


class ResidueTable:
    """Index-encoded arithmetic for a small residue ring.

    Elements are integers 0..size-1 indexing the sorted canonical
    representatives; addition and multiplication become list lookups, which
    keeps the quotient layers fast and hashable.
    """

    __slots__ = (
        "ring", "reps", "index", "add", "mul", "neg", "inv",
        "zero", "one", "char", "size",
    )

    def __init__(self, ring: BaseQuotientRing):
        reps = ring.elements()
        self.ring = ring
        self.reps = reps
        self.size = len(reps)
        self.index = {(e.a, e.b): i for i, e in enumerate(reps)}
        idx = self.index
        red = ring.reduce

        def code(e: BaseElement) -> int:
            return idx[(e.a, e.b)]

        self.add = [[code(red(x + y)) for y in reps] for x in reps]
        self.mul = [[code(red(x * y)) for y in reps] for x in reps]
        self.neg = [code(red(-x)) for x in reps]
        self.zero = code(red(ring.base.zero))
        self.one = code(red(ring.base.one))
        self.inv = [None] * self.size
        for i in range(self.size):
            row = self.mul[i]
            for j in range(self.size):
                if row[j] == self.one:
                    self.inv[i] = j
                    break
        # additive order of 1
        k, acc = 1, self.one
        while acc != self.zero:
            acc = self.add[acc][self.one]
            k += 1
        self.char = k

    def encode(self, x: BaseElement) -> int:
        r = self.ring.reduce(x)
        return self.index[(r.a, r.b)]

    def decode(self, i: int) -> BaseElement:
        return self.reps[i]

    def pow(self, i: int, e: int) -> int:
        result = self.one
        while e:
            if e & 1:
                result = self.mul[result][i]
            i = self.mul[i][i]
            e >>= 1
        return result


@lru_cache(maxsize=None)
def _cached_quotient(kind: RingKind, a: int, b: int) -> BaseQuotientRing:
    ring = BaseRing(kind)
    return BaseQuotientRing(ring, ring.element(a, b))


def quotient_ring(base: BaseRing, modulus: BaseElement) -> BaseQuotientRing:
    """Shared-instance constructor so table construction is amortized."""
    return _cached_quotient(base.kind, modulus.a, modulus.b)

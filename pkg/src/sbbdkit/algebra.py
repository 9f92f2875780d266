"""Small finite abelian groups and finite fields GF(p^k).

Group elements are tuples of residues.  A group ``Z_{n1} x ... x Z_{nk}``
enumerates its elements lexicographically with the first coordinate most
significant, so ``elements[0]`` is always the identity.

Field elements are coefficient tuples ``(c0, c1, ..., c_{k-1})`` standing for
``c0 + c1 x + ... + c_{k-1} x^{k-1}``.  A field enumerates its elements by the
integer ``c0 + c1 p + ... + c_{k-1} p^{k-1}``, so 0 comes first and 1 second.
The additive group of GF(p^k) is ``FiniteGroup((p,) * k)`` acting on the very
same tuples; only the enumeration order differs.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import StructureError

FIELD_ORDER_CAP = 2**16

Element = tuple


@dataclass(frozen=True)
class FiniteGroup:
    """The additive abelian group ``Z_{n1} x ... x Z_{nk}``."""

    structure: tuple[int, ...]

    def __post_init__(self):
        structure = tuple(int(n) for n in self.structure)
        if not structure or any(n < 1 for n in structure):
            raise StructureError(f"invalid cyclic orders {self.structure!r}")
        object.__setattr__(self, "structure", structure)

    @property
    def order(self) -> int:
        return math.prod(self.structure)

    @property
    def identity(self) -> Element:
        return (0,) * len(self.structure)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(n) for n in self.structure)))

    @cached_property
    def _positions(self) -> dict[Element, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def __len__(self):
        return self.order

    def __str__(self):
        return "x".join(f"Z{n}" for n in self.structure)

    def coerce(self, x) -> Element:
        """Return ``x`` as a canonical element tuple, accepting bare ints for cyclic groups."""
        if isinstance(x, (int, np.integer)) and len(self.structure) == 1:
            x = (int(x),)
        try:
            x = tuple(int(c) for c in x)
        except TypeError:
            raise StructureError(f"{x!r} is not an element of {self}") from None
        if len(x) != len(self.structure):
            raise StructureError(
                f"element {x} has {len(x)} coordinates, {self} needs {len(self.structure)}"
            )
        if any(not 0 <= c < n for c, n in zip(x, self.structure)):
            raise StructureError(f"element {x} out of range for {self}")
        return x

    def index(self, x) -> int:
        return self._positions[self.coerce(x)]

    def add(self, x, y) -> Element:
        x, y = self.coerce(x), self.coerce(y)
        return tuple((a + b) % n for a, b, n in zip(x, y, self.structure))

    def neg(self, x) -> Element:
        x = self.coerce(x)
        return tuple((-a) % n for a, n in zip(x, self.structure))

    def sub(self, x, y) -> Element:
        return self.add(x, self.neg(y))

    @cached_property
    def add_table(self) -> np.ndarray:
        """``add_table[i, j]`` is the index of ``elements[i] + elements[j]``."""
        coords = np.array(self.elements, dtype=np.int64).reshape(self.order, -1)
        mods = np.array(self.structure, dtype=np.int64)
        sums = (coords[:, None, :] + coords[None, :, :]) % mods
        weights = np.array(
            [math.prod(self.structure[i + 1:]) for i in range(len(self.structure))],
            dtype=np.int64,
        )
        table = sums @ weights
        table.setflags(write=False)
        return table

    @cached_property
    def neg_table(self) -> np.ndarray:
        """``neg_table[i]`` is the index of ``-elements[i]``."""
        table = np.argmin(self.add_table, axis=1)
        table.setflags(write=False)
        return table

    @cached_property
    def sub_table(self) -> np.ndarray:
        """``sub_table[i, j]`` is the index of ``elements[i] - elements[j]``."""
        table = self.add_table[:, self.neg_table]
        table.setflags(write=False)
        return table


def group_add(g: FiniteGroup, x, y) -> Element:
    return g.add(x, y)


def group_neg(g: FiniteGroup, x) -> Element:
    return g.neg(x)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` and ``p`` prime, or None."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return (p, k) if q == 1 else None


# Polynomials over Z_p: coefficient lists, lowest degree first, no trailing zeros.

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    a = _trim(a)
    m = _trim(m)
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        factor = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * c) % p
        a = _trim(a)
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _monic(p, k):
    """All monic polynomials of degree k, lexicographic on (c_{k-1}, ..., c_0)."""
    for digits in itertools.product(range(p), repeat=k):
        yield list(reversed(digits)) + [1]


def is_irreducible(poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim(poly)
    k = len(poly) - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for divisor in _monic(p, d):
            if not _poly_mod(poly, divisor, p):
                return False
    return True


@dataclass(frozen=True)
class FiniteField:
    """GF(p^k) realised as Z_p[x] / (modulus)."""

    p: int
    k: int
    modulus: tuple[int, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def order(self) -> int:
        return self.q

    def __str__(self):
        return f"GF({self.q})"

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(self.from_int(i) for i in range(self.q))

    @property
    def zero(self) -> Element:
        return (0,) * self.k

    @property
    def one(self) -> Element:
        return (1,) + (0,) * (self.k - 1)

    @property
    def additive_group(self) -> FiniteGroup:
        return FiniteGroup((self.p,) * self.k)

    def to_int(self, a) -> int:
        a = self.coerce(a)
        return sum(c * self.p**i for i, c in enumerate(a))

    def from_int(self, n: int) -> Element:
        digits = []
        for _ in range(self.k):
            n, c = divmod(n, self.p)
            digits.append(c)
        return tuple(digits)

    def coerce(self, a) -> Element:
        if isinstance(a, (int, np.integer)) and self.k == 1:
            a = (int(a),)
        a = tuple(int(c) for c in a)
        if len(a) != self.k:
            raise StructureError(
                f"{a} is not a reduced element of {self} (need {self.k} coefficients)"
            )
        if any(not 0 <= c < self.p for c in a):
            raise StructureError(f"coefficient out of range in {a} for {self}")
        return a

    def add(self, a, b) -> Element:
        a, b = self.coerce(a), self.coerce(b)
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a) -> Element:
        return tuple((-x) % self.p for x in self.coerce(a))

    def mul(self, a, b) -> Element:
        a, b = self.coerce(a), self.coerce(b)
        prod = _poly_mod(_poly_mul(_trim(a), _trim(b), self.p), self.modulus, self.p)
        return tuple(prod) + (0,) * (self.k - len(prod))

    def pow(self, a, e: int) -> Element:
        result, base = self.one, self.coerce(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a) -> Element:
        a = self.coerce(a)
        if a == self.zero:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        return self.pow(a, self.q - 2)

    def _log_tables(self):
        if "log" not in self._cache:
            q = self.q
            for n in range(1, q):
                g = self.from_int(n)
                exp = [1]
                x = g
                while x != self.one:
                    exp.append(self.to_int(x))
                    x = self.mul(x, g)
                if len(exp) == q - 1:
                    break
            exp = np.array(exp, dtype=np.int64)
            log = np.zeros(q, dtype=np.int64)
            log[exp] = np.arange(q - 1)
            self._cache["exp"], self._cache["log"] = exp, log
        return self._cache["exp"], self._cache["log"]

    @property
    def mul_table(self) -> np.ndarray:
        """``mul_table[i, j]`` is ``to_int(elements[i] * elements[j])``."""
        if "mul" not in self._cache:
            q = self.q
            table = np.zeros((q, q), dtype=np.int64)
            if q > 1:
                exp, log = self._log_tables()
                lg = log[1:]
                table[1:, 1:] = exp[(lg[:, None] + lg[None, :]) % (q - 1)]
            table.setflags(write=False)
            self._cache["mul"] = table
        return self._cache["mul"]


def field_mul(f: FiniteField, a, b) -> Element:
    return f.mul(a, b)


def make_field(p: int, k: int = 1) -> FiniteField:
    """Build GF(p^k) using the lexicographically smallest irreducible monic modulus."""
    if not is_prime(p):
        raise StructureError(f"{p} is not prime")
    if k < 1:
        raise StructureError(f"extension degree must be >= 1, got {k}")
    if p**k > FIELD_ORDER_CAP:
        raise StructureError(f"GF({p}^{k}) exceeds the order cap {FIELD_ORDER_CAP}")
    modulus = next(m for m in _monic(p, k) if is_irreducible(m, p))
    return FiniteField(p, k, tuple(modulus))


def field_of_order(q: int) -> FiniteField:
    pk = prime_power(q)
    if pk is None:
        raise StructureError(f"{q} is not a prime power")
    return make_field(*pk)


_CYCLIC = re.compile(r"Z(\d+)")
_GF = re.compile(r"GF\((\d+)\)")


def parse_group(descriptor: str) -> FiniteGroup:
    """Parse "Z5", "Z2xZ2xZ2" or "GF(8)" (the additive group of the field)."""
    text = descriptor.replace(" ", "")
    m = _GF.fullmatch(text)
    if m:
        return field_of_order(int(m.group(1))).additive_group
    parts = text.split("x")
    orders = []
    for part in parts:
        m = _CYCLIC.fullmatch(part)
        if not m:
            raise StructureError(f"cannot parse group descriptor {descriptor!r}")
        orders.append(int(m.group(1)))
    return FiniteGroup(tuple(orders))


def parse_field(descriptor: str) -> FiniteField:
    m = _GF.fullmatch(descriptor.replace(" ", ""))
    if not m:
        raise StructureError(f"cannot parse field descriptor {descriptor!r}")
    return field_of_order(int(m.group(1)))

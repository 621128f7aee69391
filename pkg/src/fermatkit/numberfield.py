"""Monogenic orders Z[theta], prime splitting, reductions, and norms.

Elements carry exact integer coordinates in the power basis of theta;
rational denominators are rejected on construction (use QElement for
fraction-field work, e.g. Igusa-Clebsch invariants). Valuations are
implemented only at primes that are alone above their rational prime,
which covers every valuation this toolkit needs.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .exactarith import (
    FFElement,
    FiniteField,
    UniPoly,
    is_prime,
    poly_discriminant,
    poly_factor_mod_p,
    poly_norm,
)

__all__ = [
    "NumberFieldOrder",
    "NFElement",
    "QElement",
    "PrimeIdealData",
    "UnsupportedPrimeError",
    "UnsupportedValuationError",
    "get_order",
    "known_orders",
    "split_prime",
    "prime_by_key",
    "reduce_element",
    "element_norm",
    "valuation_at",
    "cyclotomic_unit_generators",
    "prime_key_action",
]


class UnsupportedPrimeError(ValueError):
    """Raised for primes on an order's excluded-index list."""


class UnsupportedValuationError(ValueError):
    """Raised when a valuation is requested at a non-unique prime."""


@dataclass(frozen=True)
class NumberFieldOrder:
    """The order Z[theta] with theta a root of a monic integer polynomial."""

    label: str
    poly: UniPoly
    excluded_primes: tuple = ()

    def __post_init__(self):
        if not self.poly.is_monic or self.poly.degree < 1:
            raise ValueError("defining polynomial must be monic and nonconstant")

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def discriminant(self) -> int:
        return poly_discriminant(self.poly)

    def element(self, coords) -> "NFElement":
        c = list(coords)
        if len(c) > self.degree:
            raise ValueError("coordinate vector longer than the field degree")
        for v in c:
            if not isinstance(v, int):
                raise ValueError("order elements need integer coordinates")
        c += [0] * (self.degree - len(c))
        return NFElement(self, tuple(c))

    def from_int(self, n: int) -> "NFElement":
        return self.element([n])

    def zero(self) -> "NFElement":
        return self.from_int(0)

    def one(self) -> "NFElement":
        return self.from_int(1)

    def theta(self) -> "NFElement":
        return self.element([0, 1])

    def __repr__(self):
        return f"NumberFieldOrder({self.label!r}, {self.poly!r})"


def _reduce_mul(order: NumberFieldOrder, a, b, zero, coerce):
    """Schoolbook product of two coordinate tuples reduced mod the
    defining polynomial; works for int and Fraction coordinates."""
    n = order.degree
    prod = [zero] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    fc = order.poly.coeffs
    for i in range(len(prod) - 1, n - 1, -1):
        top = prod[i]
        if top:
            for j in range(n):
                prod[i - n + j] -= top * coerce(fc[j])
        prod.pop()
    return tuple(prod[:n])


class NFElement:
    """Element of a NumberFieldOrder; exact integer coordinates."""

    __slots__ = ("order", "coords")

    def __init__(self, order: NumberFieldOrder, coords: tuple):
        self.order = order
        self.coords = coords

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def poly(self) -> UniPoly:
        return UniPoly(self.coords)

    def _coerce(self, other):
        if isinstance(other, NFElement):
            if other.order != self.order:
                raise ValueError("elements of different orders")
            return other
        if isinstance(other, int):
            return self.order.from_int(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElement(self.order, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.order, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return NFElement(self.order, tuple(a * other for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElement(
            self.order, _reduce_mul(self.order, self.coords, o.coords, 0, int)
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("order elements have no inverses in general")
        acc = self.order.one()
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.order.from_int(other)
        return (
            isinstance(other, NFElement)
            and self.order == other.order
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.order.label, self.order.poly, self.coords))

    def __repr__(self):
        return f"NF({self.order.label}; {list(self.coords)})"


class QElement:
    """Order element with rational coordinates (fraction-field arithmetic).

    Used where invariants genuinely need denominators, e.g. the
    Igusa-Clebsch computation; NFElement stays integral by contract.
    """

    __slots__ = ("order", "coords")

    def __init__(self, order: NumberFieldOrder, coords):
        c = [Fraction(v) for v in coords]
        if len(c) > order.degree:
            raise ValueError("coordinate vector longer than the field degree")
        c += [Fraction(0)] * (order.degree - len(c))
        self.order = order
        self.coords = tuple(c)

    @classmethod
    def from_nf(cls, x: NFElement) -> "QElement":
        return cls(x.order, x.coords)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def _coerce(self, other):
        if isinstance(other, QElement):
            if other.order != self.order:
                raise ValueError("elements of different orders")
            return other
        if isinstance(other, NFElement):
            return QElement.from_nf(other)
        if isinstance(other, (int, Fraction)):
            return QElement(self.order, [other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QElement(self.order, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return QElement(self.order, [-a for a in self.coords])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QElement(self.order, [a * other for a in self.coords])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QElement(
            self.order,
            _reduce_mul(self.order, self.coords, o.coords, Fraction(0), Fraction),
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers not supported")
        acc = QElement(self.order, [1])
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        return o is not None and self.coords == o.coords

    def __hash__(self):
        return hash((self.order.label, self.order.poly, self.coords))

    def __repr__(self):
        return f"QNF({self.order.label}; {[str(c) for c in self.coords]})"


@dataclass(frozen=True)
class PrimeIdealData:
    """A prime of the order above q: residue field plus the reduction map.

    The index i in the key "q.i" follows the frozen factor order of
    poly_factor_mod_p (sorted by degree, then coefficient tuple).
    """

    order: NumberFieldOrder
    q: int
    index: int
    factor: UniPoly
    e: int
    fdeg: int
    residue_field: FiniteField = field(compare=False)
    theta_image: FFElement = field(compare=False)

    @property
    def key(self) -> str:
        return f"{self.q}.{self.index}"

    @property
    def norm(self) -> int:
        return self.q**self.fdeg

    def __repr__(self):
        return (
            f"PrimeIdealData({self.order.label}, key={self.key}, "
            f"e={self.e}, f={self.fdeg})"
        )


# Fixture orders. All four have Z[theta] equal to the maximal order
# (the polynomial discriminants 13, 169, 13^11, 8 are the field
# discriminants), so no primes are excluded.
_PHI13 = UniPoly([1] * 13)

_ORDERS = {
    "Qsqrt13": NumberFieldOrder("Qsqrt13", UniPoly([-3, -1, 1])),
    "K13cubic": NumberFieldOrder("K13cubic", UniPoly([1, -4, 1, 1])),
    "Zzeta13": NumberFieldOrder("Zzeta13", _PHI13),
    "Zsqrt2": NumberFieldOrder("Zsqrt2", UniPoly([-2, 0, 1])),
}


def get_order(label: str) -> NumberFieldOrder:
    try:
        return _ORDERS[label]
    except KeyError:
        raise KeyError(
            f"unknown order label {label!r}; known: {sorted(_ORDERS)}"
        ) from None


def known_orders():
    return dict(_ORDERS)


_split_cache: dict = {}
_split_lock = threading.Lock()


def split_prime(order: NumberFieldOrder, q: int):
    """Primes of the order above q, one per irreducible factor mod q.

    Results are memoized; PrimeIdealData values are immutable, so the
    cached list is shared freely.
    """
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q in order.excluded_primes:
        raise UnsupportedPrimeError(
            f"unsupported prime {q} for order {order.label} (index divisor risk)"
        )
    key = (order.label, order.poly.coeffs, q)
    with _split_lock:
        hit = _split_cache.get(key)
    if hit is not None:
        return hit
    factors = poly_factor_mod_p(order.poly, q)
    primes = []
    for i, (g, mult) in enumerate(factors):
        rf = FiniteField(q, g, check=False)
        primes.append(
            PrimeIdealData(
                order=order,
                q=q,
                index=i,
                factor=g,
                e=mult,
                fdeg=g.degree,
                residue_field=rf,
                theta_image=rf.gen() if g.degree > 1 else rf.from_int(-g.coeffs[0]),
            )
        )
    assert sum(p.e * p.fdeg for p in primes) == order.degree
    with _split_lock:
        _split_cache[key] = primes
    return primes


def prime_by_key(order: NumberFieldOrder, key: str) -> PrimeIdealData:
    """Resolve an external "q.i" prime key."""
    try:
        qs, idx = key.split(".")
        q, i = int(qs), int(idx)
    except ValueError:
        raise ValueError(f"malformed prime key {key!r}") from None
    primes = split_prime(order, q)
    if not 0 <= i < len(primes):
        raise ValueError(f"prime key {key!r}: only {len(primes)} primes above {q}")
    return primes[i]


def reduce_element(x: NFElement, P: PrimeIdealData) -> FFElement:
    """Image of x in the residue field of P (theta goes to the stored root)."""
    if x.order != P.order:
        raise ValueError("element and prime belong to different orders")
    acc = P.residue_field.zero()
    for c in reversed(x.coords):
        acc = acc * P.theta_image + c
    return acc


def element_norm(x: NFElement) -> int:
    """Field norm of x down to Q: resultant of the defining polynomial
    with the coordinate polynomial of x; multiplicative."""
    return poly_norm(x.order.poly, x.poly())


def valuation_at(x: NFElement, P: PrimeIdealData) -> int:
    """P-adic valuation of x, for P alone above its rational prime.

    With a single prime above q, Norm(x) = +-q^(fdeg * v_P(x)) times a
    unit, so the valuation drops out of the norm exactly.
    """
    if x.is_zero:
        raise ValueError("the zero element has no finite valuation")
    if len(split_prime(P.order, P.q)) != 1:
        raise UnsupportedValuationError(
            f"unsupported valuation: {P.q} has several primes above it in {P.order.label}"
        )
    nm = element_norm(x)
    v = 0
    while nm % P.q == 0:
        nm //= P.q
        v += 1
    if v % P.fdeg != 0:
        raise AssertionError("norm valuation not divisible by the residue degree")
    return v // P.fdeg


def cyclotomic_unit_generators():
    """The five units (1 - zeta^a)/(1 - zeta) = 1 + zeta + ... + zeta^(a-1)
    of Z[zeta_13], for a = 2..6.

    These generate the unit group modulo 7th powers: the class number of
    the real subfield is 1, so cyclotomic units generate the full unit
    group up to torsion, and the torsion has order prime to 7. Their
    independence mod 7th powers is a tested property, not an assumption.
    """
    order = get_order("Zzeta13")
    return [order.element([1] * a) for a in range(2, 7)]


def prime_key_action(order: NumberFieldOrder, q: int, sigma_poly: UniPoly) -> dict:
    """Permutation of prime keys above q induced by theta -> sigma_poly(theta).

    sigma_poly must define an automorphism of the field (the order is
    assumed Galois-stable under it). For each prime P, the image key is
    the one whose factor vanishes on sigma_poly evaluated at P's root.
    """
    primes = split_prime(order, q)
    mapping = {}
    for P in primes:
        y = P.residue_field.zero()
        for c in reversed(sigma_poly.coeffs):
            y = y * P.theta_image + c
        hits = []
        for Q in primes:
            acc = P.residue_field.zero()
            for c in reversed(Q.factor.coeffs):
                acc = acc * y + c
            if acc.is_zero:
                hits.append(Q.key)
        if len(hits) != 1:
            raise ValueError(
                "sigma_poly does not induce a permutation of the primes above "
                f"{q} (prime {P.key} maps to {hits})"
            )
        mapping[P.key] = hits[0]
    return mapping

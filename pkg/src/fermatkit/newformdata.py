"""Ingestion and querying of Hecke eigenvalue packets.

Eigenvalue packets are data, never computed here: newform spaces come
from external computer-algebra systems, and the shipped fixtures carry
only values printed in the source material or derivable from the curves
in this toolkit (the provenance string says which). Checkers reduce
eigenvalues at residue primes of the coefficient field and test the
congruences the elimination arguments rest on.

Packet schema (JSON)::

    {
      "label": str,
      "base_field": order label,
      "level": {"norm": int, "primes": ["q.i", ...]},   # with multiplicity
      "coeff_poly": [c0, ..., 1],                        # monic h
      "eigenvalues": {"q.i": [v0, ...]},                 # coords in Z[x]/(h)
      "residue_maps": {"p:factor_idx": [coords]},        # optional
      "provenance": str
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .exactarith import (
    FFElement,
    FiniteField,
    UniPoly,
    count_real_roots_where_positive,
    is_prime,
    poly_discriminant,
    poly_factor_mod_p,
    real_root_count,
)
from .numberfield import get_order, prime_by_key, split_prime

__all__ = [
    "NewformPacket",
    "ResiduePrime",
    "PacketFormatError",
    "UnsupportedResiduePrimeError",
    "MissingEigenvalueError",
    "load_packets",
    "packet_from_dict",
    "serialize_packet",
    "primes_above_in_Qf",
    "reduce_eigenvalue",
    "conjugate_congruence_check",
    "trace_contradiction_check",
    "packet_from_curve",
]


class PacketFormatError(ValueError):
    """Schema violation, with the offending position in the message."""


class UnsupportedResiduePrimeError(ValueError):
    """p divides the discriminant twice and no explicit maps were given."""


class MissingEigenvalueError(KeyError):
    """A checker needed an eigenvalue the packet does not carry."""


@dataclass(frozen=True)
class NewformPacket:
    label: str
    base_field: str
    level_norm: int
    level_primes: tuple
    coeff_poly: UniPoly
    eigenvalues: dict
    residue_maps: dict
    provenance: str
    warnings: tuple = ()

    @property
    def order(self):
        return get_order(self.base_field)


@dataclass(frozen=True)
class ResiduePrime:
    """A prime of the coefficient field above p, with the reduction map."""

    p: int
    index: int
    factor: UniPoly
    d: int
    e: int
    field: FiniteField = dc_field(compare=False)
    gen_image: FFElement = dc_field(compare=False)

    @property
    def key(self) -> str:
        return f"{self.p}:{self.index}"

    def __repr__(self):
        return f"ResiduePrime({self.key}, d={self.d}, e={self.e})"


def _key_sort(key: str):
    q, i = key.split(".")
    return (int(q), int(i))


def _check_irreducible(h: UniPoly, pos: str):
    """Reject obviously reducible coefficient polynomials.

    Degree <= 3 is decided exactly (squarefree and no rational root);
    larger degrees are accepted when some good reduction is irreducible,
    otherwise flagged with a warning rather than rejected.
    """
    if not h.is_monic:
        raise PacketFormatError(f"{pos}: coeff_poly must be monic")
    n = h.degree
    if n < 1:
        raise PacketFormatError(f"{pos}: coeff_poly must be nonconstant")
    if n == 1:
        return None
    disc = poly_discriminant(h)
    if disc == 0:
        raise PacketFormatError(f"{pos}: coeff_poly is not squarefree")
    c0 = h.coeffs[0]
    for r in range(1, abs(c0) + 1):
        if c0 % r == 0:
            for cand in (r, -r):
                if h(cand) == 0:
                    raise PacketFormatError(
                        f"{pos}: coeff_poly has the rational root {cand}"
                    )
    if h(0) == 0:
        raise PacketFormatError(f"{pos}: coeff_poly has the rational root 0")
    if n <= 3:
        return None
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29):
        if disc % p == 0:
            continue
        fs = poly_factor_mod_p(h, p)
        if len(fs) == 1 and fs[0][1] == 1:
            return None
    return f"could not certify irreducibility of degree-{n} coeff_poly"


def _weil_violation(h: UniPoly, vec, norm: int):
    """True when some real embedding of the eigenvalue exceeds 2*sqrt(N)."""
    if h.degree == 1:
        a = vec[0]
        return a * a > 4 * norm
    v = UniPoly(vec)
    g = v * v - 4 * norm
    return count_real_roots_where_positive(h, g) > 0


def packet_from_dict(data: dict, pos: str = "packet") -> NewformPacket:
    if not isinstance(data, dict):
        raise PacketFormatError(f"{pos}: expected an object")
    warnings = []

    label = data.get("label")
    if not isinstance(label, str) or not label:
        raise PacketFormatError(f"{pos}.label: missing or empty")
    base = data.get("base_field")
    try:
        order = get_order(base)
    except (KeyError, TypeError):
        raise PacketFormatError(f"{pos}.base_field: unknown order {base!r}") from None

    level = data.get("level")
    if not isinstance(level, dict) or "norm" not in level or "primes" not in level:
        raise PacketFormatError(f"{pos}.level: need 'norm' and 'primes'")
    lnorm = level["norm"]
    if not isinstance(lnorm, int) or lnorm < 1:
        raise PacketFormatError(f"{pos}.level.norm: positive integer required")
    lprimes = []
    prod = 1
    for j, key in enumerate(level["primes"]):
        try:
            P = prime_by_key(order, key)
        except ValueError as e:
            raise PacketFormatError(f"{pos}.level.primes[{j}]: {e}") from None
        lprimes.append(key)
        prod *= P.norm
    if prod != lnorm:
        raise PacketFormatError(
            f"{pos}.level: norm {lnorm} does not match the prime list (product {prod})"
        )

    cp = data.get("coeff_poly")
    if not isinstance(cp, list) or not all(isinstance(c, int) for c in cp):
        raise PacketFormatError(f"{pos}.coeff_poly: integer list required")
    h = UniPoly(cp)
    w = _check_irreducible(h, f"{pos}.coeff_poly")
    if w:
        warnings.append(w)

    ev_in = data.get("eigenvalues", {})
    if not isinstance(ev_in, dict):
        raise PacketFormatError(f"{pos}.eigenvalues: object required")
    all_real = real_root_count(h) == h.degree
    eigenvalues = {}
    for key, vec in ev_in.items():
        try:
            P = prime_by_key(order, key)
        except ValueError as e:
            raise PacketFormatError(f"{pos}.eigenvalues[{key!r}]: {e}") from None
        if not isinstance(vec, list) or not all(isinstance(c, int) for c in vec):
            raise PacketFormatError(
                f"{pos}.eigenvalues[{key!r}]: integer vector required"
            )
        if len(vec) > max(h.degree, 1):
            raise PacketFormatError(
                f"{pos}.eigenvalues[{key!r}]: vector longer than the field degree"
            )
        vec = vec + [0] * (max(h.degree, 1) - len(vec))
        if all_real and _weil_violation(h, vec, P.norm):
            raise PacketFormatError(
                f"{pos}.eigenvalues[{key!r}]: Weil bound violated at norm {P.norm}"
            )
        eigenvalues[key] = tuple(vec)
    if not eigenvalues:
        warnings.append("empty eigenvalue table; no checks possible")

    rm_in = data.get("residue_maps", {}) or {}
    if not isinstance(rm_in, dict):
        raise PacketFormatError(f"{pos}.residue_maps: object required")
    residue_maps = {}
    for key, vec in rm_in.items():
        parts = key.split(":")
        if len(parts) != 2 or not all(s.isdigit() for s in parts):
            raise PacketFormatError(f"{pos}.residue_maps[{key!r}]: malformed key")
        if not isinstance(vec, list) or not all(isinstance(c, int) for c in vec):
            raise PacketFormatError(
                f"{pos}.residue_maps[{key!r}]: integer vector required"
            )
        residue_maps[key] = tuple(vec)

    prov = data.get("provenance", "")
    if not isinstance(prov, str):
        raise PacketFormatError(f"{pos}.provenance: string required")

    return NewformPacket(
        label=label,
        base_field=base,
        level_norm=lnorm,
        level_primes=tuple(lprimes),
        coeff_poly=h,
        eigenvalues=eigenvalues,
        residue_maps=residue_maps,
        provenance=prov,
        warnings=tuple(warnings),
    )


def load_packets(path) -> list:
    """Load and validate a packet file (a list or a single packet)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise PacketFormatError(
                f"{path}: invalid JSON at line {e.lineno} column {e.colno}"
            ) from None
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise PacketFormatError(f"{path}: expected a packet or a list of packets")
    return [packet_from_dict(d, pos=f"packets[{i}]") for i, d in enumerate(data)]


def serialize_packet(packet: NewformPacket) -> dict:
    return {
        "label": packet.label,
        "base_field": packet.base_field,
        "level": {"norm": packet.level_norm, "primes": list(packet.level_primes)},
        "coeff_poly": list(packet.coeff_poly.coeffs),
        "eigenvalues": {
            k: list(v) for k, v in sorted(packet.eigenvalues.items(), key=lambda t: _key_sort(t[0]))
        },
        "residue_maps": {k: list(v) for k, v in sorted(packet.residue_maps.items())},
        "provenance": packet.provenance,
    }


# ---------------------------------------------------------------------------
# residue primes of the coefficient field


def primes_above_in_Qf(packet: NewformPacket, p: int):
    """Primes above p in the coefficient field, via factoring h mod p.

    When p^2 divides disc(h) the naive splitting may be wrong (p could
    divide the index of Z[x]/(h) in the maximal order). In that case the
    packet must carry explicit residue maps asserting the splitting;
    otherwise this refuses rather than risking a silent mis-split.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    h = packet.coeff_poly
    factors = poly_factor_mod_p(h, p)
    risky = h.degree > 1 and poly_discriminant(h) % (p * p) == 0
    if risky:
        needed = [f"{p}:{i}" for i in range(len(factors))]
        if not all(k in packet.residue_maps for k in needed):
            raise UnsupportedResiduePrimeError(
                f"p={p} may divide the index in the coefficient field of "
                f"{packet.label}; explicit residue_maps {needed} are required"
            )
    out = []
    for i, (g, mult) in enumerate(factors):
        f = FiniteField(p, g, check=False)
        key = f"{p}:{i}"
        if key in packet.residue_maps:
            img = f.element(list(packet.residue_maps[key]))
            acc = f.zero()
            for c in reversed(h.coeffs):
                acc = acc * img + c
            if not acc.is_zero:
                raise PacketFormatError(
                    f"residue_maps[{key!r}] of {packet.label} is not a root of coeff_poly"
                )
        else:
            img = f.gen()
        out.append(
            ResiduePrime(p=p, index=i, factor=g, d=g.degree, e=mult, field=f, gen_image=img)
        )
    return out


def reduce_eigenvalue(packet: NewformPacket, key: str, rp: ResiduePrime) -> FFElement:
    """Image of the eigenvalue at `key` in the residue field of rp."""
    vec = packet.eigenvalues.get(key)
    if vec is None:
        raise MissingEigenvalueError(
            f"packet {packet.label} has no eigenvalue at {key}"
        )
    acc = rp.field.zero()
    for c in reversed(vec):
        acc = acc * rp.gen_image + c
    return acc


def conjugate_congruence_check(packet: NewformPacket, sigma_map: dict, p0: ResiduePrime):
    """Keys where a_{sigma(q)} and a_q disagree modulo p0.

    An empty list is consistent with the eigenvalue system descending
    through the Galois action; any listed key refutes it.
    """
    failures = []
    for key in sorted(packet.eigenvalues, key=_key_sort):
        img = sigma_map.get(key)
        if img is None:
            raise MissingEigenvalueError(f"sigma_map has no entry for {key}")
        if img not in packet.eigenvalues:
            raise MissingEigenvalueError(
                f"packet {packet.label} has no eigenvalue at {img} = sigma({key})"
            )
        if reduce_eigenvalue(packet, img, p0) != reduce_eigenvalue(packet, key, p0):
            failures.append(key)
    return failures


def trace_contradiction_check(packet: NewformPacket, rp: ResiduePrime, keys, target: int) -> bool:
    """True iff some eigenvalue among `keys` does NOT reduce to `target`.

    A True verdict contradicts the hypothetical isomorphism that forced
    the common target value, eliminating it.
    """
    want = rp.field.from_int(target)
    found = False
    for key in keys:
        if reduce_eigenvalue(packet, key, rp) != want:
            found = True
    return found


# ---------------------------------------------------------------------------
# packets generated from curves (rational eigenvalues, h = x)


def packet_from_curve(curve, label: str, q_max: int, level=None) -> NewformPacket:
    """Eigenvalue packet with a_q = Frobenius traces of an elliptic curve,
    at every prime of good reduction above q <= q_max.

    The coefficient field is Q (h = x). If `level` is not given, the
    level metadata records the bad primes up to q_max with multiplicity
    one; that is support information, not a conductor computation.
    """
    from .curves import ec_reduction_type, ec_trace  # local import, no cycle

    order = curve.order
    eigenvalues = {}
    bad = []
    for q in range(2, q_max + 1):
        if not is_prime(q):
            continue
        for P in split_prime(order, q):
            if ec_reduction_type(curve, P) == "good":
                eigenvalues[P.key] = [ec_trace(curve, P)]
            else:
                bad.append(P)
    if level is None:
        level = {"norm": 1, "primes": []}
        for P in bad:
            level["primes"].append(P.key)
            level["norm"] *= P.norm
    return packet_from_dict(
        {
            "label": label,
            "base_field": order.label,
            "level": level,
            "coeff_poly": [0, 1],
            "eigenvalues": eigenvalues,
            "provenance": f"generated by point counting from curve {label}",
        },
        pos=f"packet_from_curve({label})",
    )

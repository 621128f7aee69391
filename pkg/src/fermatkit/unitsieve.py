"""Descent-plus-modular unit sieve over Z[zeta_13].

Unit classes are exponent vectors in (Z/7)^5 over the cyclotomic-unit
generators u_a = 1 + zeta + ... + zeta^(a-1), a = 2..6 (16807 classes in
all). At a prime Q above q with 7 dividing the residue-field group
order, the 7th-power residue character turns the descent equation into
one linear condition per prime on the exponent vector; survivors of a
constraint are unions of affine subspaces, intersected across primes.

Two independent routes compute survivor sets: the production route
enumerates affine solution sets by linear algebra mod 7, the reference
route walks all 16807 classes comparing 7th-power residues directly.
Their agreement is an acceptance criterion.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .elimination import FreyFamily, _family_local_data
from .exactarith import FFElement, factorize
from .numberfield import (
    PrimeIdealData,
    cyclotomic_unit_generators,
    get_order,
    reduce_element,
    split_prime,
)

__all__ = [
    "UNIT_CLASS_COUNT",
    "UnitClass",
    "LocalCharacterTable",
    "SieveConstraint",
    "build_character",
    "char_value",
    "admissible_pairs",
    "sieve_case",
    "sieve_case_exhaustive",
    "generator_independence_rank",
    "modular_targets_from_curve",
]

UNIT_CLASS_COUNT = 7**5  # 16807
_DESCENT_CASES = ("coprime-13", "divisible-13")


@dataclass(frozen=True)
class UnitClass:
    """Exponent vector e in (Z/7)^5 over the generators u_2..u_6."""

    exps: tuple

    def __post_init__(self):
        if len(self.exps) != 5 or not all(0 <= e < 7 for e in self.exps):
            raise ValueError("a unit class is five exponents in [0, 7)")

    @property
    def index(self) -> int:
        acc = 0
        for e in reversed(self.exps):
            acc = acc * 7 + e
        return acc

    @classmethod
    def from_index(cls, n: int) -> "UnitClass":
        exps = []
        for _ in range(5):
            exps.append(n % 7)
            n //= 7
        return cls(exps=tuple(exps))

    def unit(self):
        """The actual unit of Z[zeta_13] this class represents."""
        gens = cyclotomic_unit_generators()
        acc = get_order("Zzeta13").one()
        for g, e in zip(gens, self.exps):
            acc = acc * g**e
        return acc


@dataclass(frozen=True)
class LocalCharacterTable:
    """7th-power residue characters at a prime Q of Z[zeta_13].

    omega is the fixed primitive 7th root: the (N-1)/7 power of the
    first multiplicative generator in the frozen element enumeration
    order, so survivor sets are byte-identical across runs.
    """

    prime: PrimeIdealData
    exponent: int  # (N - 1) // 7
    omega: FFElement
    unit_chars: tuple  # chi(u_a), a = 2..6
    chi_one_minus_zeta: object  # int, or None above 13

    @property
    def q(self) -> int:
        return self.prime.q


@dataclass(frozen=True)
class SieveConstraint:
    """Local condition at a rational prime q.

    mode "parity-only" (q = 2 only): keeps pairs with a + b odd.
    mode "modular": keeps pairs whose member-curve trace data is
        compatible with the target Euler residues mod 7; needs `family`
        (the Frey family) and `targets` (prime key of the family's base
        field -> frozenset of residues mod 7, both reductions of the
        unordered RM pair).
    mode "unconstrained": all q^2 - 1 pairs.
    """

    q: int
    mode: str
    family: FreyFamily = None
    targets: tuple = None  # sorted tuple of (prime key, frozenset)

    def __post_init__(self):
        if self.q == 13:
            raise ValueError("the ramified prime 13 cannot constrain the sieve")
        if self.mode not in ("parity-only", "modular", "unconstrained"):
            raise ValueError(f"unknown sieve mode {self.mode!r}")
        if self.mode == "parity-only" and self.q != 2:
            raise ValueError("parity-only is valid only at q = 2")

    def targets_dict(self):
        return dict(self.targets) if self.targets else {}


# ---------------------------------------------------------------------------
# characters


def _group_prime_factors(q: int, f: int):
    """Prime factors of q^f - 1 via the cyclotomic factorization: each
    piece Phi_d(q), d | f, is small enough for trial division."""
    pieces = {}
    for d in range(1, f + 1):
        if f % d:
            continue
        val = q**d - 1
        for e, ev in pieces.items():
            if d % e == 0:
                val //= ev
        pieces[d] = val
    primes = set()
    for val in pieces.values():
        primes.update(factorize(val))
    return sorted(primes)


_gen_cache: dict = {}
_gen_lock = threading.Lock()


def _lex_least_generator(field) -> FFElement:
    """First multiplicative generator in the frozen enumeration order."""
    with _gen_lock:
        hit = _gen_cache.get(field)
    if hit is not None:
        return hit
    n1 = field.order - 1
    prime_factors = _group_prime_factors(field.p, field.k)
    one = field.one()
    g = None
    for idx in range(1, field.order):
        x = field.from_index(idx)
        if x.is_zero:
            continue
        if all(x ** (n1 // r) != one for r in prime_factors):
            g = x
            break
    if g is None:
        raise AssertionError("no generator found; field arithmetic is broken")
    with _gen_lock:
        _gen_cache[field] = g
    return g


_table_cache: dict = {}
_table_lock = threading.Lock()


def build_character(Q: PrimeIdealData) -> LocalCharacterTable:
    """Character table at Q; requires 7 | N(Q) - 1."""
    with _table_lock:
        hit = _table_cache.get(Q)
    if hit is not None:
        return hit
    n1 = Q.norm - 1
    if n1 % 7:
        raise ValueError(
            f"7 does not divide the residue group order at {Q.key} (N = {Q.norm})"
        )
    exponent = n1 // 7
    g = _lex_least_generator(Q.residue_field)
    omega = g**exponent
    powers = {}
    acc = Q.residue_field.one()
    for k in range(7):
        powers[acc] = k
        acc = acc * omega

    def chi(x: FFElement) -> int:
        y = x**exponent
        k = powers.get(y)
        if k is None:
            raise AssertionError("character value outside the order-7 subgroup")
        return k

    unit_chars = tuple(chi(reduce_element(u, Q)) for u in cyclotomic_unit_generators())
    order = get_order("Zzeta13")
    omz = order.one() - order.theta()
    red = reduce_element(omz, Q)
    chi_omz = None if red.is_zero else chi(red)
    table = LocalCharacterTable(
        prime=Q,
        exponent=exponent,
        omega=omega,
        unit_chars=unit_chars,
        chi_one_minus_zeta=chi_omz,
    )
    with _table_lock:
        _table_cache[Q] = table
    return table


def char_value(table: LocalCharacterTable, x) -> object:
    """chi_Q(x) in Z/7, or None when x reduces to zero at Q (the prime
    then imposes no condition; the 7th-power content is absorbed by the
    ideal equation)."""
    red = reduce_element(x, table.prime)
    if red.is_zero:
        return None
    y = red**table.exponent
    acc = table.prime.residue_field.one()
    for k in range(7):
        if y == acc:
            return k
        acc = acc * table.omega
    raise AssertionError("character value outside the order-7 subgroup")


# ---------------------------------------------------------------------------
# admissible residue pairs


def _all_pairs(q: int):
    return {(a, b) for a in range(q) for b in range(q) if a or b}


def admissible_pairs(constraint: SieveConstraint):
    """Residue pairs (a, b) mod q surviving the local constraint."""
    q = constraint.q
    if constraint.mode == "parity-only":
        return {(0, 1), (1, 0)}
    if constraint.mode == "unconstrained":
        return _all_pairs(q)
    # modular
    family = constraint.family
    targets = constraint.targets_dict()
    if family is None or not targets:
        raise ValueError(
            f"modular constraint at q={q} needs the Frey family and Euler targets"
        )
    data = _family_local_data(family, q)
    for P in data.primes:
        if P.key not in targets:
            raise ValueError(f"modular constraint at q={q}: no target for {P.key}")
    out = set()
    for pair in _all_pairs(q):
        case = data.cases[pair]
        if case == "good":
            ok = all(
                data.traces[pair][P.key] % 7 in targets[P.key] for P in data.primes
            )
        else:
            ok = all(
                targets[P.key] & {(P.norm + 1) % 7, (-(P.norm + 1)) % 7}
                for P in data.primes
            )
        if ok:
            out.add(pair)
    return out


def modular_targets_from_curve(curve, q: int):
    """Target residue sets mod 7 from a genus-2 curve's RM-split Euler
    factors at the primes above q, in the SieveConstraint format."""
    from .curves import g2_euler_factor, g2_rm_split, rm_residues_mod_p7

    out = []
    for P in split_prime(curve.order, q):
        res = rm_residues_mod_p7(g2_rm_split(g2_euler_factor(curve, P)))
        out.append((P.key, frozenset(res)))
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# the sieve


def _pair_element(a: int, b: int):
    return get_order("Zzeta13").element([a, b])


def _affine_solutions(rows, vals):
    """Solution indices of the system rows . e = vals over F_7, e in
    (Z/7)^5; index encoding is base 7, first generator least significant."""
    m = [list(r) + [v] for r, v in zip(rows, vals)]
    ncol = 5
    pivots = []
    r = 0
    for col in range(ncol):
        sel = None
        for i in range(r, len(m)):
            if m[i][col] % 7:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = pow(m[r][col], 5, 7)  # inverse mod 7
        m[r] = [(v * inv) % 7 for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] % 7:
                f = m[i][col]
                m[i] = [(a - f * b) % 7 for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(m)):
        if m[i][ncol] % 7:
            return set()  # inconsistent
    free = [c for c in range(ncol) if c not in pivots]
    out = set()
    assign = [0] * ncol

    def rec(k):
        if k == len(free):
            for row, col in zip(m, pivots):
                acc = row[ncol]
                for fc in free:
                    acc -= row[fc] * assign[fc]
                assign[col] = acc % 7
            idx = 0
            for e in reversed(assign):
                idx = idx * 7 + e
            out.add(idx)
            return
        for v in range(7):
            assign[free[k]] = v
            rec(k + 1)

    rec(0)
    return out


def _validate_constraints(constraints):
    if not constraints:
        raise ValueError("the sieve needs at least one constraint")
    qs = [c.q for c in constraints]
    if len(set(qs)) != len(qs):
        raise ValueError("constraint primes must be distinct")


def _local_survivors(constraint: SieveConstraint, delta: int):
    """Survivor indices of one constraint: union over admissible pairs of
    the affine solution sets of the per-prime character conditions."""
    primes = split_prime(get_order("Zzeta13"), constraint.q)
    tables = [build_character(Q) for Q in primes]
    if delta and any(t.chi_one_minus_zeta is None for t in tables):
        raise AssertionError("chi(1 - zeta) undefined away from 13; broken table")
    rhs_set = set()
    for a, b in admissible_pairs(constraint):
        elt = _pair_element(a, b)
        rhs = []
        for t in tables:
            cv = char_value(t, elt)
            if cv is None:
                rhs.append(None)
            elif delta:
                rhs.append((cv - t.chi_one_minus_zeta) % 7)
            else:
                rhs.append(cv)
        rhs_set.add(tuple(rhs))
    local = set()
    full = set(range(UNIT_CLASS_COUNT))
    for rhs in rhs_set:
        rows = [t.unit_chars for t, r in zip(tables, rhs) if r is not None]
        vals = [r for r in rhs if r is not None]
        if not rows:
            return full  # the pair imposed no condition at any prime
        local |= _affine_solutions(rows, vals)
        if len(local) == UNIT_CLASS_COUNT:
            break
    return local


def sieve_case(descent_case: str, constraints) -> set:
    """Unit classes surviving every local constraint.

    descent_case "coprime-13" sieves a + zeta b = eps beta^7;
    "divisible-13" sieves a + zeta b = eps (1 - zeta) beta^7. A class
    survives a prime q when SOME admissible pair satisfies, at EVERY
    prime Q above q where the pair element is a unit, the linear
    character condition; the result intersects over the constraints.
    """
    if descent_case not in _DESCENT_CASES:
        raise ValueError(f"descent_case must be one of {_DESCENT_CASES}")
    _validate_constraints(constraints)
    delta = 1 if descent_case == "divisible-13" else 0
    surv = None
    for c in constraints:
        local = _local_survivors(c, delta)
        surv = local if surv is None else surv & local
        if not surv:
            break
    return {UnitClass.from_index(i) for i in surv}


def sieve_case_exhaustive(descent_case: str, constraints) -> set:
    """Reference implementation: walk all 16807 classes and compare
    7th-power residues directly (no discrete logs, no linear algebra).

    Kept as the independent oracle for the linear-algebra route; slower
    but still batch-friendly because eps^((N-1)/7) is a product of five
    precomputed subgroup elements.
    """
    if descent_case not in _DESCENT_CASES:
        raise ValueError(f"descent_case must be one of {_DESCENT_CASES}")
    _validate_constraints(constraints)
    delta = 1 if descent_case == "divisible-13" else 0
    order = get_order("Zzeta13")
    gens = cyclotomic_unit_generators()
    surv = set(range(UNIT_CLASS_COUNT))
    for c in constraints:
        primes = split_prime(order, c.q)
        for Q in primes:
            if (Q.norm - 1) % 7:
                raise ValueError(f"7 does not divide the residue group order at {Q.key}")
        exps = [(Q.norm - 1) // 7 for Q in primes]
        # eps^E tables: powtab[prime][gen][e] = (reduced gen)^(e*E)
        powtab = []
        for Q, E in zip(primes, exps):
            per_gen = []
            for g in gens:
                base = reduce_element(g, Q) ** E
                row = [Q.residue_field.one()]
                for _ in range(6):
                    row.append(row[-1] * base)
                per_gen.append(row)
            powtab.append(per_gen)
        omz = order.one() - order.theta()
        # target per pair and prime: (a + zeta b)^E * ((1-zeta)^E)^(-delta)
        exact_targets = set()
        wildcard_targets = []
        for a, b in admissible_pairs(c):
            elt = _pair_element(a, b)
            tup = []
            for Q, E in zip(primes, exps):
                red = reduce_element(elt, Q)
                if red.is_zero:
                    tup.append(None)
                    continue
                t = red**E
                if delta:
                    t = t * (reduce_element(omz, Q) ** E).inverse()
                tup.append(t)
            if None in tup:
                wildcard_targets.append(tuple(tup))
            else:
                exact_targets.add(tuple(tup))
        alive = set()
        for idx in surv:
            e = UnitClass.from_index(idx).exps
            mine = []
            for per_gen in powtab:
                acc = per_gen[0][e[0]]
                for gi in range(1, 5):
                    acc = acc * per_gen[gi][e[gi]]
                mine.append(acc)
            tup = tuple(mine)
            if tup in exact_targets:
                alive.add(idx)
                continue
            for wt in wildcard_targets:
                if all(w is None or w == m for w, m in zip(wt, tup)):
                    alive.add(idx)
                    break
        surv = alive
        if not surv:
            break
    return {UnitClass.from_index(i) for i in surv}


def generator_independence_rank(primes) -> int:
    """Rank over F_7 of the character matrix [chi_Q(u_a)] with one column
    per supplied prime; rank 5 means the 16807 classes are separated."""
    cols = []
    for Q in primes:
        t = build_character(Q)
        cols.append(t.unit_chars)
    if not cols:
        return 0
    # rows indexed by generator, columns by prime
    rows = [[col[i] for col in cols] for i in range(5)]
    rank = 0
    ncol = len(cols)
    rr = list(rows)
    used = [False] * len(rr)
    for col in range(ncol):
        sel = None
        for i, row in enumerate(rr):
            if not used[i] and row[col] % 7:
                sel = i
                break
        if sel is None:
            continue
        used[sel] = True
        rank += 1
        inv = pow(rr[sel][col], 5, 7)
        rr[sel] = [(v * inv) % 7 for v in rr[sel]]
        for i, row in enumerate(rr):
            if i != sel and row[col] % 7:
                f = row[col]
                rr[i] = [(a - f * b) % 7 for a, b in zip(row, rr[sel])]
    return rank

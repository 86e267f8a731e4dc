"""Ideal and idempotent structure of explicit finite semigroups.

A semigroup is an n x n table of indices in range(n) with table[x][y] = x·y.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from itertools import product

from .errors import PreconditionError

SGP_SCHEMA = "rl-sgp-1"
SUBSEMIGROUP_SWEEP_MAX = 8


class AssociativityError(PreconditionError):
    def __init__(self, triple, left, right):
        x, y, z = triple
        super().__init__(f"(x·y)·z = {left} but x·(y·z) = {right} for (x, y, z) = {triple}", triple)
        self.triple = triple


@dataclass(frozen=True)
class FiniteSemigroup:
    table: tuple
    labels: tuple | None = None

    @property
    def order(self):
        return len(self.table)

    def mul(self, x, y):
        return self.table[x][y]

    def label(self, x):
        return self.labels[x] if self.labels else str(x)


def non_associative_triple(table):
    n = len(table)
    for x, y, z in product(range(n), repeat=3):
        if table[table[x][y]][z] != table[x][table[y][z]]:
            return (x, y, z)
    return None


def validate(table, labels=None):
    n = len(table)
    if n == 0:
        raise PreconditionError("a semigroup needs at least one element")
    for row in table:
        if len(row) != n:
            raise PreconditionError("table is not square", len(row))
        bad = [v for v in row if not (isinstance(v, int) and 0 <= v < n)]
        if bad:
            raise PreconditionError("table entry out of range", bad[0])
    t = tuple(tuple(row) for row in table)
    triple = non_associative_triple(t)
    if triple is not None:
        x, y, z = triple
        raise AssociativityError(triple, t[t[x][y]][z], t[x][t[y][z]])
    if labels is not None and len(labels) != n:
        raise PreconditionError("one label per element is needed", len(labels))
    return FiniteSemigroup(t, tuple(labels) if labels else None)


def load_table(path):
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and not row[0].lstrip().startswith("#")]
    try:
        return [[int(v) for v in row] for row in rows]
    except ValueError as exc:
        raise PreconditionError(f"table entries must be integers ({exc})") from None


def idempotents(s):
    return frozenset(x for x in range(s.order) if s.mul(x, x) == x)


def left_ideal_of(s, x):
    """S·x, the smallest-looking left ideal attached to x (S·(S·x) ⊂ S·x)."""
    return frozenset(s.mul(y, x) for y in range(s.order))


def right_ideal_of(s, x):
    return frozenset(s.mul(x, y) for y in range(s.order))


def two_sided_ideal_of(s, x):
    """S¹ x S¹."""
    n = range(s.order)
    out = {x} | {s.mul(y, x) for y in n} | {s.mul(x, y) for y in n}
    out |= {s.mul(s.mul(y, x), z) for y in n for z in n}
    return frozenset(out)


def _minimal(sets):
    sets = set(sets)
    return sorted((a for a in sets if not any(b < a for b in sets)), key=sorted)


@dataclass
class IdealStructure:
    idempotents: frozenset
    minimal_left: list
    minimal_right: list
    kernel: frozenset
    minimal_idempotents: frozenset

    def to_json(self, s=None):
        lab = (lambda x: s.label(x)) if s is not None else str
        return {
            "schema": SGP_SCHEMA,
            "idempotents": [lab(x) for x in sorted(self.idempotents)],
            "minimal_left_ideals": [[lab(x) for x in sorted(i)] for i in self.minimal_left],
            "minimal_right_ideals": [[lab(x) for x in sorted(i)] for i in self.minimal_right],
            "kernel": [lab(x) for x in sorted(self.kernel)],
            "minimal_idempotents": [lab(x) for x in sorted(self.minimal_idempotents)],
        }


def ideal_structure(s):
    """Every left ideal contains some S·x, so the minimal left ideals are the
    inclusion-minimal sets among {S·x}; likewise on the right."""
    n = range(s.order)
    lefts = _minimal(left_ideal_of(s, x) for x in n)
    rights = _minimal(right_ideal_of(s, x) for x in n)
    kernel = frozenset().union(*lefts)
    e = idempotents(s)
    return IdealStructure(e, lefts, rights, kernel, frozenset(x for x in e if x in kernel))


def is_left_ideal(s, subset):
    return all(s.mul(y, x) in subset for y in range(s.order) for x in subset)


def is_right_ideal(s, subset):
    return all(s.mul(x, y) in subset for y in range(s.order) for x in subset)


def is_closed(s, subset):
    return all(s.mul(x, y) in subset for x in subset for y in subset)


@dataclass
class KernelReport:
    order: int
    checks: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(self.checks.values())

    def failures(self):
        return [k for k, v in self.checks.items() if not v]

    def to_json(self):
        return {"schema": SGP_SCHEMA, "order": self.order, "ok": self.ok, "checks": dict(self.checks)}


def verify_kernel(s):
    """Check the ideal-theoretic facts on one finite semigroup.

    * the union of minimal left ideals equals the union of minimal right ideals;
    * that union is a two-sided ideal contained in every ideal;
    * each minimal left (right) ideal is a left (right) ideal containing an idempotent;
    * every nonempty subsemigroup contains an idempotent (all subsets, order <= 8).
    """
    st = ideal_structure(s)
    right_union = frozenset().union(*st.minimal_right)
    k = st.kernel
    checks = {
        "idempotents_nonempty": bool(st.idempotents),
        "kernel_is_both_unions": k == right_union,
        "kernel_is_ideal": is_left_ideal(s, k) and is_right_ideal(s, k),
        "kernel_in_every_ideal": all(k <= two_sided_ideal_of(s, x) for x in range(s.order)),
        "minimal_left_are_left_ideals": all(is_left_ideal(s, l) for l in st.minimal_left),
        "minimal_right_are_right_ideals": all(is_right_ideal(s, r) for r in st.minimal_right),
        "minimal_left_have_idempotents": all(l & st.idempotents for l in st.minimal_left),
        "minimal_right_have_idempotents": all(r & st.idempotents for r in st.minimal_right),
    }
    if s.order <= SUBSEMIGROUP_SWEEP_MAX:
        checks["subsemigroups_have_idempotents"] = _subsemigroup_sweep(s, st.idempotents)
    return KernelReport(s.order, checks)


def _subsemigroup_sweep(s, idem):
    n = s.order
    idem_mask = sum(1 << x for x in idem)
    # products[x] = bitmask of x·y over y, used to test closure quickly
    for mask in range(1, 1 << n):
        if mask & idem_mask:
            continue
        members = [x for x in range(n) if mask >> x & 1]
        if all(mask >> s.mul(x, y) & 1 for x in members for y in members):
            return False
    return True


def transpose(s):
    n = s.order
    return FiniteSemigroup(tuple(tuple(s.table[y][x] for y in range(n)) for x in range(n)), s.labels)


def all_tables(n):
    """Every n x n table over range(n) (n^(n^2) of them)."""
    for entries in product(range(n), repeat=n * n):
        yield tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))


def associative_tables(n):
    return [t for t in all_tables(n) if non_associative_triple(t) is None]


def cyclic_add(n):
    return validate([[(x + y) % n for y in range(n)] for x in range(n)])


def cyclic_mul(n):
    return validate([[(x * y) % n for y in range(n)] for x in range(n)])


def left_zero(n):
    return validate([[x for _ in range(n)] for x in range(n)])


def right_zero(n):
    return validate([[y for y in range(n)] for _ in range(n)])


def null_semigroup(n):
    return validate([[0] * n for _ in range(n)])


def min_semilattice(n):
    return validate([[min(x, y) for y in range(n)] for x in range(n)])


def rectangular_band(rows, cols):
    """I x J with (i, j)(k, l) = (i, l); element (i, j) has index i*cols + j."""
    n = rows * cols
    return validate([[(x // cols) * cols + (y % cols) for y in range(n)] for x in range(n)])


def klein_four():
    return validate([[x ^ y for y in range(4)] for x in range(4)])


def order_four_catalog():
    return {
        "right_zero_4": right_zero(4),
        "left_zero_4": left_zero(4),
        "z4_add": cyclic_add(4),
        "z4_mul": cyclic_mul(4),
        "null_4": null_semigroup(4),
        "chain_semilattice_4": min_semilattice(4),
        "rectangular_band_2x2": rectangular_band(2, 2),
        "klein_four": klein_four(),
    }

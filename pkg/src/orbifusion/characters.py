"""Irreducible characters: exact tables for abelian groups, Frobenius induction.

Tables for non-abelian groups or nontrivial cocycles are user-supplied and
validated, never synthesized.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import StructuralError
from .groups import FiniteGroup, Subgroup
from .report import ValidationReport

_ORTHO_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Characters of a finite group as value vectors over its element order.

    ``values[i, g]`` is the i-th character at group element ``g``; ``dims``
    are the values at the identity. ``projective`` marks a user-supplied
    table for a nontrivial 2-cocycle, which relaxes the dimension-sum check.
    """

    group: FiniteGroup
    names: tuple[str, ...]
    values: np.ndarray
    projective: bool = False

    def __post_init__(self):
        names = tuple(str(x) for x in self.names)
        object.__setattr__(self, "names", names)
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 2 or vals.shape[1] != self.group.order:
            raise StructuralError(
                f"character values shape {vals.shape} does not match group order "
                f"{self.group.order}")
        if vals.shape[0] != len(names):
            raise StructuralError("one name per character required")
        if len(set(names)) != len(names):
            raise StructuralError("character names must be distinct")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def dims(self) -> tuple[int, ...]:
        at_e = self.values[:, self.group.identity]
        return tuple(int(round(float(v.real))) for v in at_e)

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise StructuralError(f"unknown character {name!r}") from None

    def value(self, char_index: int, element_index: int) -> complex:
        return complex(self.values[char_index, element_index])


def inner_product(group: FiniteGroup, f1, f2) -> complex:
    """Class-function pairing (1/|G|) sum_g f1(g) conj(f2(g)).

    ``f1``/``f2`` are value vectors aligned with ``group.elements``.
    """
    a = np.asarray(f1, dtype=complex)
    b = np.asarray(f2, dtype=complex)
    if a.shape != (group.order,) or b.shape != (group.order,):
        raise StructuralError("class functions must list one value per group element")
    return complex(np.sum(a * b.conj()) / group.order)


def _greedy_generators(group: FiniteGroup) -> list[int]:
    """A small generating set, highest element order first (deterministic)."""
    by_order = sorted(range(group.order),
                      key=lambda i: (-group.element_order(i), i))
    generated = {group.identity}
    gens: list[int] = []
    for cand in by_order:
        if cand in generated:
            continue
        gens.append(cand)
        frontier = list(generated)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = group.mul(x, g)
                    if y not in generated:
                        generated.add(y)
                        nxt.append(y)
            frontier = nxt
        if len(generated) == group.order:
            break
    return gens


def _extend_homomorphism(group: FiniteGroup, gens: list[int],
                         gen_values: tuple[complex, ...]) -> np.ndarray | None:
    """Extend values on generators to a character of the whole abelian group.

    Returns None when the assignment is inconsistent (not a homomorphism).
    """
    vals = np.full(group.order, np.nan + 0j)
    vals[group.identity] = 1.0
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g, zg in zip(gens, gen_values):
                y = group.mul(x, g)
                candidate = vals[x] * zg
                if np.isnan(vals[y].real):
                    vals[y] = candidate
                    nxt.append(y)
                elif abs(vals[y] - candidate) > 1e-9:
                    return None
        frontier = nxt
    if np.isnan(vals.real).any():
        return None
    return vals


def irr_abelian(group: FiniteGroup) -> CharacterTable:
    """All |G| one-dimensional characters of an abelian group.

    The trivial character comes first as ``triv``; for order-2 groups the
    other character is ``sign``, otherwise ``chi1``, ``chi2``, ... in a
    deterministic enumeration order.
    """
    if not group.is_abelian():
        raise StructuralError("irr_abelian requires an abelian group")
    gens = _greedy_generators(group)
    orders = [group.element_order(g) for g in gens]
    rows: list[np.ndarray] = []
    for exponents in product(*(range(d) for d in orders)):
        gen_values = tuple(
            np.exp(2j * np.pi * k / d) for k, d in zip(exponents, orders))
        vals = _extend_homomorphism(group, gens, gen_values)
        if vals is not None:
            rows.append(vals)
    if len(rows) != group.order:
        raise StructuralError(
            f"character enumeration produced {len(rows)} characters for a group "
            f"of order {group.order}")
    # trivial character (all ones) first, rest keep enumeration order
    def is_trivial(v):
        return bool(np.all(np.abs(v - 1.0) <= 1e-12))
    rows.sort(key=lambda v: 0 if is_trivial(v) else 1)
    if group.order == 2:
        names = ("triv", "sign")
    else:
        names = ("triv",) + tuple(f"chi{i}" for i in range(1, len(rows)))
    return CharacterTable(group, names, np.array(rows))


def induce(group: FiniteGroup, sub: Subgroup, chi_sub) -> np.ndarray:
    """Frobenius induction of a class function from a subgroup.

    ``chi_sub`` lists values aligned with ``sub.indices``. The result is a
    class function on the parent group with dimension |G:H| * chi(e).
    """
    if sub.group is not group:
        raise StructuralError("subgroup does not belong to the given group")
    chi = np.asarray(chi_sub, dtype=complex)
    if chi.shape != (sub.order,):
        raise StructuralError("character values must align with the subgroup elements")
    local = {g: k for k, g in enumerate(sub.indices)}
    members = set(sub.indices)
    out = np.zeros(group.order, dtype=complex)
    for g in range(group.order):
        total = 0.0 + 0.0j
        for x in range(group.order):
            conj = group.mul(group.mul(x, g), group.inv(x))
            if conj in members:
                total += chi[local[conj]]
        out[g] = total / sub.order
    return out


def restrict(table_values: np.ndarray, sub: Subgroup) -> np.ndarray:
    """Restrict a class function on the parent group to a subgroup's elements."""
    vals = np.asarray(table_values, dtype=complex)
    return vals[list(sub.indices)]


def validate_table(table: CharacterTable) -> ValidationReport:
    """Check orthogonality, the dimension sum, and the class-function property.

    For projective (nontrivial-cocycle) tables the dimension-sum check is
    skipped; only orthogonality and the class-function property are enforced.
    """
    report = ValidationReport("character table")
    grp = table.group
    gram = table.values @ table.values.conj().T / grp.order
    dev_orth = float(np.abs(gram - np.eye(table.size)).max())
    report.add("row_orthogonality", dev_orth <= _ORTHO_TOL, dev_orth)

    if table.projective:
        report.add("dimension_sum", True, detail="skipped for projective table")
    else:
        total = sum(d * d for d in table.dims)
        report.add("dimension_sum", total == grp.order,
                   detail=f"sum dims^2 = {total} vs |G| = {grp.order}")

    worst = 0.0
    witness = None
    for i in range(table.size):
        for x in range(grp.order):
            for g in range(grp.order):
                conj = grp.mul(grp.mul(x, g), grp.inv(x))
                dev = abs(table.values[i, conj] - table.values[i, g])
                if dev > worst:
                    worst = dev
                    if dev > _ORTHO_TOL and witness is None:
                        witness = (f"character {table.names[i]} at "
                                   f"({grp.elements[x]}, {grp.elements[g]})")
    report.add("class_functions", worst <= _ORTHO_TOL, worst, witness)
    return report

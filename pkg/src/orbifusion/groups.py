"""Finite groups and their permutation actions on module labels.

Groups are multiplication tables over named elements; actions permute the
labels of a :class:`~orbifusion.modular.ModularDatum` and must preserve the
vacuum, the S-matrix, and the fusion tensor. Orbits, stabilizers, Burnside
counting, and the full-stabilizer criterion for twisted sectors live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import MathematicalError, StructuralError
from .modular import ModularDatum, verlinde_fusion
from .report import ValidationReport


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by an ordered element list and its Cayley table.

    ``mult_table[i, j]`` is the index of ``elements[i] * elements[j]``. The
    group laws (closure, associativity, identity, inverses) are verified at
    construction; sizes here are tiny, brute force is fine.
    """

    elements: tuple[str, ...]
    mult_table: np.ndarray

    def __post_init__(self):
        elements = tuple(str(x) for x in self.elements)
        object.__setattr__(self, "elements", elements)
        n = len(elements)
        if n == 0:
            raise StructuralError("group must have at least one element")
        if len(set(elements)) != n:
            raise StructuralError("group element names must be distinct")
        table = np.asarray(self.mult_table, dtype=int)
        if table.shape != (n, n):
            raise StructuralError(f"multiplication table shape {table.shape} != ({n},{n})")
        if table.min() < 0 or table.max() >= n:
            raise StructuralError("multiplication table entries out of range")
        identity = None
        for e in range(n):
            if all(table[e, j] == j and table[j, e] == j for j in range(n)):
                identity = e
                break
        if identity is None:
            raise StructuralError("no identity element in multiplication table")
        for i in range(n):
            if identity not in table[i]:
                raise StructuralError(f"element {elements[i]!r} has no inverse")
        for i, j, k in product(range(n), repeat=3):
            if table[table[i, j], k] != table[i, table[j, k]]:
                raise StructuralError(
                    "multiplication table is not associative at "
                    f"({elements[i]}, {elements[j]}, {elements[k]})")
        table.setflags(write=False)
        object.__setattr__(self, "mult_table", table)
        object.__setattr__(self, "identity", identity)
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(elements)})

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StructuralError(f"unknown group element {name!r}") from None

    def mul(self, i: int, j: int) -> int:
        return int(self.mult_table[i, j])

    def inv(self, i: int) -> int:
        return int(np.where(self.mult_table[i] == self.identity)[0][0])

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = self.mul(x, i)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mult_table, self.mult_table.T))


def make_cyclic(n: int) -> FiniteGroup:
    """Cyclic group of order n, elements named e, g, g2, ..., g{n-1}."""
    if n < 1:
        raise StructuralError("cyclic group order must be >= 1")
    names = ["e"] + ["g" if k == 1 else f"g{k}" for k in range(1, n)]
    table = np.fromfunction(lambda i, j: (i + j) % n, (n, n), dtype=int)
    return FiniteGroup(tuple(names), table)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as a closed subset of element indices of its parent group."""

    group: FiniteGroup
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.indices)))
        object.__setattr__(self, "indices", idx)
        n = self.group.order
        if not idx:
            raise StructuralError("subgroup cannot be empty")
        if idx[0] < 0 or idx[-1] >= n:
            raise StructuralError("subgroup indices out of range")
        members = set(idx)
        if self.group.identity not in members:
            raise StructuralError("subgroup must contain the identity")
        for i in idx:
            if self.group.inv(i) not in members:
                raise StructuralError("subgroup not closed under inverses")
            for j in idx:
                if self.group.mul(i, j) not in members:
                    raise StructuralError(
                        f"subgroup not closed: {self.group.elements[i]} * "
                        f"{self.group.elements[j]} escapes")

    @property
    def order(self) -> int:
        return len(self.indices)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.group.elements[i] for i in self.indices)

    def __contains__(self, element_index: int) -> bool:
        return element_index in set(self.indices)

    def as_group(self) -> tuple[FiniteGroup, dict[int, int]]:
        """The subgroup as a standalone group plus parent-index -> local-index map."""
        local = {g: k for k, g in enumerate(self.indices)}
        n = len(self.indices)
        table = np.zeros((n, n), dtype=int)
        for a, ga in enumerate(self.indices):
            for b, gb in enumerate(self.indices):
                table[a, b] = local[self.group.mul(ga, gb)]
        return FiniteGroup(self.names, table), local

    def is_abelian(self) -> bool:
        return all(self.group.mul(i, j) == self.group.mul(j, i)
                   for i in self.indices for j in self.indices)


class ModuleAction:
    """A permutation action of a finite group on the labels of a datum.

    ``perm`` maps each element name to either a dict label -> label or a list
    of images in label order. Composition follows ``m ∘ (gh) = (m ∘ g) ∘ h``,
    i.e. ``apply(gh, m) == apply(h, apply(g, m))``; for the abelian test
    groups used here the distinction from the opposite convention is
    invisible, but the convention is asserted in :func:`validate_action`.
    """

    def __init__(self, group: FiniteGroup, datum: ModularDatum, perm):
        self.group = group
        self.datum = datum
        n_lab = datum.size
        images = np.zeros((group.order, n_lab), dtype=int)
        perm = dict(perm)
        for name in group.elements:
            if name not in perm:
                raise StructuralError(f"action missing permutation for element {name!r}")
        extra = set(perm) - set(group.elements)
        if extra:
            raise StructuralError(f"action names unknown elements: {sorted(extra)}")
        for name, spec in perm.items():
            g = group.index(name)
            if isinstance(spec, dict):
                row = [datum.index(spec.get(lab, lab)) for lab in datum.labels]
            else:
                if len(spec) != n_lab:
                    raise StructuralError(
                        f"permutation for {name!r} lists {len(spec)} images, "
                        f"expected {n_lab}")
                row = [datum.index(lab) for lab in spec]
            images[g] = row
        self.images = images
        self.images.setflags(write=False)

    def apply_idx(self, g: int, label_idx: int) -> int:
        return int(self.images[g, label_idx])

    def apply(self, element: str, label: str) -> str:
        g = self.group.index(element)
        return self.datum.labels[self.apply_idx(g, self.datum.index(label))]


def validate_action(act: ModuleAction) -> ValidationReport:
    """Check every action invariant, recording the first witness per check."""
    report = ValidationReport("module action")
    grp, md = act.group, act.datum
    n_lab = md.size
    labels = md.labels

    witness = None
    for g in range(grp.order):
        if len(set(act.images[g].tolist())) != n_lab:
            witness = f"g={grp.elements[g]}"
            break
    report.add("bijection_per_element", witness is None, witness=witness)

    e = grp.identity
    witness = None
    if not np.array_equal(act.images[e], np.arange(n_lab)):
        bad = int(np.nonzero(act.images[e] != np.arange(n_lab))[0][0])
        witness = f"identity moves {labels[bad]}"
    report.add("identity_acts_trivially", witness is None, witness=witness)

    witness = None
    for g, h in product(range(grp.order), repeat=2):
        gh = grp.mul(g, h)
        composed = act.images[h][act.images[g]]
        if not np.array_equal(act.images[gh], composed):
            bad = int(np.nonzero(act.images[gh] != composed)[0][0])
            witness = (f"(g,h)=({grp.elements[g]},{grp.elements[h]}) "
                       f"on {labels[bad]}")
            break
    report.add("composition", witness is None, witness=witness)

    witness = None
    for g in range(grp.order):
        if act.apply_idx(g, 0) != 0:
            witness = f"g={grp.elements[g]} sends vacuum to {labels[act.apply_idx(g, 0)]}"
            break
    report.add("vacuum_fixed", witness is None, witness=witness)

    worst = 0.0
    witness = None
    for g in range(grp.order):
        moved = md.s_matrix[np.ix_(act.images[g], act.images[g])]
        dev = float(np.abs(moved - md.s_matrix).max())
        if dev > worst:
            worst = dev
            if dev > md.tolerance and witness is None:
                i, j = np.unravel_index(
                    int(np.argmax(np.abs(moved - md.s_matrix))), moved.shape)
                witness = f"(g,M,W)=({grp.elements[g]},{labels[i]},{labels[j]})"
    report.add("s_matrix_invariant", worst <= md.tolerance, worst, witness)

    try:
        tensor = verlinde_fusion(md)
    except MathematicalError as exc:
        report.add("fusion_invariant", False, detail=f"fusion tensor unavailable: {exc}")
        return report
    witness = None
    for g in range(grp.order):
        moved = tensor.table[np.ix_(act.images[g], act.images[g], act.images[g])]
        if not np.array_equal(moved, tensor.table):
            i, j, k = np.unravel_index(
                int(np.argmax(moved != tensor.table)), moved.shape)
            witness = (f"(g,M,N,F)=({grp.elements[g]},{labels[i]},"
                       f"{labels[j]},{labels[k]})")
            break
    report.add("fusion_invariant", witness is None, witness=witness)
    return report


def orbit(act: ModuleAction, label: str) -> list[str]:
    """The G-orbit of a label, sorted by label index."""
    start = act.datum.index(label)
    seen = {int(act.images[g, start]) for g in range(act.group.order)}
    return [act.datum.labels[i] for i in sorted(seen)]


def stabilizer(act: ModuleAction, label: str) -> Subgroup:
    """The subgroup of elements fixing the label."""
    i = act.datum.index(label)
    idx = tuple(g for g in range(act.group.order) if act.images[g, i] == i)
    return Subgroup(act.group, idx)


def orbits(act: ModuleAction) -> list[tuple[str, list[str]]]:
    """All orbits as (representative, members), representative = least label index."""
    seen: set[str] = set()
    out = []
    for label in act.datum.labels:
        if label in seen:
            continue
        members = orbit(act, label)
        seen.update(members)
        out.append((members[0], members))
    return out


def stable_count(act: ModuleAction, element: str) -> int:
    """Number of labels fixed by the element."""
    g = act.group.index(element)
    return int(np.sum(act.images[g] == np.arange(act.datum.size)))


def burnside_check(act: ModuleAction) -> ValidationReport:
    """Verify the double count sum_g |fixed(g)| = sum_M |G_M| = l·|G|."""
    report = ValidationReport("Burnside counting")
    grp = act.group
    total_fixed = sum(stable_count(act, name) for name in grp.elements)
    stab_sum = sum(stabilizer(act, lab).order for lab in act.datum.labels)
    n_orbits = len(orbits(act))
    report.add("fixed_points_equal_stabilizer_sum", total_fixed == stab_sum,
               detail=f"{total_fixed} vs {stab_sum}")
    report.add("orbit_count_times_group_order", total_fixed == n_orbits * grp.order,
               detail=f"{total_fixed} vs {n_orbits}*{grp.order}")
    nontrivial = total_fixed - stable_count(act, grp.elements[grp.identity])
    expected = n_orbits * grp.order - act.datum.size
    report.add("nonidentity_fixed_count", nontrivial == expected,
               detail=f"{nontrivial} vs l|G|-n = {expected}")
    return report


def twisted_stabilizer_checker(act: ModuleAction) -> ValidationReport:
    """Full-stabilizer criterion for twisted sectors of a cyclic group.

    Hypotheses: the acting group is cyclic and every label stabilizer is the
    whole group or trivial. Under them, counting forces every twisted-sector
    module to have full stabilizer; the report verifies the counting identity
    sum_{g != e} |fixed(g)| = l·|G| - n = p·|G| + q/|G| - l numerically and
    states the conclusion. Violated hypotheses yield an "inapplicable" report.
    """
    report = ValidationReport("twisted-sector stabilizers")
    grp = act.group
    gens = [i for i in range(grp.order) if grp.element_order(i) == grp.order]
    if not gens:
        report.add("hypothesis_cyclic_group", False,
                   detail="inapplicable: group is not cyclic")
        return report
    report.add("hypothesis_cyclic_group", True)

    offending = None
    p = q = 0
    for lab in act.datum.labels:
        k = stabilizer(act, lab).order
        if k == grp.order:
            p += 1
        elif k == 1:
            q += 1
        else:
            offending = f"{lab} (|G_M|={k})"
            break
    if offending is not None:
        report.add("hypothesis_stabilizers_full_or_trivial", False,
                   witness=offending, detail="inapplicable")
        return report
    report.add("hypothesis_stabilizers_full_or_trivial", True)

    n = act.datum.size
    l = len(orbits(act))
    twisted_total = sum(stable_count(act, name) for name in grp.elements) \
        - stable_count(act, grp.elements[grp.identity])
    lhs_orbit_form = p * grp.order + (q // grp.order if grp.order else 0) - l
    report.add("twisted_count_identity",
               twisted_total == l * grp.order - n == lhs_orbit_form,
               detail=(f"sum_(g!=e)|fixed(g)|={twisted_total}, l|G|-n="
                       f"{l * grp.order - n}, p|G|+q/|G|-l={lhs_orbit_form}"))
    report.add("conclusion_full_twisted_stabilizers", True,
               detail=(f"every g-twisted module (g != e) has G_M = G; "
                       f"sector sizes {[stable_count(act, nm) for nm in grp.elements]}"))
    return report

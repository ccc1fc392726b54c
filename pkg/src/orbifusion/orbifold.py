"""Type-one orbifold module catalogs and their closed-formula S-entries.

A catalog lists the fixed-point-subalgebra irreducibles that sit inside
untwisted modules: one entry per (orbit of a base label, irreducible character
of its stabilizer). Quantum dimensions and extended S-entries follow from the
base datum by closed formulas:

    qdim(M, λ)          = |G : G_M| · dim λ · qdim(M)
    S[(M,λ), (W,μ)]     = (dim λ / |G_M|) · dim μ · Σ_{N in orbit(W)} S[M, N]

Twisted-sector ("type two") entries have no such formulas and are represented
only through counts (see :func:`~orbifusion.space.annihilator_dimension_report`).

Where two coefficient forms appear for the same pushforward identity, the
displayed-equation forms above and the vacuum scaling S[V, W] = |G|·S[V^G, W]
are the ones implemented and checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .characters import CharacterTable, irr_abelian
from .errors import MathematicalError, StructuralError
from .groups import ModuleAction, Subgroup, orbits, stabilizer
from .modular import ModularDatum, global_dimension, qdim
from .report import ValidationReport


@dataclass(frozen=True)
class TypeOneLabel:
    """Catalog key: an orbit representative plus a stabilizer character."""

    orbit_rep: str
    char_index: int
    char_name: str

    def __str__(self) -> str:
        return f"({self.orbit_rep},{self.char_name})"


@dataclass(frozen=True, eq=False)
class OrbitRecord:
    """One base orbit with its stabilizer and that stabilizer's character table."""

    rep: str
    members: tuple[str, ...]
    stab: Subgroup
    table: CharacterTable  # table of stab.as_group(), rows indexed like stab.indices

    @property
    def stab_order(self) -> int:
        return self.stab.order

    def char_value(self, char_index: int, parent_element_index: int) -> complex:
        """Character value at a parent-group element lying in the stabilizer."""
        local = self.stab.indices.index(parent_element_index)
        return self.table.value(char_index, local)


class TypeOneCatalog:
    """Ordered catalog of type-one labels with quantum dimensions.

    Entries are sorted by (orbit representative index, character index);
    identical inputs always produce identical order and values.
    """

    def __init__(self, datum: ModularDatum, action: ModuleAction,
                 records: list[OrbitRecord]):
        self.datum = datum
        self.action = action
        self.records = {rec.rep: rec for rec in records}
        order = sorted(records, key=lambda r: datum.index(r.rep))
        entries: list[TypeOneLabel] = []
        qdims: list[float] = []
        g_order = action.group.order
        for rec in order:
            base_q = qdim(datum, rec.rep)
            for ci, cname in enumerate(rec.table.names):
                entries.append(TypeOneLabel(rec.rep, ci, cname))
                qdims.append((g_order // rec.stab_order)
                             * rec.table.dims[ci] * base_q)
        self.entries: tuple[TypeOneLabel, ...] = tuple(entries)
        self.qdims = np.array(qdims)
        self._pos = {(e.orbit_rep, e.char_name): i for i, e in enumerate(entries)}

    def __len__(self) -> int:
        return len(self.entries)

    def rep_of(self, label: str) -> str:
        """Orbit representative of any base label."""
        idx = self.datum.index(label)
        for rec in self.records.values():
            if label in rec.members:
                return rec.rep
        raise StructuralError(f"label {self.datum.labels[idx]!r} not in any orbit")

    def record(self, label: str) -> OrbitRecord:
        return self.records[self.rep_of(label)]

    def find(self, orbit_rep: str, char_name: str) -> TypeOneLabel:
        try:
            return self.entries[self._pos[(orbit_rep, char_name)]]
        except KeyError:
            raise StructuralError(
                f"no catalog entry ({orbit_rep},{char_name})") from None

    def position(self, entry: TypeOneLabel) -> int:
        try:
            return self._pos[(entry.orbit_rep, entry.char_name)]
        except KeyError:
            raise StructuralError(f"entry {entry} not in catalog") from None

    def qdim_of(self, entry: TypeOneLabel) -> float:
        return float(self.qdims[self.position(entry)])

    @property
    def vacuum_entry(self) -> TypeOneLabel:
        return self.entries[0]

    def s_block(self) -> np.ndarray:
        """The full extended-S block over catalog entries."""
        n = len(self.entries)
        block = np.zeros((n, n), dtype=complex)
        for i, a in enumerate(self.entries):
            for j, b in enumerate(self.entries):
                block[i, j] = extended_s_entry(self, a, b)
        return block


def build_catalog(md: ModularDatum, act: ModuleAction,
                  tables=None) -> TypeOneCatalog:
    """Assemble the type-one catalog from a datum, an action, and stabilizer tables.

    ``tables`` maps a stabilizer (frozenset of parent element indices) to a
    validated :class:`CharacterTable` of that subgroup-as-group. Abelian
    stabilizers without a supplied table get their exact table generated;
    a non-abelian stabilizer with no table is an error. Every table used must
    satisfy the regular-representation identity sum dims² = |G_M|, which the
    extended-S closed form relies on.
    """
    tables = dict(tables or {})
    records = []
    for rep, members in orbits(act):
        stab = stabilizer(act, rep)
        key = frozenset(stab.indices)
        table = tables.get(key)
        if table is None:
            if not stab.is_abelian():
                raise StructuralError(
                    f"missing character table for non-abelian stabilizer of {rep!r}")
            sub_group, _ = stab.as_group()
            table = irr_abelian(sub_group)
        if table.group.order != stab.order:
            raise StructuralError(
                f"character table for stabilizer of {rep!r} has wrong group order")
        if sum(d * d for d in table.dims) != stab.order:
            raise StructuralError(
                f"character table for stabilizer of {rep!r} violates "
                f"sum dims^2 = |G_M| = {stab.order}")
        records.append(OrbitRecord(rep, tuple(members), stab, table))
    return TypeOneCatalog(md, act, records)


def type_one_count(md: ModularDatum, act: ModuleAction, tables=None) -> int:
    """Number of type-one labels: sum over orbits of |Irr(G_M)|."""
    return len(build_catalog(md, act, tables))


def extended_s_entry(cat: TypeOneCatalog, a: TypeOneLabel, b: TypeOneLabel) -> complex:
    """Closed-formula S-entry between two catalog labels."""
    cat.position(a)
    cat.position(b)
    rec_a = cat.records[a.orbit_rep]
    rec_b = cat.records[b.orbit_rep]
    s = cat.datum.s_matrix
    row = cat.datum.index(a.orbit_rep)
    orbit_sum = sum(s[row, cat.datum.index(n)] for n in rec_b.members)
    dim_a = rec_a.table.dims[a.char_index]
    dim_b = rec_b.table.dims[b.char_index]
    return complex(dim_a / rec_a.stab_order * dim_b * orbit_sum)


def module_s_vector(cat: TypeOneCatalog, base_label: str, b: TypeOneLabel) -> complex:
    """S-entry of a whole base module against a catalog label.

    Equals dim μ_b · Σ_{N in orbit(b)} S[M, N], and decomposes exactly through
    the per-character entries: Σ_λ dim λ · S[(M,λ), b].
    """
    cat.position(b)
    rec_b = cat.records[b.orbit_rep]
    s = cat.datum.s_matrix
    row = cat.datum.index(base_label)
    orbit_sum = sum(s[row, cat.datum.index(n)] for n in rec_b.members)
    value = complex(rec_b.table.dims[b.char_index] * orbit_sum)

    rec_m = cat.record(base_label)
    through_entries = sum(
        rec_m.table.dims[ci] * extended_s_entry(
            cat, TypeOneLabel(rec_m.rep, ci, rec_m.table.names[ci]), b)
        for ci in range(rec_m.table.size))
    if abs(value - through_entries) > max(cat.datum.tolerance, 1e-12):
        raise MathematicalError(
            f"module S-vector for {base_label!r} against {b} does not decompose "
            f"through catalog entries: {value:.9g} vs {through_entries:.9g}")
    return value


def proportionality_check(cat: TypeOneCatalog) -> ValidationReport:
    """Same-orbit S-entries are proportional to quantum dimensions.

    For each orbit, each pair of its characters (λ1, λ2), and every catalog
    column E:  S[(M,λ1),E] / qdim(M,λ1) = S[(M,λ2),E] / qdim(M,λ2).
    """
    report = ValidationReport("same-orbit S-entry proportionality")
    tol = cat.datum.tolerance
    worst = 0.0
    witness = None
    for rec in cat.records.values():
        chars = [TypeOneLabel(rec.rep, ci, rec.table.names[ci])
                 for ci in range(rec.table.size)]
        for i in range(len(chars)):
            for j in range(i + 1, len(chars)):
                qi = cat.qdim_of(chars[i])
                qj = cat.qdim_of(chars[j])
                for col in cat.entries:
                    ratio_i = extended_s_entry(cat, chars[i], col) / qi
                    ratio_j = extended_s_entry(cat, chars[j], col) / qj
                    dev = abs(ratio_i - ratio_j)
                    if dev > worst:
                        worst = dev
                        if dev > tol and witness is None:
                            witness = f"{chars[i]},{chars[j]} against {col}"
    report.add("proportional_to_qdim", worst <= tol, worst, witness)
    return report


def vacuum_scaling_check(cat: TypeOneCatalog) -> ValidationReport:
    """Vacuum-row scaling: whole-module row = |G| times the vacuum entry row.

    Also checks the closed form dim μ · |G| · S[0, rep(b)] / |G_W| for each
    column, which exercises S-invariance of the vacuum row across orbits.
    """
    report = ValidationReport("vacuum scaling")
    md = cat.datum
    g_order = cat.action.group.order
    vac_rep = cat.rep_of(md.vacuum)
    vac_entry = cat.entries[cat._pos[(vac_rep, cat.records[vac_rep].table.names[0])]]
    tol = md.tolerance

    worst_scale = 0.0
    worst_closed = 0.0
    witness_scale = witness_closed = None
    for b in cat.entries:
        whole = module_s_vector(cat, md.vacuum, b)
        per_char = extended_s_entry(cat, vac_entry, b)
        dev = abs(whole - g_order * per_char)
        if dev > worst_scale:
            worst_scale = dev
            if dev > tol and witness_scale is None:
                witness_scale = str(b)
        rec_b = cat.records[b.orbit_rep]
        closed = (rec_b.table.dims[b.char_index] * g_order
                  * md.entry(md.vacuum, b.orbit_rep) / rec_b.stab_order)
        dev_c = abs(whole - closed)
        if dev_c > worst_closed:
            worst_closed = dev_c
            if dev_c > tol and witness_closed is None:
                witness_closed = str(b)
    report.add("whole_row_is_group_order_times_entry", worst_scale <= tol,
               worst_scale, witness_scale)
    report.add("vacuum_row_closed_form", worst_closed <= tol,
               worst_closed, witness_closed)
    return report


def qdim_relations_check(cat: TypeOneCatalog) -> ValidationReport:
    """Quantum-dimension bookkeeping between the base datum and the catalog.

    (i) per base module: Σ_λ dim λ · qdim(M,λ) = |G| · qdim(M);
    (ii) catalog total: Σ entries qdim² = |G| · glob(base).
    """
    report = ValidationReport("quantum-dimension relations")
    md = cat.datum
    g_order = cat.action.group.order
    tol = md.tolerance

    worst = 0.0
    witness = None
    for label in md.labels:
        rec = cat.record(label)
        total = sum(rec.table.dims[ci]
                    * cat.qdim_of(TypeOneLabel(rec.rep, ci, rec.table.names[ci]))
                    for ci in range(rec.table.size))
        dev = abs(total - g_order * qdim(md, label))
        if dev > worst:
            worst = dev
            if dev > tol and witness is None:
                witness = label
    report.add("per_module_qdim_sum", worst <= tol, worst, witness)

    share = float(np.sum(cat.qdims ** 2))
    expected = g_order * global_dimension(md)
    dev = abs(share - expected)
    report.add("type_one_share_of_global_dimension", dev <= tol, dev,
               detail=f"sum qdim^2 = {share:.12g} vs |G|*glob = {expected:.12g}")
    return report


def inner_product_modules(cat: TypeOneCatalog, m: str, n: str) -> int:
    """Pairing of two embedded base modules: |G_M| on the same orbit, else 0."""
    rec_m = cat.record(m)
    rec_n = cat.record(n)
    if rec_m.rep != rec_n.rep:
        return 0
    return sum(d * d for d in rec_m.table.dims)

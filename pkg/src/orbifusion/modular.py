"""Modular data: label sets with a unitary symmetric S-matrix.

Everything downstream consumes a :class:`ModularDatum`; this module owns the
axioms (unitarity, symmetry, duality permutation, positive vacuum row),
fusion coefficients via the Verlinde sum, quantum dimensions, and the
bilinear extension of S-entries to formal sums of labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import IntegralityError, MathematicalError, StructuralError
from .report import ValidationReport

#: Looser tolerance for "is this a nonnegative integer" checks: the fusion sum
#: accumulates d+1 floating-point summands, so accumulation error is separated
#: from structural failure.
INTEGRALITY_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class ModularDatum:
    """An ordered label set, its S-matrix, and the distinguished vacuum.

    Parameters
    ----------
    labels:
        Ordered, distinct module identifiers. The vacuum must sit at index 0.
    s_matrix:
        Square complex matrix indexed like ``labels``.
    vacuum:
        The distinguished label; defaults to ``labels[0]`` and must equal it.
    tolerance:
        Nonnegative comparison tolerance for all matrix identities.
    """

    labels: tuple[str, ...]
    s_matrix: np.ndarray
    vacuum: str = None  # type: ignore[assignment]
    tolerance: float = 1e-9

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise StructuralError("empty label set")
        if len(set(labels)) != len(labels):
            raise StructuralError("labels must be distinct")
        s = np.asarray(self.s_matrix, dtype=complex)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise StructuralError(f"s_matrix must be square, got shape {s.shape}")
        if s.shape[0] != len(labels):
            raise StructuralError(
                f"s_matrix dimension {s.shape[0]} != number of labels {len(labels)}")
        s.setflags(write=False)
        object.__setattr__(self, "s_matrix", s)
        vacuum = labels[0] if self.vacuum is None else str(self.vacuum)
        if vacuum != labels[0]:
            raise StructuralError(
                f"vacuum {vacuum!r} must be the first label {labels[0]!r}")
        object.__setattr__(self, "vacuum", vacuum)
        if not (self.tolerance >= 0):
            raise StructuralError("tolerance must be nonnegative")
        object.__setattr__(
            self, "_index", {lab: i for i, lab in enumerate(labels)})

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise StructuralError(f"unknown label {label!r}") from None

    def entry(self, a: str, b: str) -> complex:
        return complex(self.s_matrix[self.index(a), self.index(b)])


@dataclass(frozen=True, eq=False)
class FusionTensor:
    """Nonnegative-integer coefficients N_{i,j}^k over label triples."""

    labels: tuple[str, ...]
    table: np.ndarray  # shape (n, n, n), integer dtype

    def __post_init__(self):
        t = np.asarray(self.table)
        n = len(self.labels)
        if t.shape != (n, n, n):
            raise StructuralError(f"fusion table shape {t.shape} != ({n},{n},{n})")
        if (t < 0).any():
            raise StructuralError("fusion coefficients must be nonnegative")
        # vacuum is the fusion unit and fusion is commutative
        if not np.array_equal(t[0], np.eye(n, dtype=t.dtype)):
            raise MathematicalError("vacuum row is not the identity: N_{0,j}^k != delta_{j,k}")
        if not np.array_equal(t, t.transpose(1, 0, 2)):
            raise MathematicalError("fusion coefficients are not symmetric in (i, j)")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    def coeff(self, i: str, j: str, k: str) -> int:
        try:
            return int(self.table[self._index[i], self._index[j], self._index[k]])
        except KeyError as exc:
            raise StructuralError(f"unknown label {exc.args[0]!r}") from None

    def triples(self):
        """All (i, j, k, N_{i,j}^k) in lexicographic index order."""
        n = len(self.labels)
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    yield (self.labels[a], self.labels[b], self.labels[c],
                           int(self.table[a, b, c]))


class FormalModuleSum:
    """Finite nonnegative-rational linear combination of labels."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        acc: dict[str, Fraction] = {}
        for label, mult in dict(terms or {}).items():
            if not isinstance(mult, Rational):
                raise StructuralError(
                    f"multiplicity of {label!r} must be rational, got {type(mult).__name__}")
            frac = Fraction(mult)
            if frac < 0:
                raise StructuralError(f"negative multiplicity for {label!r}")
            if frac:
                acc[str(label)] = frac
        self._terms = acc

    @property
    def terms(self) -> dict[str, Fraction]:
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        return isinstance(other, FormalModuleSum) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "FormalModuleSum") -> "FormalModuleSum":
        acc = dict(self._terms)
        for label, mult in other._terms.items():
            acc[label] = acc.get(label, Fraction(0)) + mult
        return FormalModuleSum(acc)

    def scale(self, factor) -> "FormalModuleSum":
        factor = Fraction(factor)
        return FormalModuleSum({lab: m * factor for lab, m in self._terms.items()})

    def is_integral(self) -> bool:
        return all(m.denominator == 1 for m in self._terms.values())

    def total(self) -> Fraction:
        return sum(self._terms.values(), Fraction(0))

    def __repr__(self):
        inner = ", ".join(f"{lab!r}: {m}" for lab, m in sorted(self._terms.items()))
        return f"FormalModuleSum({{{inner}}})"


def _permutation_from_s_squared(md: ModularDatum):
    """Return the duality permutation encoded by S², or None with the deviation.

    S² must be a 0/1 permutation matrix within tolerance; the permutation sends
    each label index to its dual's index.
    """
    s2 = md.s_matrix @ md.s_matrix
    n = md.size
    perm = np.full(n, -1, dtype=int)
    deviation = 0.0
    ok = True
    for i in range(n):
        row = s2[i]
        j = int(np.argmax(np.abs(row)))
        off = np.abs(row).copy()
        off[j] = np.abs(row[j] - 1.0)
        dev = float(off.max())
        deviation = max(deviation, dev)
        if dev > md.tolerance:
            ok = False
        perm[i] = j
    if ok and sorted(perm.tolist()) != list(range(n)):
        ok = False
    return (perm if ok else None), deviation


def validate(md: ModularDatum) -> ValidationReport:
    """Check every modular-data axiom, reporting each failure with its deviation.

    Structural problems (non-square matrix, duplicate labels) are raised by the
    :class:`ModularDatum` constructor; this report covers the axioms: unitarity,
    symmetry, S² a permutation, strictly positive vacuum row/column, and
    integrality of all Verlinde sums.
    """
    report = ValidationReport("modular datum")
    s = md.s_matrix
    n = md.size
    tol = md.tolerance

    dev_unitary = float(np.abs(s @ s.conj().T - np.eye(n)).max())
    report.add("unitary", dev_unitary <= tol, dev_unitary)

    dev_sym = float(np.abs(s - s.T).max())
    report.add("symmetric", dev_sym <= tol, dev_sym)

    perm, dev_perm = _permutation_from_s_squared(md)
    report.add("s_squared_permutation", perm is not None, dev_perm)

    # vacuum row and column must be strictly positive reals
    vac = np.concatenate([s[0], s[:, 0]])
    dev_imag = float(np.abs(vac.imag).max())
    min_real = float(vac.real.min())
    positive = dev_imag <= tol and min_real > tol
    report.add("vacuum_row_positive", positive, dev_imag,
               detail=f"min real part {min_real:.3e}")

    if perm is not None and dev_unitary <= tol:
        raw = _verlinde_raw(md, perm)
        dev_int = float(np.abs(raw - np.round(raw.real)).max())
        neg = float(np.round(raw.real).min())
        report.add("verlinde_integral", dev_int <= INTEGRALITY_TOL and neg >= 0,
                   dev_int)
    else:
        report.add("verlinde_integral", False,
                   detail="skipped: S-matrix axioms failed")
    return report


def dual_permutation(md: ModularDatum) -> list[int]:
    """Index permutation i -> i' read off S²; raises if S² is not a permutation."""
    perm, dev = _permutation_from_s_squared(md)
    if perm is None:
        raise MathematicalError(
            f"S^2 is not a permutation matrix (deviation {dev:.3e})")
    return perm.tolist()


def dual(md: ModularDatum, label: str) -> str:
    """The dual label i' with (S²)_{i,i'} = 1."""
    perm = dual_permutation(md)
    return md.labels[perm[md.index(label)]]


def _verlinde_raw(md: ModularDatum, perm) -> np.ndarray:
    """Raw complex Verlinde sums N_{i,j}^k = sum_s S_{i,s} S_{j,s} S_{k',s} / S_{0,s}."""
    s = md.s_matrix
    s_dual = s[perm, :]
    return np.einsum("is,js,ks,s->ijk", s, s, s_dual, 1.0 / s[0])


def verlinde_fusion(md: ModularDatum) -> FusionTensor:
    """Evaluate the Verlinde sums and round them to the fusion tensor.

    Every raw value must lie within :data:`INTEGRALITY_TOL` of a nonnegative
    integer; a larger deviation signals invalid modular data and raises
    :class:`IntegralityError`.
    """
    perm, dev = _permutation_from_s_squared(md)
    if perm is None:
        raise MathematicalError(
            f"S^2 is not a permutation matrix (deviation {dev:.3e})")
    raw = _verlinde_raw(md, perm)
    rounded = np.round(raw.real)
    dev_int = np.abs(raw - rounded)
    if dev_int.max() > INTEGRALITY_TOL:
        i, j, k = np.unravel_index(int(np.argmax(dev_int)), raw.shape)
        raise IntegralityError(
            f"Verlinde sum N[{md.labels[i]},{md.labels[j]}]^{md.labels[k]} = "
            f"{raw[i, j, k]:.9g} is not an integer within {INTEGRALITY_TOL}")
    if rounded.min() < 0:
        i, j, k = np.unravel_index(int(np.argmin(rounded)), raw.shape)
        raise IntegralityError(
            f"Verlinde sum N[{md.labels[i]},{md.labels[j]}]^{md.labels[k]} = "
            f"{rounded[i, j, k]:.0f} is negative")
    return FusionTensor(md.labels, rounded.astype(np.int64))


def qdim(md: ModularDatum, label: str) -> float:
    """Quantum dimension S_{0,i} / S_{0,0}; strictly positive for valid data."""
    value = md.s_matrix[0, md.index(label)] / md.s_matrix[0, 0]
    if not (value.real > 0 and abs(value.imag) <= md.tolerance):
        raise MathematicalError(
            f"quantum dimension of {label!r} = {complex(value):.6g} is not positive")
    return float(value.real)


def global_dimension(md: ModularDatum) -> float:
    """Sum of squared quantum dimensions; equals 1/S_{0,0}² for valid data."""
    return float(sum(qdim(md, lab) ** 2 for lab in md.labels))


def extended_s(md: ModularDatum, u: FormalModuleSum, w: FormalModuleSum) -> complex:
    """Bilinear extension of S-entries to formal sums with integer multiplicities."""
    for side in (u, w):
        if not side.is_integral():
            raise StructuralError(
                "extended_s requires integral multiplicities, got "
                f"{side!r}")
    total = 0.0 + 0.0j
    for lab_u, mult_u in u.terms.items():
        row = md.index(lab_u)
        for lab_w, mult_w in w.terms.items():
            total += int(mult_u) * int(mult_w) * md.s_matrix[row, md.index(lab_w)]
    return complex(total)


def identify_by_s_row(md: ModularDatum, u: FormalModuleSum, w: FormalModuleSum) -> bool:
    """True iff u and w have the same extended S-row against every label.

    By unitarity of S this holds iff the two formal sums are equal.
    """
    for label in md.labels:
        probe = FormalModuleSum({label: 1})
        if abs(extended_s(md, u, probe) - extended_s(md, w, probe)) > md.tolerance:
            return False
    return True


def fusion_s_identity_check(md: ModularDatum,
                            tensor: FusionTensor | None = None) -> ValidationReport:
    """Verify sum_l N_{i,j}^l S_{l,k} = S_{i,k} S_{j,k} / S_{0,k} over all triples."""
    report = ValidationReport("fusion/S identity")
    if tensor is None:
        tensor = verlinde_fusion(md)
    s = md.s_matrix
    lhs = np.einsum("ijl,lk->ijk", tensor.table, s)
    rhs = np.einsum("ik,jk,k->ijk", s, s, 1.0 / s[0])
    dev = np.abs(lhs - rhs)
    worst = float(dev.max())
    witness = None
    if worst > md.tolerance:
        i, j, k = np.unravel_index(int(np.argmax(dev)), dev.shape)
        witness = f"(i,j,k)=({md.labels[i]},{md.labels[j]},{md.labels[k]})"
    report.add("s_diagonalizes_fusion", worst <= md.tolerance, worst, witness)
    return report

"""Abstract level-by-level matrix systems.

A level system stores the dimensions |Omega_l|, the difference matrices
(1-Phi)_l and the 0/1 inclusion matrices i_l of a partition ladder without
keeping the graph around, so ladders of infinite graphs whose levels are
finite can be fed to the same limit machinery.  Symbolic matrix systems
(M, I) enter through transposes: the difference map is I^t - M^t and the
inclusion is I^t.

Two ladder families are built in.  ``dyck2`` models the two-bracket Dyck
shift: level-l basis vectors are the words of length l over the push
symbols {a, b}; the inclusion prepends a symbol both ways, the two push
letters append a symbol, and the single pop letter available to a class
drops its last symbol, which re-expands over the four two-symbol prepends.
``int_line`` models the two-sided integer line with a marked origin:
level-l basis vectors are the integers with absolute value below l plus a
single "rest" class for everything farther out.  Both generators check
themselves against frozen low-level matrices and refuse to emit anything on
mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional, Sequence

from .engine import EngineError, KTheoryResult, _tower_limits, \
    inclusion_matrix, one_minus_phi_matrix
from .graphs import Flag, LabelledGraph, ValidationReport
from .partitions import refine_tower
from .zmodule import IntMatrix


class LevelSystemError(Exception):
    pass


@dataclass(frozen=True)
class LevelSystem:
    """dims has one entry per level; phi[l] and incl[l] map level l+1 to l+2
    (0-based lists, 1-based levels), so len(phi) == len(incl) == len(dims)-1.
    """

    dims: tuple[int, ...]
    phi: tuple[IntMatrix, ...]
    incl: tuple[IntMatrix, ...]
    labels: Optional[tuple[tuple[str, ...], ...]] = None

    def __post_init__(self):
        if len(self.dims) < 1 or any(d < 1 for d in self.dims):
            raise LevelSystemError("dims must be positive")
        if len(self.phi) != len(self.dims) - 1 or len(self.incl) != len(self.phi):
            raise LevelSystemError("need exactly one phi and one incl matrix "
                                   "between consecutive levels")
        for k, (p, i) in enumerate(zip(self.phi, self.incl)):
            want = (self.dims[k + 1], self.dims[k])
            if (p.rows, p.cols) != want or (i.rows, i.cols) != want:
                raise LevelSystemError(
                    f"matrix shape at level {k + 1} is not {want}")
        if self.labels is not None:
            if len(self.labels) != len(self.dims) or any(
                    len(l) != d for l, d in zip(self.labels, self.dims)):
                raise LevelSystemError("labels do not match dims")

    @property
    def matrix_levels(self) -> int:
        return len(self.phi)

    def to_document(self) -> dict:
        doc = {
            "dims": list(self.dims),
            "phi": [[[str(x) for x in row] for row in m.data] for m in self.phi],
            "incl": [[[str(x) for x in row] for row in m.data] for m in self.incl],
        }
        if self.labels is not None:
            doc["labels"] = [list(l) for l in self.labels]
        return doc


def _parse_matrix(rows, what: str) -> IntMatrix:
    try:
        data = [[int(x) for x in row] for row in rows]
    except (TypeError, ValueError) as exc:
        raise LevelSystemError(f"bad integer entry in {what}: {exc}") from exc
    if not data:
        raise LevelSystemError(f"{what} has no rows")
    return IntMatrix(data)


def parse_level_system(document: dict) -> LevelSystem:
    try:
        dims = tuple(int(d) for d in document["dims"])
        phi = tuple(_parse_matrix(m, f"phi[{k}]")
                    for k, m in enumerate(document["phi"]))
        incl = tuple(_parse_matrix(m, f"incl[{k}]")
                     for k, m in enumerate(document["incl"]))
    except KeyError as exc:
        raise LevelSystemError(f"level-system document lacks field {exc}") from exc
    labels = document.get("labels")
    if labels is not None:
        labels = tuple(tuple(str(x) for x in level) for level in labels)
    return LevelSystem(dims, phi, incl, labels)


def validate_levels(ls: LevelSystem) -> ValidationReport:
    """Report-style checks: inclusion entries, nonzero columns, intertwining.

    Shape compatibility is already enforced by the LevelSystem constructor.
    """
    flags: dict[str, Flag] = {"shapes": Flag(True)}

    incl_witness = None
    for k, m in enumerate(ls.incl):
        for i, row in enumerate(m.data):
            for j, x in enumerate(row):
                if x not in (0, 1):
                    incl_witness = f"incl[{k + 1}][{i}][{j}] = {x}"
                    break
            if incl_witness:
                break
        if incl_witness is None:
            for j in range(m.cols):
                if all(m.data[i][j] == 0 for i in range(m.rows)):
                    incl_witness = f"incl[{k + 1}] column {j} is zero"
                    break
        if incl_witness:
            break
    flags["inclusions_unit"] = Flag(incl_witness is None, incl_witness)

    tw_witness = None
    for k in range(ls.matrix_levels - 1):
        lhs = ls.phi[k + 1] @ ls.incl[k]
        rhs = ls.incl[k + 1] @ ls.phi[k]
        if lhs != rhs:
            for i in range(lhs.rows):
                for j in range(lhs.cols):
                    if lhs.data[i][j] != rhs.data[i][j]:
                        tw_witness = (f"levels {k + 1}/{k + 2}, "
                                      f"row {i}, col {j}")
                        break
                if tw_witness:
                    break
        if tw_witness:
            break
    flags["intertwining"] = Flag(tw_witness is None, tw_witness)
    return ValidationReport(flags)


def from_symbolic_matrix_system(m_list: Sequence[IntMatrix],
                                i_list: Sequence[IntMatrix]) -> LevelSystem:
    """Level system of a symbolic matrix system: phi = I^t - M^t, incl = I^t."""
    if len(m_list) != len(i_list) or not m_list:
        raise LevelSystemError("need matching nonempty M and I sequences")
    for k, (m, i) in enumerate(zip(m_list, i_list)):
        if (m.rows, m.cols) != (i.rows, i.cols):
            raise LevelSystemError(f"M and I shapes differ at level {k + 1}")
        if any(x < 0 for row in m.data for x in row) or \
                any(x < 0 for row in i.data for x in row):
            raise LevelSystemError("symbolic matrix systems are nonnegative")
    dims = tuple(m.rows for m in m_list) + (m_list[-1].cols,)
    phi = tuple(i.transpose() - m.transpose()
                for m, i in zip(m_list, i_list))
    incl = tuple(i.transpose() for i in i_list)
    ls = LevelSystem(dims, phi, incl)
    report = validate_levels(ls)
    for name in ("inclusions_unit", "intertwining"):
        if not report.value(name):
            raise LevelSystemError(
                f"not a compatible system: {name} fails "
                f"({report[name].witness})")
    return ls


# ---------------------------------------------------------------------------
# built-in generators


@dataclass(frozen=True)
class GeneratorSpec:
    kind: Literal["dyck2", "int_line", "from_graph"]
    max_level: int = 8
    graph: Optional[LabelledGraph] = None

    def __post_init__(self):
        if self.max_level < 1:
            raise LevelSystemError("max_level must be >= 1")
        if self.kind == "from_graph" and self.graph is None:
            raise LevelSystemError("from_graph needs a graph payload")


_DYCK_SYMBOLS = ("a", "b")

# frozen ground truth for the two lowest Dyck levels, as {word: coefficient}
_DYCK_PHI1 = {
    "a": {"aa": -1, "ab": -2, "bb": -1},
    "b": {"aa": -1, "ba": -2, "bb": -1},
}
_DYCK_PHI2 = {
    "aa": {"aaa": -1, "aab": -1, "aba": -1, "bba": -1},
    "ab": {"aaa": -1, "aab": 1, "aba": -2, "abb": -1, "baa": -1, "bab": 1,
           "bba": -1},
    "ba": {"aab": -1, "aba": 1, "abb": -1, "baa": -1, "bab": -2, "bba": 1,
           "bbb": -1},
    "bb": {"aab": -1, "bab": -1, "bba": -1, "bbb": -1},
}


def _dyck_words(length: int) -> list[str]:
    words = [""]
    for _ in range(length):
        words = [s + w for s in _DYCK_SYMBOLS for w in words]
    return sorted(words)


def _dyck_level(level: int) -> tuple[IntMatrix, IntMatrix, list[str], list[str]]:
    lo = _dyck_words(level)
    hi = _dyck_words(level + 1)
    hi_index = {w: i for i, w in enumerate(hi)}
    incl_cols, phi_cols = [], []
    for w in lo:
        incl = [0] * len(hi)
        phi = [0] * len(hi)
        for s in _DYCK_SYMBOLS:
            incl[hi_index[s + w]] += 1
            phi[hi_index[s + w]] += 1      # inclusion part
            phi[hi_index[w + s]] -= 1      # the two push letters
        for s in _DYCK_SYMBOLS:            # the single pop letter re-expands
            for t in _DYCK_SYMBOLS:
                phi[hi_index[s + t + w[:-1]]] -= 1
        incl_cols.append(incl)
        phi_cols.append(phi)
    return (IntMatrix.from_columns(phi_cols, len(hi)),
            IntMatrix.from_columns(incl_cols, len(hi)), lo, hi)


def _check_dyck_ground_truth(phi: IntMatrix, lo: list[str], hi: list[str],
                             expected: dict[str, dict[str, int]]) -> None:
    hi_index = {w: i for i, w in enumerate(hi)}
    for j, w in enumerate(lo):
        col = {v: 0 for v in hi}
        for v, c in expected[w].items():
            col[v] = c
        got = [phi.data[i][j] for i in range(phi.rows)]
        want = [col[v] for v in hi]
        if got != want:
            raise LevelSystemError(
                f"dyck2 generator disagrees with the frozen level data on "
                f"column {w}: got {got}, expected {want}")


def _generate_dyck2(max_level: int) -> LevelSystem:
    phis, incls, label_rows = [], [], [_dyck_words(1)]
    for level in range(1, max_level + 1):
        phi, incl, lo, hi = _dyck_level(level)
        if level == 1:
            _check_dyck_ground_truth(phi, lo, hi, _DYCK_PHI1)
        if level == 2:
            _check_dyck_ground_truth(phi, lo, hi, _DYCK_PHI2)
        phis.append(phi)
        incls.append(incl)
        label_rows.append(hi)
    dims = tuple(2 ** l for l in range(1, max_level + 2))
    return LevelSystem(dims, tuple(phis), tuple(incls),
                       tuple(tuple(r) for r in label_rows))


def _int_line_basis(level: int) -> list[str]:
    return [str(n) for n in range(-(level - 1), level)] + [f"rest{level}"]


def _generate_int_line(max_level: int) -> LevelSystem:
    phis, incls, label_rows = [], [], [_int_line_basis(1)]
    for level in range(1, max_level + 1):
        lo = _int_line_basis(level)
        hi = _int_line_basis(level + 1)
        hi_index = {w: i for i, w in enumerate(hi)}
        phi_cols, incl_cols = [], []
        for w in lo:
            phi = [0] * len(hi)
            incl = [0] * len(hi)
            if w.startswith("rest"):
                incl[hi_index[str(level)]] += 1
                incl[hi_index[str(-level)]] += 1
                incl[hi_index[f"rest{level + 1}"]] += 1
                phi[hi_index[str(level - 1)]] -= 1
                phi[hi_index[str(-(level - 1))]] -= 1
                phi[hi_index[f"rest{level + 1}"]] -= 1
            else:
                n = int(w)
                incl[hi_index[w]] += 1
                if n != 0:
                    phi[hi_index[w]] += 1
                phi[hi_index[str(n - 1)]] -= 1
                phi[hi_index[str(n + 1)]] -= 1
            phi_cols.append(phi)
            incl_cols.append(incl)
        phis.append(IntMatrix.from_columns(phi_cols, len(hi)))
        incls.append(IntMatrix.from_columns(incl_cols, len(hi)))
        label_rows.append(hi)
    dims = tuple(2 * l for l in range(1, max_level + 2))
    return LevelSystem(dims, tuple(phis), tuple(incls),
                       tuple(tuple(r) for r in label_rows))


def _generate_from_graph(g: LabelledGraph, max_level: int) -> LevelSystem:
    tower = refine_tower(g, max_level=max_level + 1)
    if tower.stabilized_at is None and len(tower.partitions) <= max_level:
        raise LevelSystemError("tower did not stabilize within max_level; "
                               "raise max_level")
    phis, incls, label_rows = [], [], []
    label_rows.append(tuple(min(c) for c in tower.at_level(1).classes))
    dims = [len(tower.at_level(1))]
    for level in range(1, max_level + 1):
        phis.append(one_minus_phi_matrix(g, tower, level))
        incls.append(inclusion_matrix(g, tower, level))
        nxt = tower.at_level(level + 1)
        dims.append(len(nxt))
        label_rows.append(tuple(min(c) for c in nxt.classes))
    return LevelSystem(tuple(dims), tuple(phis), tuple(incls),
                       tuple(label_rows))


def builtin_generator(spec: GeneratorSpec) -> LevelSystem:
    """Generate the requested ladder; every output revalidates itself."""
    if spec.kind == "dyck2":
        ls = _generate_dyck2(spec.max_level)
    elif spec.kind == "int_line":
        ls = _generate_int_line(spec.max_level)
    elif spec.kind == "from_graph":
        ls = _generate_from_graph(spec.graph, spec.max_level)
    else:
        raise LevelSystemError(f"unknown generator kind {spec.kind!r}")
    report = validate_levels(ls)
    for name in ("inclusions_unit", "intertwining"):
        if not report.value(name):
            raise LevelSystemError(
                f"generator produced an inconsistent system: {name} fails "
                f"({report[name].witness})")
    return ls


def limit_ktheory(ls: LevelSystem) -> KTheoryResult:
    """Per-level kernels/cokernels chained into direct limits."""
    report = validate_levels(ls)
    for name in ("inclusions_unit", "intertwining"):
        if not report.value(name):
            raise EngineError(f"level system invalid: {name} fails "
                              f"({report[name].witness})")
    if ls.matrix_levels == 0:
        raise EngineError("level system has a single level and no matrices")
    k0, k1, rows, checks = _tower_limits(ls.dims, ls.phi, ls.incl)
    return KTheoryResult(mode="tower", k0=k0, k1=k1, levels=rows,
                         checks=checks, stabilized_at=None)

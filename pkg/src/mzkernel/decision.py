"""The decision procedure: is Ker L a Mathieu-Zhao space of K[G]?

Pipeline: validate and row-reduce the map, split on the characteristic,
build the gamma matrix over the relevant column group, and search its
live columns for a nonempty zero-sum subset.

* K semisimple for G (characteristic zero, or p not dividing |G|):
  Ker L is Mathieu-Zhao exactly when no nonempty subset T of live
  columns has sum_{j in T} gamma[i][j] = 0 for every row i.
* characteristic p dividing |G|: split G = H x T with H the Sylow
  p-part, |H| = p^a.  The gamma matrix is taken over the p'-part T from
  the values on the coset representatives; on top of the zero-sum
  condition, every dead character j must satisfy the offset equations
      sum_k chi_j(t_k^{-1}) * L(t_k h_q) = 0     for all rows, all q,
  and any violation is itself a checkable non-membership witness.

Verdicts always carry a machine-checkable witness when the answer is
NotMZ: either the zero-sum column subset or the failed offset equation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .characters import assert_split, gamma_matrix, GammaMatrix
from .groups import GroupSpec, sylow_split
from .subsetsum import SubsetSearchResult, zero_sum_subset_search

MAX_GROUP_ORDER = 64
MAX_ROWS = 8


class DecisionError(ValueError):
    pass


@dataclass
class ZeroSumSubset:
    """Nonempty set of live gamma columns (1-based) with zero column sum
    in every row; certifies NotMZ."""

    columns: tuple

    def as_json(self):
        return {"type": "zero_sum_subset", "columns": list(self.columns)}


@dataclass
class Eq31Failure:
    """Offset equation violation (all 1-based): row i, dead character j,
    coset offset q; certifies NotMZ on the modular path."""

    row: int
    character: int
    offset: int

    def as_json(self):
        return {
            "type": "equation_failure",
            "row": self.row,
            "character": self.character,
            "offset": self.offset,
        }


@dataclass
class Preprocessed:
    field: object
    group: GroupSpec
    rows: tuple                 # validated original rows
    reduced_rows: tuple         # exact row-space basis (possibly empty)
    is_ideal: bool
    is_vg: bool
    identity_coefficient_all_zero: bool
    rows_reduced: bool


@dataclass
class ModularData:
    p: int
    a: int
    sylow: GroupSpec
    coprime: GroupSpec
    split: object


@dataclass
class DecisionReport:
    verdict: str                # "MZ" | "NotMZ"
    reason: str
    pre: Preprocessed
    gamma: GammaMatrix | None
    column_group: GroupSpec | None
    dead_columns: tuple         # 1-based
    live_columns: tuple         # 1-based
    witness: object | None      # ZeroSumSubset | Eq31Failure | None
    modular: ModularData | None = None
    search: SubsetSearchResult | None = None

    @property
    def is_mz(self):
        return self.verdict == "MZ"

    def as_json(self):
        pre = self.pre
        out = {
            "verdict": self.verdict,
            "reason": self.reason,
            "field": str(pre.field.spec),
            "group": str(pre.group),
            "rows": len(pre.rows),
            "rank": len(pre.reduced_rows),
            "flags": {
                "is_ideal": pre.is_ideal,
                "is_vg": pre.is_vg,
                "identity_coefficient_all_zero": pre.identity_coefficient_all_zero,
            },
            "column_group": None if self.column_group is None else str(self.column_group),
            "dead_columns": list(self.dead_columns),
            "live_columns": list(self.live_columns),
            "witness": None if self.witness is None else self.witness.as_json(),
        }
        if self.modular is not None:
            out["modular"] = {
                "p": self.modular.p,
                "sylow_order": self.modular.sylow.order,
                "coprime_order": self.modular.coprime.order,
            }
        if self.search is not None:
            out["search"] = {
                "path": self.search.path,
                "modular_hits": self.search.modular_hits,
                "exact": self.search.exact,
                "filter_primes": list(self.search.primes),
            }
        return out


def instance_gamma(fld, group, rows, *, unsafe_large=False):
    """The gamma matrix a decision over this instance would search, with
    its column group: the full group when the characteristic does not
    divide |G|, the p'-part otherwise.  (None, None) for the zero map."""
    pre = validate_and_preprocess(fld, group, rows, unsafe_large=unsafe_large)
    if not pre.reduced_rows:
        return pre, None, None
    p = fld.characteristic
    if p == 0 or group.order % p != 0:
        return pre, gamma_matrix(pre.reduced_rows, group, fld), group
    split = sylow_split(group, p)
    coprime = split.coprime_spec
    values = [
        [row[split.coset_index(k, 0)] for k in range(coprime.order)]
        for row in pre.reduced_rows
    ]
    return pre, gamma_matrix(values, coprime, fld), coprime


def row_reduce(fld, rows):
    """Exact reduced row-echelon basis of the row space; zero rows drop."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for rr in range(rank, nrows):
            if not mat[rr][col].is_zero():
                pivot = rr
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = mat[rank][col].inverse()
        mat[rank] = [inv * x for x in mat[rank]]
        for rr in range(nrows):
            if rr != rank and not mat[rr][col].is_zero():
                factor = mat[rr][col]
                mat[rr] = [a - factor * b for a, b in zip(mat[rr], mat[rank])]
        rank += 1
        if rank == nrows:
            break
    return tuple(tuple(row) for row in mat[:rank])


def validate_and_preprocess(fld, group, rows, *, unsafe_large=False):
    """Check sizes and splitness, reduce the rows, and derive the shape
    flags the reports expose."""
    n = group.order
    if not rows:
        raise DecisionError("the linear map needs at least one row")
    rows = tuple(tuple(r) for r in rows)
    for row in rows:
        if len(row) != n:
            raise DecisionError(
                f"row length {len(row)} does not match the group order {n}"
            )
    if not unsafe_large:
        if n > MAX_GROUP_ORDER:
            raise DecisionError(
                f"group order {n} exceeds the default bound {MAX_GROUP_ORDER}"
            )
        if len(rows) > MAX_ROWS:
            raise DecisionError(
                f"{len(rows)} rows exceed the default bound {MAX_ROWS}"
            )
    # splitness: the column group must have a full set of characters in K
    p = fld.characteristic
    if p == 0 or group.order % p != 0:
        assert_split(group, fld)
    else:
        split = sylow_split(group, p)
        assert_split(split.coprime_spec, fld)
    reduced = row_reduce(fld, rows)
    # all rows constant: the kernel is the augmentation ideal (or everything)
    is_ideal = all(all(c == row[0] for c in row) for row in rows)
    # row space spanned by the identity-coefficient functional: the kernel
    # is the classical subspace of elements with zero identity coefficient
    is_vg = (
        len(reduced) == 1
        and not reduced[0][0].is_zero()
        and all(c.is_zero() for c in reduced[0][1:])
    )
    return Preprocessed(
        field=fld,
        group=group,
        rows=rows,
        reduced_rows=reduced,
        is_ideal=is_ideal,
        is_vg=is_vg,
        identity_coefficient_all_zero=all(row[0].is_zero() for row in rows),
        rows_reduced=reduced != rows,
    )


def partition_dead_live(gamma):
    """0-based (dead, live) column index lists of a gamma matrix; a column
    is dead when it is zero in every row."""
    dead, live = [], []
    for j in range(gamma.cols):
        (dead if gamma.column_is_zero(j) else live).append(j)
    return tuple(dead), tuple(live)


def check_equations_31(fld, split, rows, dead_columns):
    """Offset equations of the modular path.

    For each coset offset q (0-based) the values L(t_k h_q) over the
    p'-part form a row vector; its character transform must vanish on
    every dead character.  Returns the first violation as an Eq31Failure
    (1-based indices) or None.  Offset q = 0 reproduces the gamma matrix
    itself, where dead columns vanish by definition.
    """
    coprime = split.coprime_spec
    d = coprime.order
    for q in range(1, split.sylow_order):
        vals = [
            [row[split.coset_index(k, q)] for k in range(d)]
            for row in rows
        ]
        gm = gamma_matrix(vals, coprime, fld)
        for i, grow in enumerate(gm.entries):
            for j in dead_columns:
                if not grow[j].is_zero():
                    return Eq31Failure(row=i + 1, character=j + 1, offset=q + 1)
    return None


def decide(fld, group, rows, *, unsafe_large=False, backend=None, threads=1):
    """Decide whether Ker L is a Mathieu-Zhao space of K[G]."""
    pre = validate_and_preprocess(fld, group, rows, unsafe_large=unsafe_large)
    reduced = pre.reduced_rows
    if not reduced:
        # L = 0: the kernel is the whole algebra, trivially Mathieu-Zhao
        return DecisionReport(
            verdict="MZ",
            reason="zero-map",
            pre=pre,
            gamma=None,
            column_group=None,
            dead_columns=(),
            live_columns=(),
            witness=None,
        )
    p = fld.characteristic
    if p == 0 or group.order % p != 0:
        return _decide_semisimple(pre, backend, threads)
    return _decide_modular(pre, backend, threads)


def _decide_semisimple(pre, backend, threads):
    fld, group = pre.field, pre.group
    gamma = gamma_matrix(pre.reduced_rows, group, fld)
    dead, live = partition_dead_live(gamma)
    search = zero_sum_subset_search(gamma, live, backend=backend, threads=threads)
    if search.found:
        witness = ZeroSumSubset(columns=tuple(c + 1 for c in search.columns))
        return DecisionReport(
            verdict="NotMZ",
            reason="zero-sum-subset",
            pre=pre,
            gamma=gamma,
            column_group=group,
            dead_columns=tuple(j + 1 for j in dead),
            live_columns=tuple(j + 1 for j in live),
            witness=witness,
            search=search,
        )
    return DecisionReport(
        verdict="MZ",
        reason="no-zero-sum-subset",
        pre=pre,
        gamma=gamma,
        column_group=group,
        dead_columns=tuple(j + 1 for j in dead),
        live_columns=tuple(j + 1 for j in live),
        witness=None,
        search=search,
    )


def _decide_modular(pre, backend, threads):
    fld, group = pre.field, pre.group
    split = sylow_split(group, fld.characteristic)
    modular = ModularData(
        p=fld.characteristic,
        a=split.a,
        sylow=split.sylow_spec,
        coprime=split.coprime_spec,
        split=split,
    )
    coprime = split.coprime_spec
    d = coprime.order
    coset_values = [
        [row[split.coset_index(k, 0)] for k in range(d)]
        for row in pre.reduced_rows
    ]
    gamma = gamma_matrix(coset_values, coprime, fld)
    dead, live = partition_dead_live(gamma)
    common = dict(
        pre=pre,
        gamma=gamma,
        column_group=coprime,
        dead_columns=tuple(j + 1 for j in dead),
        live_columns=tuple(j + 1 for j in live),
        modular=modular,
    )
    failure = check_equations_31(fld, split, pre.reduced_rows, dead)
    if failure is not None:
        return DecisionReport(
            verdict="NotMZ", reason="offset-equation-failure",
            witness=failure, **common,
        )
    search = zero_sum_subset_search(gamma, live, backend=backend, threads=threads)
    if search.found:
        witness = ZeroSumSubset(columns=tuple(c + 1 for c in search.columns))
        return DecisionReport(
            verdict="NotMZ", reason="zero-sum-subset",
            witness=witness, search=search, **common,
        )
    return DecisionReport(
        verdict="MZ", reason="modular-conditions-hold",
        witness=None, search=search, **common,
    )


def verify_witness(report):
    """Recheck a NotMZ witness from scratch; True when it certifies.

    Zero-sum subsets are rechecked by exact summation of freshly built
    gamma entries; offset-equation failures by recomputing the single
    character sum and confirming it is nonzero.
    """
    if report.witness is None:
        return report.verdict == "MZ"
    pre = report.pre
    fld, group = pre.field, pre.group
    if isinstance(report.witness, ZeroSumSubset):
        cols = [c - 1 for c in report.witness.columns]
        if not cols:
            return False
        gamma = report.gamma
        live0 = {c - 1 for c in report.live_columns}
        if not set(cols) <= live0:
            return False
        for row in gamma.entries:
            acc = None
            for c in cols:
                acc = row[c] if acc is None else acc + row[c]
            if not acc.is_zero():
                return False
        return True
    if isinstance(report.witness, Eq31Failure):
        split = report.modular.split
        coprime = split.coprime_spec
        d = coprime.order
        i = report.witness.row - 1
        j = report.witness.character - 1
        q = report.witness.offset - 1
        row = pre.reduced_rows[i]
        vals = [[row[split.coset_index(k, q)] for k in range(d)]]
        gm = gamma_matrix(vals, coprime, fld)
        return not gm.entries[0][j].is_zero()
    return False

"""Definitional ground truth for the Mathieu-Zhao property.

Everything here works by enumeration over a small finite group algebra:
an element u is a universal root of the kernel when every power of u
stays in the kernel, and the kernel fails to be a Mathieu-Zhao space
exactly when some product c * u^m escapes the kernel for an exponent m
on the eventual cycle of the power sequence.  Power sequences in a
finite algebra are eventually periodic, so "for all sufficiently large
m" reduces to membership on the cycle values and the whole definition
becomes finitely checkable.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import alg_make, format_algebra_element
from .backend import resolve_backend
from .characters import primitive_idempotents
from .fields import FieldError
from .groups import sylow_split

__all__ = [
    "OracleError",
    "OracleBudget",
    "RootSet",
    "OracleCounterexample",
    "OracleReport",
    "RestrictionReport",
    "QuotientReport",
    "radical_elements",
    "definitional_mz_check",
    "idempotent_survey",
    "harness_subgroup_restriction",
    "harness_quotient",
]


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    """Hard caps; the oracle refuses instances above them rather than
    truncating the enumeration."""

    max_algebra_size: int = 1024
    max_pairs: int = 1 << 20

    def __post_init__(self):
        if self.max_algebra_size < 1 or self.max_pairs < 1:
            raise OracleError("budget caps must be positive")


_TABLE_CACHE = {}


class _AlgebraTables:
    """Flat integer tables for one finite group algebra.

    Elements are the integers 0 .. q^n - 1; the digits of an index in
    base q, first basis coefficient most significant, are the indices
    of the field coefficients.  Index order therefore matches the
    lexicographic order of coefficient vectors, which fixes the
    enumeration order everywhere below.
    """

    def __init__(self, fld, group):
        q = fld.cardinality
        if q > (1 << 16):
            raise OracleError(f"field of size {q} is too large for oracle tables")
        n = group.order
        self.field = fld
        self.group = group
        self.q = q
        self.n = n
        self.size = q ** n

        idx = np.arange(self.size, dtype=np.int64)
        digits = np.empty((self.size, n), dtype=np.int32)
        for j in range(n - 1, -1, -1):
            digits[:, j] = idx % q
            idx //= q
        self.digits = digits
        self.qpows = np.array([q ** (n - 1 - j) for j in range(n)], dtype=np.int64)
        self.gp = group.product_table()

        self.add_tab, self.mul_tab = _field_tables(fld)

    def element(self, index):
        alg = alg_make(self.field, self.group)
        row = self.digits[index]
        return alg.element([self.field.element(int(d)) for d in row])

    def kernel_mask(self, rows):
        """Boolean membership of every element index in the joint kernel."""
        inker = np.ones(self.size, dtype=bool)
        for row in rows:
            acc = np.zeros(self.size, dtype=np.int32)
            for j in range(self.n):
                lj = row[j].index
                if lj:
                    acc = self.add_tab[acc, self.mul_tab[lj, self.digits[:, j]]]
            inker &= acc == 0
        return inker

    def mul_rows(self, x_digits, u_digits):
        """Row-wise products: row i of the result encodes x_i * u_i."""
        rows = x_digits.shape[0]
        out = np.zeros((rows, self.n), dtype=np.int32)
        for j in range(self.n):
            cj = x_digits[:, j]
            for k in range(self.n):
                tgt = self.gp[j, k]
                out[:, tgt] = self.add_tab[out[:, tgt], self.mul_tab[cj, u_digits[:, k]]]
        return out @ self.qpows

    def mul_all_by(self, w_digits):
        """Encoded products c * w for every element index c at once."""
        out = np.zeros((self.size, self.n), dtype=np.int32)
        for k in range(self.n):
            d = int(w_digits[k])
            if d == 0:
                continue
            for j in range(self.n):
                tgt = self.gp[j, k]
                out[:, tgt] = self.add_tab[out[:, tgt], self.mul_tab[self.digits[:, j], d]]
        return out @ self.qpows


def _field_tables(fld):
    """q x q int32 addition and multiplication tables on element indices."""
    p, k, q = fld.p, fld.k, fld.cardinality
    if k == 1:
        rng = np.arange(q, dtype=np.int64)
        add = (rng[:, None] + rng[None, :]) % p
        mul = (rng[:, None] * rng[None, :]) % p
        return add.astype(np.int32), mul.astype(np.int32)
    # extension field: add digitwise, multiply through discrete logs
    rng = np.arange(q, dtype=np.int64)
    if p == 2:
        add = rng[:, None] ^ rng[None, :]
    else:
        add = np.zeros((q, q), dtype=np.int64)
        a, b, place = rng.copy(), rng.copy(), 1
        for _ in range(k):
            add += ((a[:, None] + b[None, :]) % p) * place
            a //= p
            b //= p
            place *= p
    exp, log = fld.exp_log_tables()
    exp_arr = np.asarray(exp, dtype=np.int64)
    log_arr = np.asarray(log, dtype=np.int64)
    mul = exp_arr[(log_arr[:, None] + log_arr[None, :]) % (q - 1)]
    mul[0, :] = 0
    mul[:, 0] = 0
    return add.astype(np.int32), mul.astype(np.int32)


def _tables_for(fld, group):
    key = (id(fld), group.orders)
    tab = _TABLE_CACHE.get(key)
    if tab is None:
        tab = _AlgebraTables(fld, group)
        _TABLE_CACHE[key] = tab
    return tab


def _validate(fld, group, rows, budget):
    if fld.characteristic == 0:
        raise OracleError("the definitional check enumerates finite algebras only")
    if not rows:
        raise OracleError("at least one map row is required")
    for row in rows:
        if len(row) != group.order:
            raise OracleError(
                f"map rows must have {group.order} entries, one per group element"
            )
    size = fld.cardinality ** group.order
    if size > budget.max_algebra_size:
        raise OracleError(
            f"|K[G]| = {size} exceeds the enumeration cap "
            f"{budget.max_algebra_size}; raise max_algebra_size to proceed"
        )
    return size


# -- power walks -----------------------------------------------------------


def _classify_numba(tab, inker8, threads):
    from . import _kernels_numba as kern

    size = tab.size
    is_root = np.zeros(size, dtype=np.uint8)
    pre = np.zeros(size, dtype=np.int64)
    per = np.zeros(size, dtype=np.int64)
    args = (inker8, tab.gp, tab.add_tab, tab.mul_tab, tab.qpows, tab.digits,
            is_root, pre, per)
    if threads <= 1 or size < 2048:
        kern.oracle_power_walk(0, size, *args)
        return is_root, pre, per
    kern.oracle_power_walk(0, 0, *args)  # compile before the pool forks work
    chunk = -(-size // threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futs = [
            pool.submit(kern.oracle_power_walk, lo, min(lo + chunk, size), *args)
            for lo in range(0, size, chunk)
        ]
        for f in futs:
            f.result()
    return is_root, pre, per


def _classify_numpy(tab, inker):
    """Walk the power sequences of all kernel elements in batches.

    Each batch keeps a first-visit-time table over the whole algebra;
    the first revisit of a power value yields the least preperiod s and
    period c with u^(s+c) = u^s, and a running flag records whether
    every distinct power stayed in the kernel.
    """
    size = tab.size
    is_root = np.zeros(size, dtype=np.uint8)
    pre = np.zeros(size, dtype=np.int64)
    per = np.zeros(size, dtype=np.int64)
    ids_all = np.flatnonzero(inker).astype(np.int64)
    if ids_all.size == 0:
        return is_root, pre, per
    vdtype = np.int16 if size < (1 << 15) - 2 else np.int32
    batch = max(1, min(ids_all.size, (1 << 22) // size))
    for lo in range(0, ids_all.size, batch):
        ids = ids_all[lo:lo + batch]
        nb = ids.size
        mult = tab.digits[ids]
        pw = ids.copy()
        visit = np.zeros((nb, size), dtype=vdtype)
        rows = np.arange(nb)
        visit[rows, pw] = 1
        all_in = np.ones(nb, dtype=bool)
        active = rows
        m = 1
        while active.size:
            m += 1
            enc = tab.mul_rows(tab.digits[pw[active]], mult[active])
            seen = visit[active, enc]
            done = seen > 0
            if done.any():
                fin = active[done]
                pre[ids[fin]] = seen[done]
                per[ids[fin]] = m - seen[done]
                is_root[ids[fin]] = all_in[fin]
            pw[active] = enc
            active = active[~done]
            if active.size:
                enc = enc[~done]
                visit[active, enc] = m
                all_in[active] &= inker[enc]
    return is_root, pre, per


def _cycle_values(tab, ids, pre, per):
    """Per root, the list of (exponent, power index) pairs on the cycle,
    exponents ascending from the preperiod."""
    if ids.size == 0:
        return []
    s = pre[ids]
    last = s + per[ids] - 1
    out = [[] for _ in range(ids.size)]
    mult = tab.digits[ids]
    pw = ids.copy()
    m = 1
    while True:
        for r in np.flatnonzero((s <= m) & (m <= last)):
            out[r].append((m, int(pw[r])))
        todo = m < last
        if not todo.any():
            return out
        live = np.flatnonzero(todo)
        pw[live] = tab.mul_rows(tab.digits[pw[live]], mult[live])
        m += 1


def _escape_for(tab, inker, inker8, w_idx, use_numba):
    """Least element index c with c * w outside the kernel, else -1."""
    w_digits = tab.digits[w_idx]
    if use_numba:
        from . import _kernels_numba as kern

        return int(kern.oracle_escape_scan(
            w_digits, inker8, tab.gp, tab.add_tab, tab.mul_tab,
            tab.qpows, tab.digits))
    products = tab.mul_all_by(w_digits)
    bad = ~inker[products]
    if not bad.any():
        return -1
    return int(np.argmax(bad))


# -- public operations -----------------------------------------------------


@dataclass(frozen=True)
class RootSet:
    """All elements whose every power lies in the kernel, with the least
    preperiod and period of each power sequence."""

    field: object
    group: object
    indices: tuple
    preperiods: tuple
    periods: tuple

    def __len__(self):
        return len(self.indices)

    def elements(self):
        tab = _tables_for(self.field, self.group)
        return [tab.element(i) for i in self.indices]


@dataclass(frozen=True)
class OracleCounterexample:
    """A root u and a pair (a, b) with a * u^m * b outside the kernel for
    every exponent m = exponent + t * period, t >= 0."""

    u: object
    a: object
    b: object
    exponent: int
    period: int

    def as_json(self):
        return {
            "type": "mz_counterexample",
            "u": format_algebra_element(self.u),
            "a": format_algebra_element(self.a),
            "b": format_algebra_element(self.b),
            "exponent": self.exponent,
            "period": self.period,
        }


@dataclass
class OracleReport:
    verdict: str                       # "MZ" | "NotMZ"
    counterexample: OracleCounterexample | None
    algebra_size: int
    root_count: int
    backend: str

    @property
    def is_mz(self):
        return self.verdict == "MZ"

    def as_json(self):
        out = {
            "verdict": self.verdict,
            "algebra_size": self.algebra_size,
            "root_count": self.root_count,
            "backend": self.backend,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.as_json()
        return out


def radical_elements(fld, group, rows, budget=None, backend=None, threads=1):
    """Enumerate every element of K[G] and keep those whose full power
    sequence stays inside the joint kernel of the map rows.

    The walk records, per element, the least s >= 1 and c >= 1 with
    u^(s+c) = u^s; checking exponents 1 .. s+c-1 covers all powers."""
    budget = budget if budget is not None else OracleBudget()
    _validate(fld, group, rows, budget)
    tab = _tables_for(fld, group)
    inker = tab.kernel_mask(rows)
    use_numba = resolve_backend(backend) == "numba"
    if use_numba:
        is_root, pre, per = _classify_numba(tab, inker.astype(np.uint8), threads)
    else:
        is_root, pre, per = _classify_numpy(tab, inker)
    ids = np.flatnonzero(is_root)
    return RootSet(
        field=fld,
        group=group,
        indices=tuple(int(i) for i in ids),
        preperiods=tuple(int(pre[i]) for i in ids),
        periods=tuple(int(per[i]) for i in ids),
    )


def definitional_mz_check(fld, group, rows, budget=None, backend=None, threads=1):
    """Decide the Mathieu-Zhao property by exhaustion.

    For each root u the products a * u^m * b with m on the eventual
    cycle must stay in the kernel.  The algebra is commutative, so
    a * u^m * b = (a*b) * u^m and scanning the single factor c = a*b
    over the whole algebra covers every pair; a reported counterexample
    keeps the shape (u, a, b) with b = 1.  Failures at exponents below
    the preperiod are ignored: they are absorbed by "for all
    sufficiently large m".

    Root classification may run on several threads; the escape scan is
    sequential in enumeration order, so the counterexample is the same
    no matter the thread count.
    """
    budget = budget if budget is not None else OracleBudget()
    size = _validate(fld, group, rows, budget)
    if size > budget.max_pairs:
        raise OracleError(
            f"scanning products needs {size} multipliers per root, above the "
            f"pair cap {budget.max_pairs}; raise max_pairs to proceed"
        )
    tab = _tables_for(fld, group)
    backend_name = resolve_backend(backend)
    use_numba = backend_name == "numba"
    inker = tab.kernel_mask(rows)
    if inker.all():
        # the kernel is the whole algebra, an ideal
        return OracleReport("MZ", None, size, size, backend_name)

    inker8 = inker.astype(np.uint8)
    if use_numba:
        is_root, pre, per = _classify_numba(tab, inker8, threads)
    else:
        is_root, pre, per = _classify_numpy(tab, inker)
    roots = np.flatnonzero(is_root)
    cycles = _cycle_values(tab, roots, pre, per)

    escape_memo = {}
    alg = alg_make(fld, group)
    for r, u_idx in enumerate(roots):
        for m, w_idx in cycles[r]:
            hit = escape_memo.get(w_idx)
            if hit is None:
                hit = _escape_for(tab, inker, inker8, w_idx, use_numba)
                escape_memo[w_idx] = hit
            if hit >= 0:
                cex = OracleCounterexample(
                    u=tab.element(int(u_idx)),
                    a=tab.element(hit),
                    b=alg.one,
                    exponent=int(m),
                    period=int(per[u_idx]),
                )
                return OracleReport("NotMZ", cex, size, int(roots.size), backend_name)
    return OracleReport("MZ", None, size, int(roots.size), backend_name)


def idempotent_survey(fld, group, budget=None):
    """Every idempotent of K[G], as subset sums of the primitive ones.

    When the characteristic divides |G| the idempotents all live in the
    subalgebra spanned by the p'-part of the group, so the survey lifts
    the primitive idempotents of that part; otherwise the algebra is
    semisimple and the primitive idempotents of G itself are used.
    Returns 2^d pairwise distinct elements, subset-mask order.
    """
    budget = budget if budget is not None else OracleBudget()
    p = fld.characteristic
    if p and group.order % p == 0:
        split = sylow_split(group, p)
        base = split.coprime_spec
        embed_idx = [group.index(split.embed_coprime(t)) for t in base.elements()]
    else:
        base = group
        embed_idx = None
    prim = primitive_idempotents(base, fld)
    count = len(prim)
    if (1 << count) > budget.max_algebra_size:
        raise OracleError(
            f"2^{count} idempotents exceed the enumeration cap "
            f"{budget.max_algebra_size}"
        )
    alg = alg_make(fld, base)
    sums = [alg.zero]
    for mask in range(1, 1 << count):
        low = mask & -mask
        sums.append(sums[mask ^ low] + prim[low.bit_length() - 1])
    if embed_idx is None:
        return sums
    big = alg_make(fld, group)
    zero = fld.from_int(0)
    lifted = []
    for el in sums:
        coeffs = [zero] * group.order
        for j, gi in enumerate(embed_idx):
            coeffs[gi] = el.coeffs[j]
        lifted.append(big.element(coeffs))
    return lifted


@dataclass
class RestrictionReport:
    group_report: OracleReport
    subgroup_report: OracleReport

    @property
    def implication_holds(self):
        return (not self.group_report.is_mz) or self.subgroup_report.is_mz


@dataclass
class QuotientReport:
    group_report: OracleReport
    quotient_report: OracleReport

    @property
    def implication_holds(self):
        return (not self.group_report.is_mz) or self.quotient_report.is_mz


def harness_subgroup_restriction(fld, group, embedding, rows,
                                 budget=None, backend=None, threads=1):
    """Check both sides of "Mathieu-Zhao on G forces Mathieu-Zhao on a
    subgroup H", restricting each map row to the embedded copy of H."""
    emb_idx = embedding.embedded_indices()
    sub_rows = [[row[i] for i in emb_idx] for row in rows]
    g_rep = definitional_mz_check(fld, group, rows, budget, backend, threads)
    h_rep = definitional_mz_check(fld, embedding.sub, sub_rows, budget, backend, threads)
    return RestrictionReport(g_rep, h_rep)


def harness_quotient(fld, group, embedding, rows,
                     budget=None, backend=None, threads=1):
    """Check "Mathieu-Zhao on G forces Mathieu-Zhao on G/H" for a
    subgroup H of order prime to the characteristic.

    K[G/H] sits inside K[G] as E_H * K[G] with E_H the averaging
    idempotent over H; pushing the map through the isomorphism sends
    the coset of a representative g to the average of the row entries
    over the coset g*H.
    """
    p = fld.characteristic
    h_order = embedding.sub.order
    if p == 0:
        raise OracleError("the quotient harness runs over finite fields only")
    if h_order % p == 0:
        raise FieldError(
            f"|H| = {h_order} is not invertible in characteristic {p}"
        )
    quot = embedding.quotient()
    h_elems = [embedding.embed(h) for h in embedding.sub.elements()]
    avg = fld.from_rational(Fraction(1, h_order))
    quot_rows = []
    for row in rows:
        qrow = []
        for rep in embedding.coset_reps():
            total = fld.from_int(0)
            for h in h_elems:
                total = total + row[group.index(group.op(rep, h))]
            qrow.append(avg * total)
        quot_rows.append(qrow)
    g_rep = definitional_mz_check(fld, group, rows, budget, backend, threads)
    q_rep = definitional_mz_check(fld, quot, quot_rows, budget, backend, threads)
    return QuotientReport(g_rep, q_rep)

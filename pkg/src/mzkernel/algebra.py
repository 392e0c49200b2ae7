"""The group algebra K[G] for a split coefficient field K and a finite
abelian group G.

Elements carry one scalar per group element, in the group's canonical
enumeration order (identity first).  Multiplication is the exact
convolution over the group product table.  A linear map K[G] -> K^r is
a dense r x n matrix of scalars, applied to the coefficient vector.
"""

from __future__ import annotations

import math

import numpy as np

from .fields import CyclotomicField, FieldError, FiniteFieldElement


class AlgebraError(ValueError):
    pass


class GroupAlgebra:
    """Arithmetic context for K[G]: caches the group tables and the
    integer workspaces used by the convolution fast path."""

    def __init__(self, field, group):
        self.field = field
        self.group = group
        self.n = group.order
        self._reduction = None

    def element(self, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != self.n:
            raise AlgebraError(f"expected {self.n} coefficients, got {len(coeffs)}")
        return AlgebraElement(self, coeffs)

    @property
    def zero(self):
        return self.element((self.field.zero,) * self.n)

    @property
    def one(self):
        coeffs = [self.field.zero] * self.n
        coeffs[0] = self.field.one
        return self.element(coeffs)

    def basis(self, g):
        """The group element g (tuple or canonical index) as an algebra element."""
        idx = g if isinstance(g, int) else self.group.index(g)
        coeffs = [self.field.zero] * self.n
        coeffs[idx] = self.field.one
        return self.element(coeffs)

    def from_scalar(self, s):
        coeffs = [self.field.zero] * self.n
        coeffs[0] = s
        return self.element(coeffs)

    def size(self):
        """|K[G]| for finite K, else None."""
        if self.field.cardinality is None:
            return None
        return self.field.cardinality ** self.n

    def _reduction_matrix(self):
        # rows are the power-basis coordinates of x^m mod Phi_e for
        # m = degree .. 2*degree-2, used to fold convolution overflow
        if self._reduction is None:
            f = self.field
            deg = f.degree
            rows = [f.xpow[m] for m in range(deg, 2 * deg - 1)]
            self._reduction = np.array(rows, dtype=np.int64).reshape(max(deg - 1, 0), deg)
        return self._reduction

    def __eq__(self, other):
        return (
            isinstance(other, GroupAlgebra)
            and self.field is other.field
            and self.group == other.group
        )

    def __hash__(self):
        return hash((id(self.field), self.group))

    def __repr__(self):
        return f"GroupAlgebra({self.field.spec}, {self.group})"


_ALGEBRA_CACHE = {}


def alg_make(field, group):
    key = (id(field), group.orders)
    ctx = _ALGEBRA_CACHE.get(key)
    if ctx is None:
        ctx = GroupAlgebra(field, group)
        _ALGEBRA_CACHE[key] = ctx
    return ctx


class AlgebraElement:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs):
        self.algebra = algebra
        self.coeffs = coeffs

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or other.algebra != self.algebra:
            raise AlgebraError("operands belong to different group algebras")

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(
            self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(
            self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        return AlgebraElement(self.algebra, tuple(-a for a in self.coeffs))

    def scale(self, s):
        return AlgebraElement(self.algebra, tuple(s * c for c in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        return alg_mul(self, other)

    def __pow__(self, m):
        if m < 1:
            raise AlgebraError("powers of algebra elements start at 1")
        acc = None
        base = self
        while m:
            if m & 1:
                acc = base if acc is None else acc * base
            m >>= 1
            if m:
                base = base * base
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.algebra == other.algebra
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.algebra.field), self.algebra.group.orders, self.coeffs))

    def __repr__(self):
        return format_algebra_element(self)


def format_algebra_element(el):
    """Text form of an algebra element: coefficient literals attached to
    basis labels g[j], where j indexes the canonical group enumeration.
    The identity term is written as a bare coefficient, unit coefficients
    are dropped, and the zero element prints as "0"."""
    from .fields import format_element

    f = el.algebra.field
    parts = []
    for idx, c in enumerate(el.coeffs):
        if c.is_zero():
            continue
        if idx == 0:
            parts.append(format_element(f, c))
        elif c == f.one:
            parts.append(f"g[{idx}]")
        else:
            parts.append(f"({format_element(f, c)})*g[{idx}]")
    return " + ".join(parts) if parts else "0"


def alg_mul(a, b):
    """Convolution product in K[G]."""
    alg = a.algebra
    field = alg.field
    if isinstance(field, CyclotomicField):
        fast = _cyclo_mul_fast(alg, a.coeffs, b.coeffs)
        if fast is not None:
            return fast
        return _generic_mul(alg, a, b)
    return _finite_mul(alg, a, b)


def _generic_mul(alg, a, b):
    gp = alg.group.product_table()
    out = [alg.field.zero] * alg.n
    for i, ca in enumerate(a.coeffs):
        if ca.is_zero():
            continue
        row = gp[i]
        for j, cb in enumerate(b.coeffs):
            if not cb.is_zero():
                k = row[j]
                out[k] = out[k] + ca * cb
    return AlgebraElement(alg, tuple(out))


def _finite_mul(alg, a, b):
    f = alg.field
    gp = alg.group.product_table()
    out = [0] * alg.n
    for i, ca in enumerate(a.coeffs):
        ia = ca.index
        if ia == 0:
            continue
        row = gp[i]
        for j, cb in enumerate(b.coeffs):
            ib = cb.index
            if ib:
                k = row[j]
                out[k] = f.add_index(out[k], f.mul_index(ia, ib))
    return AlgebraElement(alg, tuple(FiniteFieldElement(f, x) for x in out))


_FAST_DEN_BOUND = 1 << 30
_FAST_MAG_BOUND = 1 << 62


def _int_matrix(field, coeffs):
    """Common-denominator integer coordinate matrix for a coefficient
    vector, or None when the common denominator would be oversized."""
    den = 1
    for c in coeffs:
        den = math.lcm(den, c.den)
        if den > _FAST_DEN_BOUND:
            return None
    rows = [[x * (den // c.den) for x in c.num] for c in coeffs]
    return den, rows


def _cyclo_mul_fast(alg, ca, cb):
    """Integer-matrix convolution for cyclotomic coefficients.  Falls back
    (returns None) when an int64 overflow cannot be ruled out."""
    f = alg.field
    deg = f.degree
    packed_a = _int_matrix(f, ca)
    packed_b = _int_matrix(f, cb)
    if packed_a is None or packed_b is None:
        return None
    den_a, rows_a = packed_a
    den_b, rows_b = packed_b
    max_a = max((abs(x) for row in rows_a for x in row), default=0)
    max_b = max((abs(x) for row in rows_b for x in row), default=0)
    # worst case: n*deg products accumulate into one slot, then reduction
    # multiplies by the largest Phi_e coordinate
    red = alg._reduction_matrix()
    red_max = int(abs(red).max()) if red.size else 1
    bound = max_a * max_b * alg.n * deg * max(red_max, 1) * max(deg, 1)
    if bound >= _FAST_MAG_BOUND:
        return None
    A = np.array(rows_a, dtype=np.int64)
    B = np.array(rows_b, dtype=np.int64)
    gp = alg.group.product_table()
    wide = np.zeros((alg.n, 2 * deg - 1), dtype=np.int64)
    for i in range(alg.n):
        arow = A[i]
        if not arow.any():
            continue
        targets = gp[i]  # a permutation of 0..n-1
        for s in range(deg):
            coef = arow[s]
            if coef:
                wide[targets, s : s + deg] += coef * B
    out = wide[:, :deg].copy()
    if deg > 1:
        out += wide[:, deg:] @ red
    den = den_a * den_b
    coeffs = tuple(f._make(den, [int(x) for x in row]) for row in out)
    return AlgebraElement(alg, coeffs)


# ---------------------------------------------------------------------------
# linear maps K[G] -> K^r

class LinearMap:
    """Dense matrix of scalars; row i holds the values l_{i,1..n} of the
    i-th coordinate functional on the canonical group basis."""

    def __init__(self, algebra, rows):
        rows = tuple(tuple(row) for row in rows)
        if not rows:
            raise AlgebraError("a linear map needs at least one row")
        for row in rows:
            if len(row) != algebra.n:
                raise AlgebraError(
                    f"row length {len(row)} does not match the group order {algebra.n}"
                )
        self.algebra = algebra
        self.rows = rows
        self.r = len(rows)

    def is_zero(self):
        return all(c.is_zero() for row in self.rows for c in row)

    def apply(self, beta):
        """The image vector (L_1(beta), ..., L_r(beta))."""
        if beta.algebra != self.algebra:
            raise AlgebraError("element does not live in the map's algebra")
        out = []
        for row in self.rows:
            acc = self.algebra.field.zero
            for lij, bj in zip(row, beta.coeffs):
                if not (lij.is_zero() or bj.is_zero()):
                    acc = acc + lij * bj
            out.append(acc)
        return tuple(out)

    def alpha(self, i):
        """The witness element alpha_i = sum_j l_{i,j} g_j^{-1}, whose
        identity-coefficient pairing recovers row i of the map."""
        inv = self.algebra.group.inverse_table()
        coeffs = [self.algebra.field.zero] * self.algebra.n
        for j, lij in enumerate(self.rows[i]):
            coeffs[int(inv[j])] = coeffs[int(inv[j])] + lij
        return AlgebraElement(self.algebra, tuple(coeffs))

    def in_kernel(self, beta):
        return all(v.is_zero() for v in self.apply(beta))

    def __repr__(self):
        return f"LinearMap(r={self.r}, n={self.algebra.n})"


def coeff_identity(u):
    """The trace functional: the coefficient of the group identity."""
    return u.coeffs[0]


def build_alpha(lmap, i):
    return lmap.alpha(i)


def apply_linear_map(lmap, beta):
    return lmap.apply(beta)


def is_idempotent(u):
    return (u * u) == u


def power_cycle(u):
    """Least s >= 1 and c >= 1 with u^(s+c) = u^s.

    Walks u, u^2, u^3, ... recording the first position of every value;
    only valid over a finite coefficient field, where the sequence must
    eventually repeat.
    """
    if u.algebra.field.cardinality is None:
        raise AlgebraError("power cycles are only defined over finite fields")
    seen = {}
    cur = u
    m = 1
    while True:
        key = tuple(c.index for c in cur.coeffs)
        got = seen.get(key)
        if got is not None:
            return got, m - got
        seen[key] = m
        cur = cur * u
        m += 1


def averaging_idempotent(field, embedding):
    """E_H = |H|^(-1) sum of the embedded subgroup's elements.

    Idempotent whenever |H| is invertible in K; FieldError otherwise.
    """
    h_order = embedding.sub.order
    if field.characteristic and h_order % field.characteristic == 0:
        raise FieldError(
            f"|H| = {h_order} is not invertible in characteristic {field.characteristic}"
        )
    alg = alg_make(field, embedding.group)
    if isinstance(field, CyclotomicField):
        inv = field.from_rational(1) / field.from_rational(h_order)
    else:
        inv = field.from_int(h_order).inverse()
    coeffs = [field.zero] * alg.n
    for idx in embedding.embedded_indices():
        coeffs[idx] = inv
    return alg.element(coeffs)

"""Characters of a finite abelian group over a split coefficient field.

Characters are indexed by the same mixed-radix tuples as group elements:
for G = Z_{n_1} x ... x Z_{n_r} with exponent m and a fixed primitive
m-th root of unity w,

    chi_t(a) = w ** sum_i(t_i * a_i * (m / n_i))

so character number one (index 0) is the trivial character.  The field
is split for G exactly when it holds a primitive m-th root; both field
kinds expose root_of_unity, and the check here reports failures in
terms of the group.

The gamma matrix of a linear map with rows l_i over a group of order d
is gamma[i][j] = sum_k l_{i,k} * chi_j(g_k^{-1}); its column structure
drives the whole decision procedure.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .algebra import AlgebraElement, alg_make
from .fields import CyclotomicField, FieldError


def assert_split(group, field):
    """Require a primitive root of unity of order exponent(G) in K."""
    m = group.exponent
    if field.characteristic == 0:
        if field.e % m != 0:
            raise FieldError(
                f"field not split for {group}: {field.spec} lacks a primitive "
                f"root of unity of order {m}"
            )
    else:
        if m % field.characteristic == 0 or (field.cardinality - 1) % m != 0:
            raise FieldError(
                f"field not split for {group}: {field.spec} lacks a primitive "
                f"root of unity of order {m}"
            )


def _exponent_weights(group):
    m = group.exponent
    return m, tuple(m // n for n in group.orders)


def character_value(group, field, t, a):
    """chi_t(a) for character index tuple t and group element tuple a."""
    assert_split(group, field)
    m, weights = _exponent_weights(group)
    root = field.root_of_unity(m)
    s = sum(ti * ai * w for ti, ai, w in zip(t, a, weights)) % m
    return root ** s


def _root_powers(field, m):
    """[root^0, ..., root^(m-1)] for the canonical primitive m-th root."""
    root = field.root_of_unity(m)
    out = [field.one]
    cur = field.one
    for _ in range(m - 1):
        cur = cur * root
        out.append(cur)
    return out


def character_table(group, field):
    """Full character table as a list of rows, one per character, each row
    listing the values on the canonical group enumeration."""
    assert_split(group, field)
    m, weights = _exponent_weights(group)
    rpow = _root_powers(field, m)
    els = group.elements()
    table = []
    for t in els:  # character indices share the element enumeration
        row = []
        for a in els:
            s = sum(ti * ai * w for ti, ai, w in zip(t, a, weights)) % m
            row.append(rpow[s])
        table.append(row)
    return table


class GammaMatrix:
    """Exact character transform of a linear map's rows over the column
    group (the full group when semisimple, the p'-part otherwise)."""

    __slots__ = ("entries", "column_group", "field")

    def __init__(self, entries, column_group, field):
        self.entries = tuple(tuple(row) for row in entries)
        self.column_group = column_group
        self.field = field

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0]) if self.entries else 0

    def column_is_zero(self, j):
        return all(row[j].is_zero() for row in self.entries)

    def is_zero(self):
        return all(c.is_zero() for row in self.entries for c in row)


def gamma_matrix(values, column_group, field):
    """gamma[i][j] = sum_k values[i][k] * chi_j(g_k^{-1}).

    values: one row of scalars per map row, indexed by the canonical
    enumeration of column_group.
    """
    assert_split(column_group, field)
    d = column_group.order
    for row in values:
        if len(row) != d:
            raise FieldError("value row length does not match the column group order")
    m, weights = _exponent_weights(column_group)
    els = column_group.elements()
    # exps[j][k] = power of the root in chi_j(g_k^{-1})
    exps = []
    for t in els:
        exps.append(
            [
                (-sum(ti * ai * w for ti, ai, w in zip(t, a, weights))) % m
                for a in els
            ]
        )
    if isinstance(field, CyclotomicField):
        entries = [_gamma_row_cyclo(field, row, exps, m) for row in values]
    else:
        entries = [_gamma_row_finite(field, row, exps, m) for row in values]
    return GammaMatrix(entries, column_group, field)


def _gamma_row_cyclo(field, row, exps, m):
    """One gamma row over Q(zeta_e), via integer accumulation on powers of
    zeta: each term l_k * zeta^(t) scatters the numerator coordinates of
    l_k onto zeta-powers shifted by t, reduced once at the end."""
    e = field.e
    step = e // m  # root_of_unity(m) is zeta^(e/m)
    den = 1
    for c in row:
        den = math.lcm(den, c.den)
    out = []
    for j in range(len(exps)):
        acc = [0] * e
        for k, c in enumerate(row):
            scale = den // c.den
            if scale and not c.is_zero():
                shift = (exps[j][k] * step) % e
                for u, x in enumerate(c.num):
                    if x:
                        acc[(u + shift) % e] += x * scale
        coords = [0] * field.degree
        for power, total in enumerate(acc):
            if total:
                red = field.xpow[power]
                for t in range(field.degree):
                    coords[t] += total * red[t]
        out.append(field._make(den, coords))
    return out


def _gamma_row_finite(field, row, exps, m):
    rpow = _root_powers(field, m)
    out = []
    for j in range(len(exps)):
        acc = 0
        ej = exps[j]
        for k, c in enumerate(row):
            if c.index:
                acc = field.add_index(acc, field.mul_index(c.index, rpow[ej[k]].index))
        out.append(field.element(acc))
    return out


def primitive_idempotents(group, field):
    """The n orthogonal primitive idempotents of K[G] in character order:
    e_j = |G|^{-1} sum_k chi_j(g_k^{-1}) g_k.  Requires |G| invertible."""
    assert_split(group, field)
    n = group.order
    if field.characteristic and n % field.characteristic == 0:
        raise FieldError(f"|G| = {n} is not invertible in characteristic {field.characteristic}")
    m, weights = _exponent_weights(group)
    els = group.elements()
    alg = alg_make(field, group)
    if isinstance(field, CyclotomicField):
        step = field.e // m
        out = []
        for t in els:
            coeffs = []
            for a in els:
                s = (-sum(ti * ai * w for ti, ai, w in zip(t, a, weights))) % m
                coeffs.append(field._make(n, list(field.xpow[(s * step) % field.e])))
            out.append(AlgebraElement(alg, tuple(coeffs)))
        return out
    rpow = _root_powers(field, m)
    inv_n = field.from_int(n).inverse()
    out = []
    for t in els:
        coeffs = []
        for a in els:
            s = (-sum(ti * ai * w for ti, ai, w in zip(t, a, weights))) % m
            coeffs.append(inv_n * rpow[s])
        out.append(AlgebraElement(alg, tuple(coeffs)))
    return out


def character_combination(values_row, group, field):
    """Dual-basis coefficients of the row functional with respect to the
    primitive idempotents: mu_j = |G|^{-1} gamma_{row,j}, so that the map
    sends sum_j b_j e_j to sum_j mu_j b_j.  Only meaningful when |G| is
    invertible in K."""
    n = group.order
    if field.characteristic and n % field.characteristic == 0:
        raise FieldError(f"|G| = {n} is not invertible in characteristic {field.characteristic}")
    gm = gamma_matrix([values_row], group, field)
    if isinstance(field, CyclotomicField):
        inv_n = field.from_rational(Fraction(1, n))
    else:
        inv_n = field.from_int(n).inverse()
    return [inv_n * g for g in gm.entries[0]]

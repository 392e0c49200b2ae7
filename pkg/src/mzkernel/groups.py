"""Finite abelian groups as explicit products of cyclic factors.

A group is Z_{n_1} x ... x Z_{n_r}; elements are tuples of residues.
The canonical enumeration is mixed-radix with the last coordinate
varying fastest, so element number one (index 0) is always the
identity.  All decision code relies on that ordering.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .fields import is_prime


class GroupError(ValueError):
    pass


class GroupSpec:
    """Direct product of cyclic groups, written additively."""

    def __init__(self, orders):
        orders = tuple(int(n) for n in orders)
        if not orders or any(n < 1 for n in orders):
            raise GroupError("cyclic factor orders must be positive integers")
        self.orders = orders
        self.order = math.prod(orders)
        self.exponent = math.lcm(*orders)
        self._elements = None
        self._product = None
        self._inverse = None

    @staticmethod
    def parse(text):
        """Parse 'Z6', 'Z2 x Z4', 'Z_2 x Z_4' and the like."""
        parts = re.split(r"\s*x\s*", text.strip())
        orders = []
        for part in parts:
            m = re.fullmatch(r"Z_?(\d+)", part)
            if not m:
                raise GroupError(f"unrecognized group factor {part!r}")
            orders.append(int(m.group(1)))
        return GroupSpec(orders)

    def __str__(self):
        return " x ".join(f"Z{n}" for n in self.orders)

    def __repr__(self):
        return f"GroupSpec({self.orders})"

    def __eq__(self, other):
        return isinstance(other, GroupSpec) and self.orders == other.orders

    def __hash__(self):
        return hash(self.orders)

    # -- enumeration -------------------------------------------------------

    @property
    def identity(self):
        return (0,) * len(self.orders)

    def elements(self):
        """All elements in canonical order (cached tuple)."""
        if self._elements is None:
            out = []
            cur = [0] * len(self.orders)
            while True:
                out.append(tuple(cur))
                for pos in range(len(self.orders) - 1, -1, -1):
                    cur[pos] += 1
                    if cur[pos] < self.orders[pos]:
                        break
                    cur[pos] = 0
                else:
                    break
            self._elements = tuple(out)
        return self._elements

    def index(self, elem):
        """Canonical 0-based index of an element tuple."""
        if len(elem) != len(self.orders):
            raise GroupError("element arity mismatch")
        idx = 0
        for a, n in zip(elem, self.orders):
            if not 0 <= a < n:
                raise GroupError(f"residue {a} out of range for Z{n}")
            idx = idx * n + a
        return idx

    def element(self, idx):
        if not 0 <= idx < self.order:
            raise GroupError("element index out of range")
        out = []
        for n in reversed(self.orders):
            out.append(idx % n)
            idx //= n
        return tuple(reversed(out))

    # -- operations ----------------------------------------------------------

    def op(self, a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def inv(self, a):
        return tuple((-x) % n for x, n in zip(a, self.orders))

    def element_order(self, a):
        return math.lcm(*((n // math.gcd(n, x)) for x, n in zip(a, self.orders)))

    def product_table(self):
        """n x n array of op indices: table[i, j] = index(elem_i + elem_j)."""
        if self._product is None:
            n = self.order
            els = self.elements()
            table = np.empty((n, n), dtype=np.int64)
            for i, a in enumerate(els):
                for j, b in enumerate(els):
                    table[i, j] = self.index(self.op(a, b))
            self._product = table
        return self._product

    def inverse_table(self):
        """inverse_table[i] = index of the inverse of elem_i."""
        if self._inverse is None:
            els = self.elements()
            self._inverse = np.array(
                [self.index(self.inv(a)) for a in els], dtype=np.int64
            )
        return self._inverse


class SubgroupEmbedding:
    """A subgroup H = Z_{m_1} x ... x Z_{m_r} of G = Z_{n_1} x ... x Z_{n_r},
    with m_i | n_i, embedded factorwise as the multiples of n_i / m_i."""

    def __init__(self, group, sub_orders):
        sub_orders = tuple(int(m) for m in sub_orders)
        if len(sub_orders) != len(group.orders):
            raise GroupError("subgroup must list one factor per group factor")
        for m, n in zip(sub_orders, group.orders):
            if m < 1 or n % m != 0:
                raise GroupError(f"{m} does not divide the factor order {n}")
        self.group = group
        self.sub = GroupSpec(sub_orders)
        self.strides = tuple(n // m for m, n in zip(sub_orders, group.orders))

    def embed(self, h):
        """Image in G of an element tuple of the abstract subgroup."""
        return tuple(x * s for x, s in zip(h, self.strides))

    def embedded_indices(self):
        return [self.group.index(self.embed(h)) for h in self.sub.elements()]

    def quotient(self):
        """The quotient G/H, again a product of cyclic factors."""
        return GroupSpec(self.strides)

    def coset_reps(self):
        """Canonical transversal: representatives with residues below the
        stride in every coordinate, listed in quotient enumeration order."""
        return [q for q in self.quotient().elements()]


def crt_combine(r1, m1, r2, m2):
    """The unique x mod m1*m2 with x = r1 (mod m1), x = r2 (mod m2);
    requires gcd(m1, m2) = 1."""
    if m1 == 1:
        return r2 % m2
    if m2 == 1:
        return r1 % m1
    inv = pow(m1 % m2, -1, m2)
    return (r1 + m1 * ((r2 - r1) * inv % m2)) % (m1 * m2)


class SylowSplit:
    """Decomposition G = H x T where H is the Sylow p-subgroup and T the
    complementary (p'-order) part, factor by factor.

    The map coset_index(k, q) realizes the enumeration contract used by
    the modular decision path: it returns the canonical index in G of
    t_k * h_q, where t_k is the k-th element (0-based) of the p'-part and
    h_q the q-th element of the Sylow part, so consecutive blocks of
    |H| canonical-order positions would NOT in general be cosets; the
    mapping below is the authoritative correspondence.
    """

    def __init__(self, group, p):
        self.group = group
        self.p = p
        pa, dd = [], []
        a_total = 0
        for n in group.orders:
            a = 0
            while n % p == 0:
                n //= p
                a += 1
            pa.append(p ** a)
            dd.append(n)
            a_total += a
        self._pa = tuple(pa)
        self._dd = tuple(dd)
        self.a = a_total
        self.sylow_order = p ** a_total
        self.coprime_order = math.prod(dd)
        # abstract specs drop trivial factors so Z12 splits as Z4 x Z3,
        # but keep a single Z1 when a side is trivial
        self.sylow_spec = GroupSpec([m for m in pa if m > 1] or [1])
        self.coprime_spec = GroupSpec([m for m in dd if m > 1] or [1])

    def _lift(self, spec_orders, full_orders, elem):
        """Undo the trivial-factor pruning: spread an element of the pruned
        spec back over one residue per original factor."""
        out = []
        it = iter(elem)
        for m in full_orders:
            out.append(next(it) if m > 1 else 0)
        if any(m > 1 for m in full_orders):
            return tuple(out)
        return tuple(0 for _ in full_orders)

    def coset_index(self, k, q):
        """Canonical index in G of t_k * h_q (both arguments 0-based)."""
        t = self._lift(self.coprime_spec.orders, self._dd, self.coprime_spec.element(k))
        h = self._lift(self.sylow_spec.orders, self._pa, self.sylow_spec.element(q))
        combined = tuple(
            crt_combine(hi, mi, ti, di)
            for hi, mi, ti, di in zip(h, self._pa, t, self._dd)
        )
        return self.group.index(combined)

    def embed_coprime(self, t_elem):
        """Image in G of an element of the p'-part (Sylow component zero)."""
        t = self._lift(self.coprime_spec.orders, self._dd, t_elem)
        combined = tuple(
            crt_combine(0, mi, ti, di) for mi, ti, di in zip(self._pa, t, self._dd)
        )
        return combined


def sylow_split(group, p):
    """Split G into its Sylow p-part and p'-part."""
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    return SylowSplit(group, p)

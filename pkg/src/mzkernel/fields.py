"""Exact scalar arithmetic over the two split-field families.

Two kinds of coefficient field are supported:

* cyclotomic fields Q(zeta_e), elements stored as integer coordinate
  vectors over the power basis 1, zeta, ..., zeta^(phi(e)-1) together
  with a single positive denominator, always gcd-reduced;
* finite fields GF(p^k), elements stored as a single integer index in
  0..p^k-1 whose base-p digits are the coefficients of the residue
  polynomial (constant digit first).

Both representations are canonical, so equality is structural and
elements are hashable.  All arithmetic is exact; nothing here ever
rounds.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

Rational = Fraction

MAX_FINITE_ORDER = 1 << 20  # largest permitted p^k


class FieldError(ValueError):
    """Raised for invalid field specifications or impossible field ops."""


class ElementSyntaxError(FieldError):
    """Raised when an element literal fails to parse; carries the offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# ---------------------------------------------------------------------------
# elementary number theory

def factorize(n):
    """Prime factorization by trial division, as a dict {prime: multiplicity}."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic primality test.

    Trial division for small n, Miller-Rabin with a fixed base set that
    is known to be exact below 3.3 * 10^24 otherwise.
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def euler_phi(n):
    phi = 1
    for p, a in factorize(n).items():
        phi *= (p - 1) * p ** (a - 1)
    return phi


def _poly_div_exact(num, den):
    """Divide integer polynomials (ascending coefficients), requiring
    an exact quotient.  Used only with monic divisors."""
    num = list(num)
    dn = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        quot[i - dn] = c
        if c:
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    if any(num):
        raise ValueError("division not exact")
    return quot


_CYCLO_CACHE = {}


def cyclotomic_polynomial(e):
    """Coefficients (ascending) of the e-th cyclotomic polynomial Phi_e.

    Computed by exact division: Phi_e = (x^e - 1) / prod of Phi_d over
    proper divisors d of e.  Results are cached.
    """
    if e < 1:
        raise ValueError("cyclotomic index must be positive")
    got = _CYCLO_CACHE.get(e)
    if got is not None:
        return got
    num = [0] * (e + 1)
    num[0] = -1
    num[e] = 1
    den = [1]
    for d in range(1, e):
        if e % d == 0:
            phi_d = cyclotomic_polynomial(d)
            den = _poly_mul_int(den, phi_d)
    out = tuple(_poly_div_exact(num, den))
    _CYCLO_CACHE[e] = out
    return out


def _poly_mul_int(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


# ---------------------------------------------------------------------------
# field specification

class FieldSpec:
    """Immutable description of a supported coefficient field."""

    __slots__ = ("kind", "e", "p", "k")

    def __init__(self, kind, *, e=0, p=0, k=0):
        self.kind = kind
        self.e = e
        self.p = p
        self.k = k

    @staticmethod
    def cyclotomic(e):
        if e < 1:
            raise FieldError("cyclotomic index must be a positive integer")
        return FieldSpec("cyclotomic", e=e)

    @staticmethod
    def finite(p, k=1):
        return FieldSpec("finite", p=p, k=k)

    @staticmethod
    def parse(text):
        """Parse 'Q', 'Q(zeta_e)', 'GF(q)' or 'GF(p^k)'."""
        s = text.strip()
        if s == "Q":
            return FieldSpec.cyclotomic(1)
        m = re.fullmatch(r"Q\(\s*zeta_(\d+)\s*\)", s)
        if m:
            return FieldSpec.cyclotomic(int(m.group(1)))
        m = re.fullmatch(r"GF\(\s*(\d+)\s*\^\s*(\d+)\s*\)", s)
        if m:
            return FieldSpec.finite(int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"GF\(\s*(\d+)\s*\)", s)
        if m:
            q = int(m.group(1))
            fac = factorize(q) if q > 1 else {0: 1, 1: 1}
            if len(fac) != 1:
                raise FieldError(f"{q} is not a prime power")
            ((p, k),) = fac.items()
            return FieldSpec.finite(p, k)
        raise FieldError(f"unrecognized field spec {text!r}")

    def __str__(self):
        if self.kind == "cyclotomic":
            return "Q" if self.e == 1 else f"Q(zeta_{self.e})"
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    def __repr__(self):
        return f"FieldSpec({self})"

    def _key(self):
        return (self.kind, self.e, self.p, self.k)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


_FIELD_CACHE = {}


def field_make(spec):
    """Build (or fetch a cached) arithmetic context for a field spec."""
    if isinstance(spec, str):
        spec = FieldSpec.parse(spec)
    ctx = _FIELD_CACHE.get(spec)
    if ctx is None:
        if spec.kind == "cyclotomic":
            ctx = CyclotomicField(spec.e)
        else:
            ctx = FiniteField(spec.p, spec.k)
        _FIELD_CACHE[spec] = ctx
    return ctx


# ---------------------------------------------------------------------------
# cyclotomic fields

class CyclotomicNumber:
    """Element of Q(zeta_e): integer coordinates num over the power basis,
    divided by a positive integer den, with gcd(den, *num) == 1."""

    __slots__ = ("field", "den", "num")

    def __init__(self, field, den, num):
        self.field = field
        self.den = den
        self.num = num

    @property
    def coefficients(self):
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self):
        return not any(self.num)

    def is_rational(self):
        return not any(self.num[1:])

    def as_rational(self):
        if not self.is_rational():
            raise FieldError("element is not rational")
        return Fraction(self.num[0], self.den)

    def __add__(self, other):
        f = self.field
        f._check(other)
        da, db = self.den, other.den
        g = math.gcd(da, db)
        sa, sb = db // g, da // g
        return f._make(da * sa, [x * sa + y * sb for x, y in zip(self.num, other.num)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CyclotomicNumber(self.field, self.den, tuple(-x for x in self.num))

    def __mul__(self, other):
        f = self.field
        if isinstance(other, int):
            return f._make(self.den, [x * other for x in self.num])
        f._check(other)
        deg = f.degree
        conv = [0] * (2 * deg - 1)
        for i, x in enumerate(self.num):
            if x:
                for j, y in enumerate(other.num):
                    if y:
                        conv[i + j] += x * y
        num = list(conv[:deg])
        for m in range(deg, 2 * deg - 1):
            c = conv[m]
            if c:
                red = f.xpow[m]
                for t in range(deg):
                    num[t] += c * red[t]
        return f._make(self.den * other.den, num)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * other.inverse()

    def inverse(self):
        f = self.field
        if self.is_zero():
            raise ZeroDivisionError("division by zero field element")
        # invert the numerator polynomial mod Phi_e, then restore den
        inv_num = f._poly_invert(self.num)
        scaled = CyclotomicNumber(f, 1, tuple(x * self.den for x in inv_num.num))
        return f._make(inv_num.den, scaled.num)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        acc = self.field.one
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, CyclotomicNumber)
            and self.field is other.field
            and self.den == other.den
            and self.num == other.num
        )

    def __hash__(self):
        return hash((id(self.field), self.den, self.num))

    def __repr__(self):
        return f"<{self.field.spec} {format_element(self.field, self)}>"


class CyclotomicField:
    """Arithmetic context for Q(zeta_e) represented as Q[x]/(Phi_e)."""

    def __init__(self, e):
        if e < 1:
            raise FieldError("cyclotomic index must be a positive integer")
        self.spec = FieldSpec.cyclotomic(e)
        self.e = e
        self.characteristic = 0
        self.cardinality = None
        self.modulus = cyclotomic_polynomial(e)
        self.degree = len(self.modulus) - 1
        # xpow[m] = integer coordinates of x^m mod Phi_e, for every power
        # that reduction of a degree-(2*deg-2) product or a zeta exponent
        # below e can mention
        deg = self.degree
        top = max(e - 1, 2 * deg - 2, 0)
        xpow = []
        cur = [0] * deg
        if deg > 0:
            cur[0] = 1
        for m in range(top + 1):
            xpow.append(tuple(cur))
            nxt = [0] + cur[:-1]
            lead = cur[-1] if deg > 0 else 0
            if lead:
                for t in range(deg):
                    nxt[t] -= lead * self.modulus[t]
            cur = nxt
        self.xpow = xpow
        self.zero = CyclotomicNumber(self, 1, (0,) * deg)
        self.one = CyclotomicNumber(self, 1, (1,) + (0,) * (deg - 1))

    def _check(self, other):
        if not isinstance(other, CyclotomicNumber) or other.field is not self:
            raise FieldError("operands belong to different fields")

    def _make(self, den, num):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            den = -den
            num = [-x for x in num]
        g = den
        for x in num:
            g = math.gcd(g, x)
            if g == 1:
                break
        if g > 1:
            den //= g
            num = [x // g for x in num]
        return CyclotomicNumber(self, den, tuple(num))

    def from_rational(self, value):
        value = Fraction(value)
        num = [0] * self.degree
        num[0] = value.numerator
        return self._make(value.denominator, num)

    def from_int(self, c):
        return self.from_rational(c)

    def from_coefficients(self, coeffs):
        """Element from per-basis-power rationals (length <= degree)."""
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            raise FieldError("too many coordinates")
        den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
        num = [0] * self.degree
        for i, c in enumerate(coeffs):
            num[i] = c.numerator * (den // c.denominator)
        return self._make(den, num)

    def zeta_power(self, m):
        """zeta_e^m as a field element; m may be any integer."""
        return CyclotomicNumber(self, 1, self.xpow[m % self.e])

    def root_of_unity(self, m):
        """A primitive m-th root of unity, or FieldError if none exists."""
        if m < 1 or self.e % m != 0:
            raise FieldError(f"Q(zeta_{self.e}) has no primitive root of unity of order {m}")
        return self.zeta_power(self.e // m)

    def _poly_invert(self, num):
        """Inverse of sum num[i] x^i modulo Phi_e, by the extended
        Euclidean algorithm over Q[x].  Returns a CyclotomicNumber."""

        def trim(poly):
            while poly and not poly[-1]:
                poly.pop()
            return poly

        r0 = [Fraction(c) for c in self.modulus]
        r1 = trim([Fraction(c) for c in num])
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            if not r1:
                raise ZeroDivisionError("element not invertible")
            if len(r1) == 1:
                inv = [s / r1[0] for s in s1]
                break
            shift = len(r1) - 1
            quo = [Fraction(0)] * (len(r0) - shift)
            rem = list(r0)
            for i in range(len(rem) - 1, shift - 1, -1):
                f = rem[i] / r1[-1]
                if f:
                    quo[i - shift] = f
                    for j, c in enumerate(r1):
                        rem[i - shift + j] -= f * c
            prod = [Fraction(0)] * (len(quo) + len(s1) - 1)
            for i, a in enumerate(quo):
                if a:
                    for j, b in enumerate(s1):
                        prod[i + j] += a * b
            nxt = [Fraction(0)] * max(len(s0), len(prod))
            for i, c in enumerate(s0):
                nxt[i] += c
            for i, c in enumerate(prod):
                nxt[i] -= c
            r0, r1 = r1, trim(rem)
            s0, s1 = s1, trim(nxt)
        inv = inv + [Fraction(0)] * (self.degree - len(inv))
        den = math.lcm(*(c.denominator for c in inv)) if inv else 1
        coords = [int(c * den) for c in inv[: self.degree]]
        return self._make(den, coords)

    def __repr__(self):
        return f"CyclotomicField({self.e})"


# ---------------------------------------------------------------------------
# finite fields

class FiniteFieldElement:
    """Element of GF(p^k), stored as the integer whose base-p digits are
    the residue polynomial's coefficients (constant digit first)."""

    __slots__ = ("field", "index")

    def __init__(self, field, index):
        self.field = field
        self.index = index

    @property
    def digits(self):
        f = self.field
        x = self.index
        out = []
        for _ in range(f.k):
            out.append(x % f.p)
            x //= f.p
        return tuple(out)

    def is_zero(self):
        return self.index == 0

    def __add__(self, other):
        f = self.field
        f._check(other)
        return FiniteFieldElement(f, f.add_index(self.index, other.index))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return FiniteFieldElement(self.field, self.field.neg_index(self.index))

    def __mul__(self, other):
        f = self.field
        if isinstance(other, int):
            other = f.from_int(other)
        f._check(other)
        return FiniteFieldElement(f, f.mul_index(self.index, other.index))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * other.inverse()

    def inverse(self):
        f = self.field
        if self.index == 0:
            raise ZeroDivisionError("division by zero field element")
        return FiniteFieldElement(f, f.inv_index(self.index))

    def __pow__(self, n):
        f = self.field
        if self.index == 0:
            if n < 0:
                raise ZeroDivisionError("division by zero field element")
            return f.one if n == 0 else f.zero
        return FiniteFieldElement(f, f.pow_index(self.index, n))

    def __eq__(self, other):
        return (
            isinstance(other, FiniteFieldElement)
            and self.field is other.field
            and self.index == other.index
        )

    def __hash__(self):
        return hash((id(self.field), self.index))

    def __repr__(self):
        return f"<{self.field.spec} {format_element(self.field, self)}>"


class FiniteField:
    """Arithmetic context for GF(p^k).

    For k > 1 the field is GF(p)[x]/(f) where f is the lexicographically
    smallest monic irreducible polynomial of degree k, smallest meaning
    minimal integer encoding sum(c_i p^i) of the non-leading coefficients.
    """

    def __init__(self, p, k=1):
        if k < 1:
            raise FieldError("extension degree must be positive")
        if p < 2 or not is_prime(p):
            raise FieldError(f"{p} is not prime")
        q = p ** k
        if q > MAX_FINITE_ORDER:
            raise FieldError(f"field order {q} exceeds the supported bound {MAX_FINITE_ORDER}")
        self.spec = FieldSpec.finite(p, k)
        self.p = p
        self.k = k
        self.characteristic = p
        self.cardinality = q
        self.modulus = self._find_modulus() if k > 1 else (0, 1)
        self.zero = FiniteFieldElement(self, 0)
        self.one = FiniteFieldElement(self, 1)
        self._exp = None
        self._log = None
        self._generator = None

    # -- index-level arithmetic ------------------------------------------

    def add_index(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        out = 0
        mult = 1
        for _ in range(k):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg_index(self, a):
        p, k = self.p, self.k
        if k == 1:
            return (-a) % p
        if p == 2:
            return a
        out = 0
        mult = 1
        for _ in range(k):
            out += ((p - a % p) % p) * mult
            a //= p
            mult *= p
        return out

    def _raw_mul(self, a, b):
        """Polynomial product of two indices, reduced by the modulus.
        Table-free; used to bootstrap the log tables."""
        p, k = self.p, self.k
        if k == 1:
            return a * b % p
        da = [(a // p ** i) % p for i in range(k)]
        db = [(b // p ** i) % p for i in range(k)]
        conv = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    conv[i + j] = (conv[i + j] + x * y) % p
        # reduce top coefficients: x^k = -(low part of modulus)
        low = self.modulus[:-1]
        for m in range(2 * k - 2, k - 1, -1):
            c = conv[m]
            if c:
                conv[m] = 0
                for t, mc in enumerate(low):
                    conv[m - k + t] = (conv[m - k + t] - c * mc) % p
        out = 0
        for i in range(k - 1, -1, -1):
            out = out * p + conv[i]
        return out

    def mul_index(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self._exp is None:
            if self.cardinality <= (1 << 16):
                self._build_tables()
            else:
                return self._raw_mul(a, b)
        log = self._log
        return self._exp[(log[a] + log[b]) % (self.cardinality - 1)]

    def pow_index(self, a, n):
        if a == 0:
            return 0 if n else 1
        n %= self.cardinality - 1
        acc = 1
        base = a
        while n:
            if n & 1:
                acc = self._raw_mul(acc, base)
            base = self._raw_mul(base, base)
            n >>= 1
        return acc

    def inv_index(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero field element")
        return self.pow_index(a, self.cardinality - 2)

    # -- structure -------------------------------------------------------

    def _find_modulus(self):
        """Smallest monic irreducible polynomial of degree k over GF(p),
        found by trial division against every monic divisor candidate of
        degree at most k // 2.  Returned as ascending coefficients."""
        p, k = self.p, self.k

        def divides(div, poly):
            # poly mod div over GF(p), div monic
            rem = list(poly)
            dd = len(div) - 1
            for i in range(len(rem) - 1, dd - 1, -1):
                c = rem[i]
                if c:
                    for j in range(dd + 1):
                        rem[i - dd + j] = (rem[i - dd + j] - c * div[j]) % p
            return not any(rem)

        divisors = []
        for deg in range(1, k // 2 + 1):
            for enc in range(p ** deg):
                cand = [(enc // p ** i) % p for i in range(deg)] + [1]
                divisors.append(cand)
        for enc in range(p ** k):
            poly = [(enc // p ** i) % p for i in range(k)] + [1]
            if poly[0] == 0:
                continue  # divisible by x
            if all(not divides(d, poly) for d in divisors):
                return tuple(poly)
        raise FieldError("no irreducible polynomial found")  # unreachable

    def _build_tables(self):
        q = self.cardinality
        g = self.generator().index
        exp = [0] * (q - 1)
        log = [0] * q
        cur = 1
        for i in range(q - 1):
            exp[i] = cur
            log[cur] = i
            cur = self._raw_mul(cur, g)
        if cur != 1:
            raise FieldError("generator order check failed")
        self._exp = exp
        self._log = log

    def generator(self):
        """Smallest multiplicative generator in the index enumeration."""
        if self._generator is not None:
            return self._generator
        q = self.cardinality
        if q == 2:
            self._generator = self.one
            return self._generator
        cofactors = [(q - 1) // r for r in factorize(q - 1)]
        for idx in range(2, q):
            if all(self.pow_index(idx, c) != 1 for c in cofactors):
                self._generator = FiniteFieldElement(self, idx)
                return self._generator
        raise FieldError("no generator found")  # unreachable

    def root_of_unity(self, m):
        """A primitive m-th root of unity, or FieldError if none exists."""
        q = self.cardinality
        if m < 1 or (q - 1) % m != 0:
            raise FieldError(f"GF({q}) has no primitive root of unity of order {m}")
        if m == 1:
            return self.one
        r = self.generator() ** ((q - 1) // m)
        for ell in factorize(m):
            if (r ** (m // ell)).index == 1:
                raise FieldError("root order verification failed")
        return r

    def from_int(self, c):
        return FiniteFieldElement(self, c % self.p)

    def from_rational(self, value):
        value = Fraction(value)
        if value.denominator % self.p == 0:
            raise FieldError(f"denominator {value.denominator} is not invertible mod {self.p}")
        num = value.numerator % self.p
        dinv = pow(value.denominator % self.p, -1, self.p)
        return FiniteFieldElement(self, num * dinv % self.p)

    def element(self, index):
        if not 0 <= index < self.cardinality:
            raise FieldError("element index out of range")
        return FiniteFieldElement(self, index)

    def exp_log_tables(self):
        """(exp, log) discrete-log tables; built on first request."""
        if self._exp is None:
            self._build_tables()
        return self._exp, self._log

    def _check(self, other):
        if not isinstance(other, FiniteFieldElement) or other.field is not self:
            raise FieldError("operands belong to different fields")

    def __repr__(self):
        return f"FiniteField({self.p}, {self.k})"


# ---------------------------------------------------------------------------
# element literal syntax, shared by both field kinds
#
#   element ::= term (("+"|"-") term)*
#   term    ::= rational | rational "*" "z" ["^" digits] | "z" ["^" digits]
#   rational::= integer ["/" digits]      integer ::= ["-"] digits
#
# "z" means zeta_e for cyclotomic fields and the residue of x for finite
# extension fields; prime fields accept plain integers only.

_TOKEN_RE = re.compile(r"\s*(\d+|[z^*+/-])")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            at = len(text) - len(stripped)
            raise ElementSyntaxError(f"unexpected character {stripped[0]!r}", at)
        tok = m.group(1)
        out.append((tok, m.start(1)))
        pos = m.end()
    return out


def _parse_terms(text):
    """Parse an element literal into a list of (power, Fraction) terms.
    Signs of separators are folded into the coefficients."""
    toks = _tokenize(text)
    if not toks:
        raise ElementSyntaxError("empty element literal", 0)
    n = len(toks)
    i = 0

    def peek():
        return toks[i][0] if i < n else None

    def take(expect=None):
        nonlocal i
        if i >= n:
            raise ElementSyntaxError("unexpected end of input", len(text))
        tok, pos = toks[i]
        if expect is not None and tok != expect:
            raise ElementSyntaxError(f"expected {expect!r}, found {tok!r}", pos)
        i += 1
        return tok, pos

    def parse_power():
        # after a 'z' token: optional ^digits
        if peek() == "^":
            take()
            tok, pos = take()
            if not tok.isdigit():
                raise ElementSyntaxError("expected an exponent", pos)
            return int(tok)
        return 1

    def parse_term(allow_minus):
        # a minus sign is part of the integer only in the leading term;
        # there is no unary minus on a bare z, so "-z" never parses
        sign = 1
        if allow_minus and peek() == "-":
            take()
            sign = -1
            if peek() == "z":
                _, pos = toks[i]
                raise ElementSyntaxError("a minus sign must precede a number", pos)
        tok, pos = take()
        if tok == "z":
            return parse_power(), Fraction(1)
        if not tok.isdigit():
            raise ElementSyntaxError(f"expected a term, found {tok!r}", pos)
        numer = sign * int(tok)
        denom = 1
        if peek() == "/":
            take()
            dtok, dpos = take()
            if not dtok.isdigit():
                raise ElementSyntaxError("expected a denominator", dpos)
            denom = int(dtok)
            if denom == 0:
                raise ElementSyntaxError("zero denominator", dpos)
        coeff = Fraction(numer, denom)
        if peek() == "*":
            take()
            take("z")
            return parse_power(), coeff
        return 0, coeff

    terms = [parse_term(allow_minus=True)]
    while i < n:
        op, pos = take()
        if op not in "+-":
            raise ElementSyntaxError(f"expected '+' or '-', found {op!r}", pos)
        power, coeff = parse_term(allow_minus=False)
        if op == "-":
            coeff = -coeff
        terms.append((power, coeff))
    return terms


def parse_element(field, text):
    """Parse an element literal in the given field context."""
    terms = _parse_terms(text)
    if isinstance(field, CyclotomicField):
        out = field.zero
        for power, coeff in terms:
            if power >= field.e:
                raise ElementSyntaxError(
                    f"exponent {power} out of range for zeta_{field.e}", 0
                )
            if coeff:
                basis = field.zeta_power(power)
                num = [c * coeff.numerator for c in basis.num]
                out = out + field._make(coeff.denominator, num)
        return out
    # finite field
    if field.k == 1:
        for power, coeff in terms:
            if power > 0:
                raise ElementSyntaxError("'z' is not defined in a prime field", 0)
        total = Fraction(0)
        for _, coeff in terms:
            total += coeff
        return field.from_rational(total)
    digits = [0] * field.k
    for power, coeff in terms:
        if power >= field.k:
            raise ElementSyntaxError(
                f"exponent {power} exceeds the extension degree {field.k}", 0
            )
        if coeff.denominator % field.p == 0:
            raise ElementSyntaxError(
                f"denominator {coeff.denominator} is not invertible mod {field.p}", 0
            )
        val = coeff.numerator * pow(coeff.denominator, -1, field.p)
        digits[power] = (digits[power] + val) % field.p
    idx = 0
    for d in reversed(digits):
        idx = idx * field.p + d
    return FiniteFieldElement(field, idx)


def format_element(field, elem):
    """Canonical text for an element; parse_element inverts it exactly."""
    if isinstance(field, CyclotomicField):
        parts = []
        for power, num in enumerate(elem.num):
            if num == 0:
                continue
            coeff = Fraction(num, elem.den)
            parts.append((power, coeff))
        if not parts:
            return "0"
        pieces = []
        for idx, (power, coeff) in enumerate(parts):
            mag = abs(coeff)
            neg = coeff < 0
            if power == 0:
                body = str(mag)
            else:
                zs = "z" if power == 1 else f"z^{power}"
                # a leading negative z-term must keep an explicit numeral,
                # since the grammar has no unary minus on bare z
                if mag == 1:
                    body = f"1*{zs}" if (neg and idx == 0) else zs
                else:
                    body = f"{mag}*{zs}"
            if idx == 0:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f" - {body}" if neg else f" + {body}")
        return "".join(pieces)
    # finite field
    if field.k == 1:
        return str(elem.index)
    parts = []
    for power, d in enumerate(elem.digits):
        if d == 0:
            continue
        if power == 0:
            parts.append(str(d))
        else:
            zs = "z" if power == 1 else f"z^{power}"
            parts.append(zs if d == 1 else f"{d}*{zs}")
    if not parts:
        return "0"
    return " + ".join(parts)

"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A value is a rational linear combination of n-th roots of unity.  It is
stored against the smallest order n that contains it, with coefficients
reduced modulo the n-th cyclotomic polynomial, so two values are equal
exactly when their (order, coeffs) pairs are identical.  All operations
are pure; values are immutable and hashable.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Union

RationalLike = Union[int, Fraction]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    d, m = 2, n
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return tuple(out)


# -- polynomial helpers (dense, ascending coefficients, over Fraction) --

def _poly_div_exact(num: list[Fraction], den: tuple[Fraction, ...]) -> list[Fraction]:
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    quot = [Fraction(0)] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k] / lead
        quot[k - dd] = c
        if c:
            for j in range(dd + 1):
                num[k - dd + j] -= c * den[j]
    assert all(c == 0 for c in num[:dd]), "non-exact polynomial division"
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients of Phi_n, ascending degree (monic, degree phi(n))."""
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_div_exact(num, cyclotomic_polynomial(d))
    return tuple(num)


@lru_cache(maxsize=None)
def _phi_degree(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_rows(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical coefficients of zeta_n^k for phi(n) <= k < n, as rows of
    length phi(n)."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    # z^deg == -(phi minus leading term)
    cur = [-c for c in phi[:deg]]
    rows = [tuple(cur)]
    for _ in range(deg + 1, n):
        top = cur[deg - 1]
        cur = [Fraction(0)] + cur[: deg - 1]
        if top:
            for j in range(deg):
                cur[j] -= top * phi[j]
        rows.append(tuple(cur))
    return tuple(rows)


def _canonical(n: int, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    """Reduce a length-n coefficient vector modulo Phi_n; result has support
    below phi(n) and is padded back to length n."""
    if n == 1:
        return (coeffs[0],)
    deg = _phi_degree(n)
    out = list(coeffs[:deg])
    rows = None
    for k in range(deg, n):
        c = coeffs[k]
        if c:
            if rows is None:
                rows = _power_rows(n)
            row = rows[k - deg]
            for j in range(deg):
                if row[j]:
                    out[j] += c * row[j]
    out.extend([Fraction(0)] * (n - deg))
    return tuple(out)


@lru_cache(maxsize=None)
def _embedding_basis(n: int, d: int) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical order-n coefficient vectors of zeta_d^j for j < phi(d)."""
    step = n // d
    out = []
    for j in range(_phi_degree(d)):
        vec = [Fraction(0)] * n
        vec[(j * step) % n] = Fraction(1)
        out.append(_canonical(n, vec))
    return tuple(out)


def _solve_rational(columns: list[tuple[Fraction, ...]],
                    target: list[Fraction]) -> Optional[list[Fraction]]:
    """Solve sum_j x_j * columns[j] == target over Q, or None."""
    ncols = len(columns)
    nrows = len(target)
    aug = [[columns[j][i] for j in range(ncols)] + [target[i]]
           for i in range(nrows)]
    row = 0
    pivots = []
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(nrows):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    for r in range(row, nrows):
        if aug[r][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        sol[col] = aug[r][ncols]
    return sol


def _minimal_form(n: int, coeffs: tuple[Fraction, ...]) -> tuple[int, tuple[Fraction, ...]]:
    """Descend to the smallest divisor order that still contains the value."""
    while n > 1:
        deg = _phi_degree(n)
        if all(c == 0 for c in coeffs[1:deg]):
            return 1, (coeffs[0],)
        for p in _prime_factors(n):
            d = n // p
            if d == 1:
                continue
            basis = _embedding_basis(n, d)
            sol = _solve_rational(list(basis), list(coeffs[:deg]))
            if sol is not None:
                vec = list(sol) + [Fraction(0)] * (d - len(sol))
                n, coeffs = d, tuple(vec)
                break
        else:
            return n, coeffs
    return n, coeffs


def _embed(coeffs: tuple[Fraction, ...], n: int, big: int) -> list[Fraction]:
    step = big // n
    out = [Fraction(0)] * big
    for k, c in enumerate(coeffs):
        if c:
            out[(k * step) % big] += c
    return out


def _poly_xgcd(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Return (g, u) with u*a == g (mod b) and g a nonzero constant, assuming
    a is invertible modulo b."""

    def norm(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    def polymod(p, q):
        p = list(p)
        dq = len(q) - 1
        while len(p) - 1 >= dq and p:
            c = p[-1] / q[-1]
            for j in range(dq + 1):
                p[len(p) - 1 - dq + j] -= c * q[j]
            norm(p)
        return p

    r0, r1 = norm(list(a)), norm(list(b))
    u0, u1 = [Fraction(1)], []
    while len(r1) > 1 or (r1 and r1[0] != 0):
        # quotient of r0 by r1
        q = [Fraction(0)] * max(len(r0) - len(r1) + 1, 1)
        rem = list(r0)
        while len(rem) >= len(r1) and rem:
            c = rem[-1] / r1[-1]
            q[len(rem) - len(r1)] = c
            for j in range(len(r1)):
                rem[len(rem) - len(r1) + j] -= c * r1[j]
            norm(rem)
        # u0 - q*u1
        prod = [Fraction(0)] * (len(q) + len(u1))
        for i, qc in enumerate(q):
            if qc:
                for j, uc in enumerate(u1):
                    prod[i + j] += qc * uc
        newu = [Fraction(0)] * max(len(u0), len(prod))
        for i, c in enumerate(u0):
            newu[i] += c
        for i, c in enumerate(prod):
            newu[i] -= c
        r0, r1 = r1, rem
        u0, u1 = u1, norm(newu)
        if not r1:
            break
    assert len(r0) == 1 and r0[0] != 0, "element not invertible"
    return r0, u0


class Cyclotomic:
    """An element of Q(zeta_n), canonical and at minimal order."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs) -> None:
        if order < 1:
            raise ValueError("order must be positive")
        vec = [Fraction(c) for c in coeffs]
        if len(vec) != order:
            raise ValueError(f"need {order} coefficients, got {len(vec)}")
        n, canon = _minimal_form(order, _canonical(order, vec))
        self.order = n
        self.coeffs = canon
        self._hash = None

    @classmethod
    def _raw(cls, order: int, canon: tuple[Fraction, ...]) -> "Cyclotomic":
        obj = object.__new__(cls)
        obj.order = order
        obj.coeffs = canon
        obj._hash = None
        return obj

    @classmethod
    def from_rational(cls, q: RationalLike) -> "Cyclotomic":
        return cls._raw(1, (Fraction(q),))

    # -- basic predicates --

    def is_zero(self) -> bool:
        return self.order == 1 and self.coeffs[0] == 0

    def is_rational(self) -> bool:
        return self.order == 1

    def as_fraction(self) -> Fraction:
        if self.order != 1:
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    # -- arithmetic --

    @staticmethod
    def _coerce(x) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyclotomic.from_rational(x)
        return NotImplemented

    def _with(self, other: "Cyclotomic") -> tuple[int, list[Fraction], list[Fraction]]:
        n = _lcm(self.order, other.order)
        a = _embed(self.coeffs, self.order, n) if self.order != n else list(self.coeffs)
        b = _embed(other.coeffs, other.order, n) if other.order != n else list(other.coeffs)
        return n, a, b

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.order == other.order:
            vec = [a + b for a, b in zip(self.coeffs, other.coeffs)]
            n, canon = _minimal_form(self.order, tuple(vec))
            return Cyclotomic._raw(n, canon)
        n, a, b = self._with(other)
        vec = [x + y for x, y in zip(a, b)]
        n2, canon = _minimal_form(n, _canonical(n, vec))
        return Cyclotomic._raw(n2, canon)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def _support(self) -> list[int]:
        return [k for k, c in enumerate(self.coeffs) if c]

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.order == 1:
            q = self.coeffs[0]
            if q == 0:
                return ZERO
            return Cyclotomic._raw(other.order, tuple(q * c for c in other.coeffs))
        if other.order == 1:
            q = other.coeffs[0]
            if q == 0:
                return ZERO
            return Cyclotomic._raw(self.order, tuple(q * c for c in self.coeffs))
        n, a, b = self._with(other)
        sa = [k for k, c in enumerate(a) if c]
        sb = [k for k, c in enumerate(b) if c]
        vec = [Fraction(0)] * n
        if len(sa) <= len(sb):
            for i in sa:
                ai = a[i]
                for j in sb:
                    vec[(i + j) % n] += ai * b[j]
        else:
            for j in sb:
                bj = b[j]
                for i in sa:
                    vec[(i + j) % n] += bj * a[i]
        n2, canon = _minimal_form(n, _canonical(n, vec))
        return Cyclotomic._raw(n2, canon)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic division by zero")
        if self.order == 1:
            return Cyclotomic._raw(1, (1 / self.coeffs[0],))
        deg = _phi_degree(self.order)
        g, u = _poly_xgcd(list(self.coeffs[:deg]),
                          list(cyclotomic_polynomial(self.order)))
        scale = 1 / g[0]
        vec = [c * scale for c in u] + [Fraction(0)] * (self.order - len(u))
        n, canon = _minimal_form(self.order, _canonical(self.order, vec))
        return Cyclotomic._raw(n, canon)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "Cyclotomic":
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def conj(self) -> "Cyclotomic":
        """Complex conjugate: zeta_n^k -> zeta_n^(n-k)."""
        n = self.order
        vec = [Fraction(0)] * n
        for k, c in enumerate(self.coeffs):
            if c:
                vec[(n - k) % n] += c
        return Cyclotomic._raw(n, _canonical(n, vec))

    # -- structure queries --

    def as_root_of_unity(self) -> Optional[tuple[int, int]]:
        """Return (n, k) with self == zeta_n^k in lowest terms, or None."""
        if self.is_zero():
            return None
        limit = _lcm(2, self.order)
        power = ONE
        for t in range(1, limit + 1):
            if limit % t:
                continue
            power = self ** t
            if power == ONE:
                for k in range(t):
                    if zeta(t, k) == self:
                        return (t, k)
                return None
        return None

    def __complex__(self) -> complex:
        n = self.order
        return sum((complex(c) * cmath.exp(2j * cmath.pi * k / n)
                    for k, c in enumerate(self.coeffs) if c), 0j)

    def sort_key(self):
        return (self.order,) + tuple((c.numerator, c.denominator) for c in self.coeffs)

    # -- equality / display --

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.order, self.coeffs))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        return symbolic(self)

    def __repr__(self) -> str:
        return symbolic(self)


ZERO = Cyclotomic._raw(1, (Fraction(0),))
ONE = Cyclotomic._raw(1, (Fraction(1),))


def rational(q: RationalLike) -> Cyclotomic:
    return Cyclotomic.from_rational(q)


@lru_cache(maxsize=None)
def zeta(n: int, k: int = 1) -> Cyclotomic:
    """The root of unity exp(2*pi*i*k/n)."""
    if n < 1:
        raise ValueError("order must be positive")
    k %= n
    vec = [Fraction(0)] * n
    vec[k] = Fraction(1)
    return Cyclotomic(n, vec)


def omega(k: int = 1) -> Cyclotomic:
    """Power of the primitive cube root of unity."""
    return zeta(3, k)


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _monomial_str(q: Fraction, sym: str) -> str:
    if q == 1:
        return sym
    if q == -1:
        return f"-{sym}"
    return f"{_fmt_rational(q)}{sym}"


def symbolic(value: Cyclotomic) -> str:
    """Short exact rendering with w for the cube root of unity.

    Examples: "0", "-1", "w", "3w^2", "1+w", "z12^5".
    """
    if value.is_rational():
        return _fmt_rational(value.as_fraction())
    if value.order == 3:
        # prefer a pure monomial q*w^k when one exists
        for k, sym in ((1, "w"), (2, "w^2")):
            q = value * zeta(3, -k)
            if q.is_rational():
                return _monomial_str(q.as_fraction(), sym)
        c0, c1 = value.coeffs[0], value.coeffs[1]
        parts = []
        if c0:
            parts.append(_fmt_rational(c0))
        term = _monomial_str(c1, "w")
        parts.append(term if not parts or term.startswith("-") else "+" + term)
        return "".join(parts)
    n = value.order
    parts = []
    for k, c in enumerate(value.coeffs):
        if not c:
            continue
        if k == 0:
            term = _fmt_rational(c)
        else:
            sym = f"z{n}" if k == 1 else f"z{n}^{k}"
            term = _monomial_str(c, sym)
        if parts and not term.startswith("-"):
            parts.append("+" + term)
        else:
            parts.append(term)
    return "".join(parts) or "0"


def to_json_dict(value: Cyclotomic, precision: int = 12) -> dict:
    """JSON form: exact coefficients plus a decimal approximation."""
    z = complex(value)
    return {
        "order": value.order,
        "coeffs": [_fmt_rational(c) for c in value.coeffs],
        "re": round(z.real, precision),
        "im": round(z.imag, precision),
    }


def from_json_dict(data: dict) -> Cyclotomic:
    return Cyclotomic(data["order"], [Fraction(c) for c in data["coeffs"]])

"""Continuant-matrix machinery for regular and irregular continued fractions.

Everything is generic over the coefficient ring: exact rationals, polynomials,
rational functions, Q(sqrt5) elements or mpmath big-floats all work, since the
code only uses +, -, * (and / for evaluation).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath as mp

from .poly import Polynomial, RationalFunction
from .quadfield import PHI, GaussianRational, QuadNum
from .series import TruncatedSeries, expand_named


class DivisionByZero(ArithmeticError):
    """An intermediate denominator vanished.

    ``depth`` is the index of the subfraction whose value was zero at the
    moment its reciprocal was needed (the head sits at index 0).
    """

    def __init__(self, depth: int):
        super().__init__(f"continued fraction undefined: zero denominator at depth {depth}")
        self.depth = depth


@dataclass(frozen=True)
class Word:
    """A finite continued fraction [head; entries...]; head may be absent."""

    entries: tuple
    head: object = None

    def __len__(self) -> int:
        return len(self.entries)

    def negate(self) -> Word:
        head = None if self.head is None else -self.head
        return Word(tuple(-a for a in self.entries), head)

    def reverse(self) -> Word:
        """Reverse the entries (the head, when present, stays in front)."""
        return Word(tuple(reversed(self.entries)), self.head)

    def symbols(self) -> list:
        return ([self.head] if self.head is not None else []) + list(self.entries)


@dataclass(frozen=True)
class ContinuantMatrix:
    """(p_n, p_{n-1}; q_n, q_{n-1}) for the word's convergents."""

    p: object
    p_prev: object
    q: object
    q_prev: object

    def det(self):
        return self.p * self.q_prev - self.p_prev * self.q

    def mul(self, other: ContinuantMatrix) -> ContinuantMatrix:
        return ContinuantMatrix(
            self.p * other.p + self.p_prev * other.q,
            self.p * other.p_prev + self.p_prev * other.q_prev,
            self.q * other.p + self.q_prev * other.q,
            self.q * other.p_prev + self.q_prev * other.q_prev,
        )

    def transpose(self) -> ContinuantMatrix:
        return ContinuantMatrix(self.p, self.q, self.p_prev, self.q_prev)

    def scale(self, s) -> ContinuantMatrix:
        return ContinuantMatrix(self.p * s, self.p_prev * s, self.q * s, self.q_prev * s)

    def conjugate_sign(self) -> ContinuantMatrix:
        """D M D for D = diag(1, -1): flips the off-diagonal entries."""
        return ContinuantMatrix(self.p, -self.p_prev, -self.q, self.q_prev)

    def ratio(self):
        """p/q as an exact quotient (RationalFunction for polynomial entries)."""
        if isinstance(self.p, Polynomial) or isinstance(self.q, Polynomial):
            return RationalFunction(self.p, self.q)
        if isinstance(self.p, int) and isinstance(self.q, int):
            return Fraction(self.p, self.q)
        return self.p / self.q


def _identity_like(sample) -> ContinuantMatrix:
    zero = sample * 0
    one = zero + 1
    return ContinuantMatrix(one, zero, zero, one)


def step_matrix(a) -> ContinuantMatrix:
    """The Key Lemma factor (a, 1; 1, 0)."""
    zero = a * 0
    one = zero + 1
    return ContinuantMatrix(a, one, one, zero)


def continuants(word: Word) -> ContinuantMatrix:
    """Product of the (a_i, 1; 1, 0) matrices over head and entries.

    Satisfies p_n = a_n p_{n-1} + p_{n-2} and the determinant law
    q_n p_{n-1} - p_n q_{n-1} = (-1)^n.
    """
    symbols = word.symbols()
    if not symbols:
        raise ValueError("continuants of a completely empty word are undefined; give a head")
    mat = _identity_like(symbols[0])
    for a in symbols:
        mat = mat.mul(step_matrix(a))
    return mat


def eval_regular(word: Word, point=None, zero_tol=None):
    """Back-to-front value of [a_0; a_1, ..., a_n].

    Entries may be ring constants, or Polynomial/RationalFunction values
    evaluated at ``point`` (pass point=None to keep symbolic entries as-is).
    Raises DivisionByZero carrying the index of the subfraction whose value
    vanished where its reciprocal was needed.  ``zero_tol`` enables
    approximate zero detection for big-float points (exact otherwise).
    """
    symbols = word.symbols()
    if not symbols:
        raise ValueError("cannot evaluate an empty continued fraction")
    vals = [_at(a, point) for a in symbols]
    acc = vals[-1]
    for depth in range(len(vals) - 2, -1, -1):
        if _is_zero(acc, zero_tol):
            raise DivisionByZero(depth + 1)
        acc = vals[depth] + _invert(acc)
    return acc


def _is_zero(v, zero_tol) -> bool:
    if zero_tol is not None:
        return abs(v) < zero_tol
    return not v


def _at(a, point):
    if point is None:
        return a
    if isinstance(a, (Polynomial, RationalFunction, TruncatedSeries)):
        return a(point)
    return a


def _invert(v):
    if isinstance(v, int):
        return Fraction(1, v)
    if isinstance(v, Fraction):
        return 1 / v
    if isinstance(v, Polynomial):
        return RationalFunction(Polynomial.one(), v)
    if isinstance(v, QuadNum):
        return v.inverse()
    return 1 / v


@dataclass(frozen=True)
class IrregularCF:
    """a_0 + b_1/(a_1 + b_2/(a_2 + ...)) stored as (b_i, a_i) pairs."""

    a0: object
    pairs: tuple  # ((b_1, a_1), (b_2, a_2), ...)


def eval_irregular(cf: IrregularCF, point=None, zero_tol=None):
    """Back-to-front value of an irregular continued fraction.

    DivisionByZero carries the 1-based level of the vanishing subfraction.
    """
    if not cf.pairs:
        return _at(cf.a0, point)
    acc = _at(cf.pairs[-1][1], point)
    for depth in range(len(cf.pairs) - 2, -1, -1):
        if _is_zero(acc, zero_tol):
            raise DivisionByZero(depth + 2)
        b_next = _at(cf.pairs[depth + 1][0], point)
        acc = _at(cf.pairs[depth][1], point) + b_next * _invert(acc)
    if _is_zero(acc, zero_tol):
        raise DivisionByZero(1)
    return _at(cf.a0, point) + _at(cf.pairs[0][0], point) * _invert(acc)


def irregular_continuants(cf: IrregularCF) -> ContinuantMatrix:
    """Convergents of an irregular CF via p_n = a_n p_{n-1} + b_n p_{n-2}.

    Pure ring arithmetic (no quotient normalization), so it stays cheap for
    polynomial entries of large degree.
    """
    p_prev, q_prev = cf.a0 * 0 + 1, cf.a0 * 0  # p_{-1}, q_{-1}
    p, q = cf.a0, cf.a0 * 0 + 1
    for b, a in cf.pairs:
        p, p_prev = a * p + b * p_prev, p
        q, q_prev = a * q + b * q_prev, q
    return ContinuantMatrix(p, p_prev, q, q_prev)


def fold(word: Word, a0, t) -> tuple[Word, ContinuantMatrix]:
    """One folding step: [a0; w, t, -reverse(w)] and its continuants.

    The matrix is sign-normalized by (-1)^len(w) so that the Folding Lemma
    formulas p' = q p t + (-1)^n and q' = t q^2 (n = len(w), with (p, q) the
    continuants of [a0; w]) hold for odd-length words as well; the literal
    Key Lemma product differs from them by that global sign, which never
    affects the convergent.
    """
    if not t:
        raise ValueError("fold requires t != 0")
    folded = Word(tuple(word.entries) + (t,) + tuple(-a for a in reversed(word.entries)), a0)
    mat = continuants(folded)
    if len(word.entries) % 2:
        mat = mat.scale(-1)
    return folded, mat


def euclid_cf(f: RationalFunction) -> Word:
    """Regular continued fraction of a rational function by polynomial Euclid.

    Partial quotients are the successive polynomial quotients; continuants
    reproduce f exactly.
    """
    num, den = f.num, f.den
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    quotients = []
    while not num.is_zero() and not den.is_zero():
        q, r = divmod(num, den)
        quotients.append(q)
        num, den = den, r
        if r.is_zero():
            break
    if not quotients:
        quotients = [Polynomial.zero()]
    return Word(tuple(quotients[1:]), quotients[0])


# ---------------------------------------------------------------------------
# The rho / lambda continued fractions.
# ---------------------------------------------------------------------------


def rho_cf(n: int) -> IrregularCF:
    """rho_n = 1 + x/1 + x^2/1 + x^4/1 + ... + x^(2^(n-1))/1 (n fraction bars)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = Polynomial.x()
    one = Polynomial.one()
    pairs = tuple((x.substitute_power(1 << i), one) for i in range(n))
    return IrregularCF(one, pairs)


def lambda_word(n: int, plus: bool = False) -> Word:
    """lambda_n = [x; x^2, x^4, ..., x^(2^n)]; with ``plus`` the last entry gains +1.

    Conventions follow the recursions lambda_n = x + 1/lambda_{n-1}(x^2) with
    lambda_0 = x, and lambda_n^+ = x + 1/lambda_{n-1}^+(x^2) with
    lambda_0^+ = 1 (so lambda_1^+ = [x+1] and lambda_n^+ tops out at
    exponent 2^(n-1)).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if plus:
        if n == 0:
            return Word((), Polynomial.one())
        if n == 1:
            return Word((), Polynomial([1, 1]))
        entries = [Polynomial.monomial(1 << i) for i in range(1, n - 1)]
        entries.append(Polynomial.monomial(1 << (n - 1)) + Polynomial.one())
        return Word(tuple(entries), Polynomial.x())
    entries = tuple(Polynomial.monomial(1 << i) for i in range(1, n + 1))
    return Word(entries, Polynomial.x())


def rho_rational(n: int) -> RationalFunction:
    """rho_n as a reduced rational function, equal to H_n(x)/H_{n-1}(x^2)."""
    val = eval_irregular(rho_cf(n), RationalFunction.x())
    if isinstance(val, Polynomial):
        val = RationalFunction.from_poly(val)
    return val


def rho_value(n: int, x, zero_tol=None):
    """rho_n at a point, evaluated back-to-front without materializing the
    dense x^(2^i) monomials (exact for Fraction/QuadNum, numeric for mpf)."""
    acc = x * 0 + 1
    for i in range(n - 1, -1, -1):
        if _is_zero(acc, zero_tol):
            raise DivisionByZero(i + 1)
        acc = 1 + x ** (1 << i) * _invert(acc)
    return acc


def lambda_value(n: int, x, plus: bool = False, zero_tol=None):
    """lambda_n (or lambda_n^+) at a point, back-to-front."""
    if n == 0:
        return x * 0 + 1 if plus else x
    if plus:
        if n == 1:
            return x + 1
        acc = x ** (1 << (n - 1)) + 1
        top = n - 2
    else:
        acc = x ** (1 << n)
        top = n - 1
    for i in range(top, 0, -1):
        if _is_zero(acc, zero_tol):
            raise DivisionByZero(i + 1)
        acc = x ** (1 << i) + _invert(acc)
    if _is_zero(acc, zero_tol):
        raise DivisionByZero(1)
    return x + _invert(acc)


# ---------------------------------------------------------------------------
# Numeric limit classification.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitReport:
    kind: str  # "converged" | "parity_partial" | "divergent"
    value: object = None
    value_even: object = None
    value_odd: object = None


def limit_classify(values: Sequence, tol=None, start_parity: int = 0) -> LimitReport:
    """Classify a truncation sequence by Cauchy behaviour at tolerance tol.

    Converged: the full tail is Cauchy within tol.  Parity partial: the even
    and odd subsequences are each Cauchy and their limits differ by more than
    10*tol.  Anything else is divergent.  ``start_parity`` is the parity of
    the index that produced values[0] (so the even/odd labels line up with
    the caller's truncation levels).
    """
    values = list(values)
    if len(values) < 8:
        raise ValueError("need at least 8 values to classify a limit")
    if tol is None:
        tol = mp.mpf(10) ** -30
    tail = values[-6:]
    if _cauchy(tail, tol):
        return LimitReport("converged", value=tail[-1])
    even = values[start_parity % 2 :: 2]
    odd = values[1 - start_parity % 2 :: 2]
    if _cauchy(even[-3:], tol) and _cauchy(odd[-3:], tol):
        if abs(even[-1] - odd[-1]) > 10 * tol:
            return LimitReport("parity_partial", value_even=even[-1], value_odd=odd[-1])
        return LimitReport("converged", value=even[-1])
    return LimitReport("divergent")


def _cauchy(vals, tol) -> bool:
    return all(abs(vals[i + 1] - vals[i]) <= tol for i in range(len(vals) - 1))


# ---------------------------------------------------------------------------
# rho at 2^n-th roots of unity.
# ---------------------------------------------------------------------------


def rho_at_root_of_unity(n: int, a: int = 1, precision: int = 256, exact: bool = True):
    """rho at zeta = exp(2*pi*i*a/2^n) for odd a.

    Unwinds rho(x) = 1 + x/rho(x^2) n times until the argument is 1, closes
    with rho(1) = phi.  Exact in Q(sqrt5) for n <= 1, exact in Q(i, sqrt5)
    for n = 2, numeric at the requested precision otherwise (or always, with
    exact=False).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > 0 and a % 2 == 0:
        raise ValueError("a must be odd (primitive root required)")
    if exact:
        if n == 0:
            return PHI
        if n == 1:
            return _unwind_exact(QuadNum(-1, 0), n)
        if n == 2:
            i_unit = QuadNum(GaussianRational(0, 1 if a % 4 == 1 else -1), GaussianRational(0))
            return _unwind_exact(i_unit, n)
    with mp.workprec(precision):
        zeta = mp.e ** (2j * mp.pi * a / (1 << n))
        v = PHI.to_mp()
        for k in range(n - 1, -1, -1):
            v = 1 + zeta ** (1 << k) / v
        return v


def _unwind_exact(zeta: QuadNum, n: int) -> QuadNum:
    v = PHI
    for k in range(n - 1, -1, -1):
        v = 1 + zeta ** (1 << k) * v.inverse()
    return v


def rho_sum_over_roots(n: int, precision: int = 256):
    """sum of rho over all primitive 2^n-th roots of unity (numeric, n >= 2)."""
    with mp.workprec(precision):
        total = mp.mpc(0)
        for a in range(1, 1 << n, 2):
            v = rho_at_root_of_unity(n, a, precision)
            if isinstance(v, QuadNum):
                v = v.to_mp()
            total += v
        return total


# ---------------------------------------------------------------------------
# The telescoping product to H (and the lambda+ analogue to I).
# ---------------------------------------------------------------------------


def product_to_H(x, terms: int, order: int, precision: int = 256, analogue: str = "rho"):
    """|prod_k rho(x^(2^k)) - H(x)| at a point inside the unit disk.

    ``analogue="lambda"`` checks prod lambda+(x^(2^k)) against I(x) instead
    (the + variant is the one that converges inside the disk).
    """
    with mp.workprec(precision):
        xv = mp.mpf(x) if not isinstance(x, (complex, mp.mpc)) else mp.mpc(x)
        if abs(xv) >= 1:
            raise ValueError("point must lie inside the unit disk")
        name = "H" if analogue == "rho" else "I"
        series = expand_named(name, order)
        target = series(xv)
        prod = mp.mpf(1)
        depth = max(24, order.bit_length() + 8)
        for k in range(terms):
            point = xv ** (1 << k)
            if analogue == "rho":
                prod *= _rho_numeric(point, depth)
            else:
                prod *= _lambda_plus_numeric(point, depth)
        return abs(prod - target)


def _rho_numeric(x, depth: int):
    acc = mp.mpf(1)
    for i in range(depth - 1, -1, -1):
        acc = 1 + x ** (1 << i) / acc
    return acc


def _lambda_plus_numeric(x, depth: int):
    acc = mp.mpf(1)
    for i in range(depth - 1, -1, -1):
        acc = x ** (1 << i) + 1 / acc
    return acc

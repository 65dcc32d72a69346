"""Dense exact univariate polynomials and reduced rational functions.

Coefficients may be any exact field elements that support the usual
arithmetic operators: ``int``, ``fractions.Fraction``, ``QuadNum``,
``GaussianRational``.  Integers are kept as integers (no forced promotion)
so that the heavily used {0,1}-polynomials stay fast; mixed int/Fraction
arithmetic is exact either way.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


def _all_int(coeffs: Sequence) -> bool:
    return all(type(c) is int for c in coeffs)


def _kronecker_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Multiply integer coefficient lists by packing into big integers.

    Coefficients of the product are bounded by min(len) * max|a| * max|b|,
    so a fixed byte width is safe; packing goes through bytes so it runs at
    C speed.  Negative coefficients are handled by splitting each operand
    into its positive and negative parts.
    """
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    if not ma or not mb:
        return [0] * (len(a) + len(b) - 1)
    bound = min(len(a), len(b)) * ma * mb
    width = (bound.bit_length() + 8) // 8  # bytes per coefficient

    def pack(p: Sequence[int]) -> tuple[int, int]:
        zero = bytes(width)
        pos = b"".join(c.to_bytes(width, "little") if c > 0 else zero for c in p)
        neg = b"".join((-c).to_bytes(width, "little") if c < 0 else zero for c in p)
        return int.from_bytes(pos, "little"), int.from_bytes(neg, "little")

    def unpack(v: int, n: int) -> list[int]:
        raw = v.to_bytes(n * width, "little")
        return [
            int.from_bytes(raw[i * width : (i + 1) * width], "little") for i in range(n)
        ]

    apos, aneg = pack(a)
    bpos, bneg = pack(b)
    n = len(a) + len(b) - 1
    plus = unpack(apos * bpos + aneg * bneg, n)
    minus = unpack(apos * bneg + aneg * bpos, n)
    return [p - m for p, m in zip(plus, minus)]


def _list_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    if len(a) < len(b):
        a, b = b, a
    if _all_int(a) and _all_int(b):
        if len(b) > 8:
            return _kronecker_mul(a, b)
        # schoolbook with the short operand outside beats packing overhead
    out = [0] * (len(a) + len(b) - 1)
    for j, y in enumerate(b):
        if y:
            for i, x in enumerate(a):
                if x:
                    out[i + j] = out[i + j] + x * y
    return out


class Polynomial:
    """Immutable dense polynomial; ``coeffs[i]`` is the coefficient of x^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):  # strips trailing zeros
        object.__setattr__(self, "coeffs", _strip(list(coeffs)))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def zero(cls) -> Polynomial:
        return cls(())

    @classmethod
    def one(cls) -> Polynomial:
        return cls((1,))

    @classmethod
    def x(cls) -> Polynomial:
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls((c,))

    @classmethod
    def monomial(cls, exponent: int, coeff=1) -> Polynomial:
        return cls([0] * exponent + [coeff])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return len(self.coeffs) == len(other.coeffs) and all(
                a == b for a, b in zip(self.coeffs, other.coeffs)
            )
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other)
        return NotImplemented

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return Polynomial(_list_mul(self.coeffs, other.coeffs))
        if isinstance(other, (int, Fraction)) or _is_scalar(other):
            return Polynomial([c * other for c in self.coeffs])
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)) or _is_scalar(other):
            return Polynomial.constant(other)
        return NotImplemented

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        """Exact field division with remainder; ``other`` must be nonzero."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.coeffs[-1]
        if len(rem) <= d:
            return Polynomial.zero(), self
        quo = [0] * (len(rem) - d)
        for i in range(len(rem) - d - 1, -1, -1):
            c = rem[i + d]
            if c:
                c = _exact_div(c, lead)
                quo[i] = c
                for j, v in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * v
        return Polynomial(quo), Polynomial(rem)

    def __floordiv__(self, other) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other) -> Polynomial:
        return divmod(self, other)[1]

    def gcd(self, other: Polynomial) -> Polynomial:
        """Monic greatest common divisor.

        Rational-coefficient inputs are cleared to integers and run through a
        primitive pseudo-remainder sequence (with a one-prime coprimality
        shortcut), which avoids the coefficient blowup of fraction Euclid at
        large degree.  Other coefficient fields fall back to plain Euclid.
        """
        if not self:
            return other.monic()
        if not other:
            return self.monic()
        a = _to_int_coeffs(self.coeffs)
        b = _to_int_coeffs(other.coeffs)
        if a is not None and b is not None:
            if _coprime_mod_p(a, b):
                return Polynomial.one()
            g = _int_gcd(a, b)
            lead = g[-1]
            if lead != 1:
                g = [Fraction(c, lead) for c in g]
            return Polynomial(g)
        x, y = self, other
        while y:
            x, y = y, x % y
        return x.monic()

    def monic(self) -> Polynomial:
        if not self:
            return self
        lead = self.coeffs[-1]
        if lead == 1:
            return self
        return Polynomial([_exact_div(c, lead) for c in self.coeffs])

    def valuation(self) -> int:
        """Index of the lowest nonzero coefficient; -1 for zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    def substitute_power(self, k: int) -> Polynomial:
        """Return p(x^k)."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if not self.coeffs:
            return self
        out = [0] * ((len(self.coeffs) - 1) * k + 1)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return Polynomial(out)

    def shift(self, k: int) -> Polynomial:
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return Polynomial([0] * k + list(self.coeffs))

    def reverse(self, m: int) -> Polynomial:
        """Return x^m * p(1/x), which is a polynomial when m >= deg p."""
        if m < self.degree:
            raise ValueError(f"x^{m} * p(1/x) is not a polynomial (deg p = {self.degree})")
        out = [0] * (m + 1)
        for i, c in enumerate(self.coeffs):
            out[m - i] = c
        return Polynomial(out)

    def derivative(self) -> Polynomial:
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, point):
        """Evaluate by Horner's rule; works over any ring with + and *."""
        result = point * 0
        for c in reversed(self.coeffs):
            result = result * point + c
        return result

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def with_int_coeffs(self) -> Polynomial:
        """Demote Fraction(n, 1) coefficients to plain ints (fast paths)."""
        if all(type(c) is int for c in self.coeffs):
            return self
        if all(
            type(c) is int or (isinstance(c, Fraction) and c.denominator == 1)
            for c in self.coeffs
        ):
            return Polynomial([int(c) for c in self.coeffs])
        return self

    def is_integer(self) -> bool:
        """True when every coefficient is an integer (denominator 1)."""
        for c in self.coeffs:
            if type(c) is int:
                continue
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    return False
            else:
                return False
        return True

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def _to_int_coeffs(coeffs) -> list[int] | None:
    """Clear denominators to a primitive integer list; None if not rational."""
    from math import gcd as igcd

    lcm = 1
    for c in coeffs:
        if type(c) is int:
            continue
        if isinstance(c, Fraction):
            d = c.denominator
            lcm = lcm // igcd(lcm, d) * d
        else:
            return None
    ints = [int(c * lcm) for c in coeffs]
    content = 0
    for v in ints:
        content = igcd(content, v)
    if content > 1:
        ints = [v // content for v in ints]
    return ints


_GCD_PRIME = (1 << 31) - 1


def _coprime_mod_p(a: list[int], b: list[int], p: int = _GCD_PRIME) -> bool:
    """True when gcd(a mod p, b mod p) is constant, which certifies
    gcd(a, b) = 1 over Q: the true gcd's leading coefficient divides lc(a)
    and lc(b) (Gauss), so as long as p misses one of those the modular gcd
    degree only ever overshoots."""
    if a[-1] % p == 0 and b[-1] % p == 0:
        return False
    am = [c % p for c in a]
    bm = [c % p for c in b]
    for seq in (am, bm):
        while seq and not seq[-1]:
            seq.pop()
    if not am or not bm:
        return False
    while bm:
        lead_inv = pow(bm[-1], p - 2, p)
        da, db = len(am) - 1, len(bm) - 1
        while da >= db:
            c = am[-1] * lead_inv % p
            if c:
                for j in range(db + 1):
                    am[da - db + j] = (am[da - db + j] - c * bm[j]) % p
            am.pop()
            while am and not am[-1]:
                am.pop()
            da = len(am) - 1
        am, bm = bm, am
    return len(am) == 1


def _int_gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive pseudo-remainder sequence over Z; returns a primitive gcd."""
    from math import gcd as igcd

    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        content = 0
        for v in r:
            content = igcd(content, v)
        if content > 1:
            r = [v // content for v in r]
        a, b = b, r
    if a and a[-1] < 0:
        a = [-v for v in a]
    return a


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    from math import gcd as igcd

    db = len(b) - 1
    lc = b[-1]
    rem = list(a)
    for i in range(len(a) - db - 1, -1, -1):
        c = rem[i + db]
        if c:
            g = igcd(c, lc)
            scale, mult = lc // g, c // g
            if scale != 1:
                for j in range(i + db):
                    rem[j] *= scale
            for j in range(db):
                rem[i + j] -= mult * b[j]
        rem.pop()
    while rem and not rem[-1]:
        rem.pop()
    return rem


def _is_scalar(v) -> bool:
    # ring scalars (QuadNum, GaussianRational, mpf, ...) have no .coeffs
    return (
        hasattr(v, "__mul__")
        and not hasattr(v, "coeffs")
        and not isinstance(v, (Polynomial, list, tuple, str))
    )


def _exact_div(a, b):
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) / Fraction(b)
    return a / b


def format_poly(p: Polynomial, var: str = "x") -> str:
    if not p.coeffs:
        return "0"
    parts = []
    for i, c in enumerate(p.coeffs):
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            xs = var if i == 1 else f"{var}^{i}"
            if c == 1:
                parts.append(xs)
            elif c == -1:
                parts.append(f"-{xs}")
            else:
                parts.append(f"{c}*{xs}")
    out = parts[0]
    for t in parts[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


class RationalFunction:
    """Quotient of polynomials kept in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial = Polynomial.one()):
        if not isinstance(num, Polynomial):
            num = Polynomial.constant(num)
        if not isinstance(den, Polynomial):
            den = Polynomial.constant(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num:
            g = num.gcd(den)
            if g.degree > 0:
                num = num // g
                den = den // g
            lead = den.coeffs[-1]
            if lead != 1:
                num = Polynomial([_exact_div(c, lead) for c in num.coeffs])
                den = den.monic()
        else:
            den = Polynomial.one()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def from_poly(cls, p: Polynomial) -> RationalFunction:
        return cls(p, Polynomial.one())

    @classmethod
    def x(cls) -> RationalFunction:
        return cls(Polynomial.x())

    @classmethod
    def constant(cls, c) -> RationalFunction:
        return cls(Polynomial.constant(c))

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def __hash__(self):
        return hash((self.num.coeffs, self.den.coeffs))

    def __eq__(self, other) -> bool:
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __add__(self, other) -> RationalFunction:
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> RationalFunction:
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> RationalFunction:
        return (-self) + other

    def __mul__(self, other) -> RationalFunction:
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFunction:
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> RationalFunction:
        return _coerce_rf(other) / self

    def __pow__(self, n: int) -> RationalFunction:
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num**n, self.den**n)

    def substitute_power(self, k: int) -> RationalFunction:
        return RationalFunction(self.num.substitute_power(k), self.den.substitute_power(k))

    def __call__(self, point):
        """Evaluate at a field element; raises ZeroDivisionError at poles."""
        den = self.den(point)
        if not den:
            raise ZeroDivisionError("pole of rational function")
        num = self.num(point)
        if isinstance(num, int) and isinstance(den, int):
            return Fraction(num, den)
        return num / den

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        if self.den == Polynomial.one():
            return str(self.num)
        return f"({self.num})/({self.den})"


def _coerce_rf(v):
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, Polynomial):
        return RationalFunction.from_poly(v)
    if isinstance(v, (int, Fraction)):
        return RationalFunction.constant(v)
    return NotImplemented


# ---------------------------------------------------------------------------
# Tiny expression parser used by the CLI for inputs like "x^2-2" or
# "q/(1-q)^2".  Grammar:
#   expr   := term (('+'|'-') term)*
#   term   := unary (('*'|'/') unary)*
#   unary  := '-' unary | atom ('^' INT)?
#   atom   := INT | INT '/' INT (as part of term) | VAR | '(' expr ')'
# ---------------------------------------------------------------------------


class ExprError(ValueError):
    pass


def parse_rational(text: str, var: str | None = None) -> RationalFunction:
    """Parse a polynomial/rational expression in one variable (x or q)."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        t = tokens[pos]
        pos += 1
        return t

    names = set()

    def atom() -> RationalFunction:
        t = peek()
        if t is None:
            raise ExprError(f"unexpected end of expression in {text!r}")
        if t[0] == "int":
            take()
            return RationalFunction.constant(t[1])
        if t[0] == "name":
            take()
            names.add(t[1])
            return RationalFunction.x()
        if t == ("op", "("):
            take()
            e = expr()
            if peek() != ("op", ")"):
                raise ExprError(f"missing ')' in {text!r}")
            take()
            return e
        raise ExprError(f"unexpected token {t[1]!r} in {text!r}")

    def unary() -> RationalFunction:
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        a = atom()
        if peek() == ("op", "^"):
            take()
            t = take()
            if t[0] != "int":
                raise ExprError(f"exponent must be an integer in {text!r}")
            a = a ** t[1]
        return a

    def term() -> RationalFunction:
        a = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            b = unary()
            a = a * b if op == "*" else a / b
        return a

    def expr() -> RationalFunction:
        a = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            b = term()
            a = a + b if op == "+" else a - b
        return a

    result = expr()
    if pos != len(tokens):
        raise ExprError(f"trailing input {tokens[pos][1]!r} in {text!r}")
    if len(names) > 1:
        raise ExprError(f"more than one variable in {text!r}: {sorted(names)}")
    if var is not None and names and names != {var}:
        raise ExprError(f"expected variable {var!r} in {text!r}")
    return result


def parse_poly(text: str, var: str | None = None) -> Polynomial:
    rf = parse_rational(text, var)
    if rf.den != Polynomial.one():
        raise ExprError(f"{text!r} is not a polynomial")
    return rf.num


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j])))
            i = j
        elif c.isalpha():
            tokens.append(("name", c))
            i += 1
        elif c in "+-*/^()":
            tokens.append(("op", c))
            i += 1
        else:
            raise ExprError(f"bad character {c!r} at position {i} in {text!r}")
    return tokens

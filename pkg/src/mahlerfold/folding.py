"""Fold-recursion DSL, sign words, specialization and specializability tests.

A fold spec declares base words over the alphabet {+x, -x} and a rule that
builds word n from words n-1 .. n-D using constants (x, -x, and the
parity-signed (-1)^n * x), references, reversals and negations.  Continuant
matrices of the words are computed through the recursion itself, so they stay
cheap even when the words grow exponentially; the computation is generic over
the coefficient ring (polynomials, truncated series, exact rationals, ints,
big floats).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .contfrac import ContinuantMatrix, Word, continuants, euclid_cf, eval_irregular, IrregularCF
from .poly import Polynomial, RationalFunction
from .series import TruncatedSeries


class FoldSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


@dataclass(frozen=True)
class RuleConst:
    sign: int  # +1 or -1
    parity: bool = False  # True: the letter is sign * (-1)^n * x

    def pretty(self) -> str:
        s = "-" if self.sign < 0 else ""
        return f"{s}s*x" if self.parity else f"{s}x"


@dataclass(frozen=True)
class RuleRef:
    depth: int  # refers to word n - depth
    reverse: bool = False
    negate: bool = False

    def pretty(self) -> str:
        return ("-" if self.negate else "") + ("~" if self.reverse else "") + f"w{self.depth}"


@dataclass(frozen=True)
class FoldSpec:
    bases: tuple[tuple[int, ...], ...]
    rule: tuple

    def __post_init__(self):
        if not self.rule:
            raise ValueError("rule must be non-empty")
        depth = self.max_depth()
        if depth > len(self.bases):
            raise ValueError(
                f"rule refers {depth} levels back but only {len(self.bases)} bases are declared"
            )

    def max_depth(self) -> int:
        return max((it.depth for it in self.rule if isinstance(it, RuleRef)), default=0)

    def pretty(self) -> str:
        bases = ",".join("[" + ",".join("+" if s > 0 else "-" for s in b) + "]" for b in self.bases)
        rule = ", ".join(it.pretty() for it in self.rule)
        return f"bases:{bases} ; rule: {rule}"


def parse_fold_spec(text: str) -> FoldSpec:
    """Parse the fold DSL.

    Grammar:
        spec := ("bases:" wordlist ";")? "rule:" item ("," item)*
        wordlist := "[" signs? "]" ("," "[" signs? "]")*
        item := "x" | "-x" | "s*x" | "-s*x" | ["-"] ["~"] "w" DIGIT+
        signs := ("+"|"-") ("," ("+"|"-"))*

    When the bases section is omitted a single empty base word is assumed.
    """
    bases: list[tuple[int, ...]] = []
    have_bases = False
    body = text
    offset = 0
    m = re.match(r"\s*bases\s*:", text)
    if m:
        have_bases = True
        semi = text.find(";", m.end())
        if semi < 0:
            raise FoldSyntaxError("missing ';' after bases section", len(text))
        bases = _parse_wordlist(text[m.end() : semi], m.end())
        body = text[semi + 1 :]
        offset = semi + 1
    m = re.match(r"\s*rule\s*:", body)
    if not m:
        raise FoldSyntaxError("expected 'rule:'", offset)
    items = []
    for piece, pos in _split_commas(body[m.end() :], offset + m.end()):
        items.append(_parse_item(piece, pos))
    if not have_bases:
        bases = [()]
    return FoldSpec(tuple(bases), tuple(items))


def _split_commas(text: str, offset: int):
    pos = 0
    for piece in text.split(","):
        yield piece, offset + pos
        pos += len(piece) + 1


def _parse_wordlist(text: str, offset: int) -> list[tuple[int, ...]]:
    words = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace() or c == ",":
            i += 1
            continue
        if c != "[":
            raise FoldSyntaxError(f"expected '[' in bases, found {c!r}", offset + i)
        j = text.find("]", i)
        if j < 0:
            raise FoldSyntaxError("unterminated base word", offset + i)
        inner = text[i + 1 : j]
        signs = []
        for tok, pos in _split_commas(inner, offset + i + 1):
            tok = tok.strip()
            if not tok:
                continue
            if tok == "+":
                signs.append(1)
            elif tok == "-":
                signs.append(-1)
            else:
                raise FoldSyntaxError(f"bad sign {tok!r} in base word", pos)
        words.append(tuple(signs))
        i = j + 1
    return words


def _parse_item(piece: str, pos: int):
    tok = piece.strip()
    if not tok:
        raise FoldSyntaxError("empty rule item", pos)
    if tok in ("x", "+x"):
        return RuleConst(1)
    if tok == "-x":
        return RuleConst(-1)
    if tok in ("s*x", "+s*x"):
        return RuleConst(1, parity=True)
    if tok == "-s*x":
        return RuleConst(-1, parity=True)
    m = re.fullmatch(r"(-)?(~)?w(\d+)", tok)
    if m:
        depth = int(m.group(3))
        if depth < 1:
            raise FoldSyntaxError("ref depth must be >= 1", pos)
        return RuleRef(depth, reverse=bool(m.group(2)), negate=bool(m.group(1)))
    raise FoldSyntaxError(f"unknown token {tok!r}", pos)


# ---------------------------------------------------------------------------
# Built-in specs for the worked examples.
# ---------------------------------------------------------------------------

NAMED_SPECS = {
    "dragon": "bases:[] ; rule: w1, x, -~w1",
    "rho": "bases:[],[] ; rule: w2, s*x, -~w2, s*x, w1",
    "cubic": "bases:[] ; rule: w1, w1, x, -~w1, -~w1",
    "cubic-alt": "bases:[] ; rule: w1, -~w1, -~w1, w1, x",
    "quintic": "bases:[] ; rule: w1, w1, w1, -x, -~w1, -~w1, -~w1, x",
    "rational-ex": "bases:[] ; rule: w1, -~w1, x, -x, -~w1, w1, x",
}


def named_spec(name: str) -> FoldSpec:
    try:
        return parse_fold_spec(NAMED_SPECS[name])
    except KeyError:
        raise ValueError(f"unknown spec {name!r}; built-ins: {sorted(NAMED_SPECS)}") from None


def resolve_spec(spec) -> FoldSpec:
    """A FoldSpec, a built-in name, a path to a spec file, or DSL text."""
    if isinstance(spec, FoldSpec):
        return spec
    if spec in NAMED_SPECS:
        return named_spec(spec)
    import os

    if os.path.isfile(spec):
        with open(spec) as fh:
            return parse_fold_spec(fh.read())
    return parse_fold_spec(spec)


# ---------------------------------------------------------------------------
# Word iteration (signs only).
# ---------------------------------------------------------------------------


def iterate_fold(spec, n: int) -> list[int]:
    """The sign word w_n as a list over {+1, -1}."""
    spec = resolve_spec(spec)
    if n < 0:
        raise ValueError("n must be >= 0")
    words = {i: list(b) for i, b in enumerate(spec.bases)}
    if n < len(spec.bases):
        return words[n]
    depth = max(spec.max_depth(), 1)
    for m in range(len(spec.bases), n + 1):
        out: list[int] = []
        for it in spec.rule:
            if isinstance(it, RuleConst):
                s = it.sign * (-1 if (it.parity and m % 2) else 1)
                out.append(s)
            else:
                w = words[m - it.depth]
                if it.reverse:
                    w = w[::-1]
                if it.negate:
                    w = [-s for s in w]
                out.extend(w)
        words[m] = out
        for stale in [key for key in words if key <= m - depth]:
            del words[stale]
    return words[n]


def word_lengths(spec, n: int) -> list[int]:
    """Lengths of w_0..w_n, from the recursion (no words materialized)."""
    spec = resolve_spec(spec)
    lens = [len(b) for b in spec.bases]
    for m in range(len(spec.bases), n + 1):
        total = 0
        for it in spec.rule:
            total += 1 if isinstance(it, RuleConst) else lens[m - it.depth]
        lens.append(total)
    return lens[: n + 1]


# ---------------------------------------------------------------------------
# Continuant matrices through the recursion, generic over the ring.
# ---------------------------------------------------------------------------


class FoldEngine:
    """Computes continuants of w_n for a fold spec over an arbitrary ring.

    ``x`` is the ring image of the letter x. Negated references use
    N(-w) = (-1)^len(w) * D N(w) D with D = diag(1, -1), which is exact for
    Key Lemma matrix products; reversal is the transpose.
    """

    def __init__(self, spec, x):
        self.spec = resolve_spec(spec)
        self.x = x
        zero = x * 0
        one = zero + 1
        self._zero, self._one = zero, one
        self._identity = ContinuantMatrix(one, zero, zero, one)
        base = {}
        for i, b in enumerate(self.spec.bases):
            mat = self._identity
            for s in b:
                mat = mat.mul(self._step(s))
            base[i] = (mat, len(b))
        self._cache = base
        self._top = len(self.spec.bases) - 1

    def _step(self, sign: int) -> ContinuantMatrix:
        a = self.x if sign > 0 else -self.x
        return ContinuantMatrix(a, self._one, self._one, self._zero)

    def matrix(self, n: int) -> ContinuantMatrix:
        """Continuant matrix of the headless word w_n (Key Lemma product)."""
        if n < 0:
            raise ValueError("n must be >= 0")
        for m in range(self._top + 1, n + 1):
            mat = self._identity
            length = 0
            for it in self.spec.rule:
                if isinstance(it, RuleConst):
                    s = it.sign * (-1 if (it.parity and m % 2) else 1)
                    mat = mat.mul(self._step(s))
                    length += 1
                else:
                    ref, ref_len = self._cache[m - it.depth]
                    if it.reverse:
                        ref = ref.transpose()
                    if it.negate:
                        ref = ref.conjugate_sign()
                        if ref_len % 2:
                            ref = ref.scale(-1)
                    mat = mat.mul(ref)
                    length += ref_len
            self._cache[m] = (mat, length)
            self._top = m
        return self._cache[n][0]

    def with_head(self, n: int, head) -> ContinuantMatrix:
        """Continuant matrix of [head; w_n]."""
        step = ContinuantMatrix(head, self._one, self._one, self._zero)
        return step.mul(self.matrix(n))


def fold_continuants(spec, n: int, head: Polynomial | None = None) -> ContinuantMatrix:
    """Continuants of [head; w_n] over Q[x] (head defaults to rho's s_n)."""
    spec = resolve_spec(spec)
    engine = FoldEngine(spec, Polynomial.x())
    if head is None:
        head = rho_head(n)
    elif not isinstance(head, Polynomial):
        head = Polynomial.constant(head)
    return engine.with_head(n, head)


def rho_head(n: int) -> Polynomial:
    """s_n = 1 for even n, 1 + x for odd n."""
    return Polynomial.one() if n % 2 == 0 else Polynomial([1, 1])


def fold_continuants_series(spec, n: int, order: int, head=None) -> ContinuantMatrix:
    """Continuants computed in the truncated-series ring (prefix-exact)."""
    spec = resolve_spec(spec)
    engine = FoldEngine(spec, TruncatedSeries.x(order))
    if head is None:
        return engine.matrix(n)
    if isinstance(head, Polynomial):
        head = TruncatedSeries.from_poly(head, order)
    elif not isinstance(head, TruncatedSeries):
        head = TruncatedSeries([head], order)
    return engine.with_head(n, head)


def fold_value(spec, n: int, x, head=None):
    """p/q of [head; w_n] (or of w_n alone) at a scalar x, exactly."""
    spec = resolve_spec(spec)
    engine = FoldEngine(spec, x)
    mat = engine.matrix(n) if head is None else engine.with_head(n, head)
    if isinstance(mat.p, int) and isinstance(mat.q, int):
        if mat.q == 0:
            raise ZeroDivisionError("vanishing continuant denominator")
        return Fraction(mat.p, mat.q)
    return mat.p / mat.q


# ---------------------------------------------------------------------------
# Specialization to regular continued fractions.
# ---------------------------------------------------------------------------

_X = Polynomial.x()
_ONE = Polynomial.one()


def specialize(head: Polynomial, word: list[int]) -> Word:
    """Rewrite [head; (+-x)*] as a regular CF by repeated ripple steps.

    Scans left to right applying the exact identities
    [.., a, -y, z, ..] -> [.., a-1, 1, y-1, -z, ..] and, at the tail,
    [.., a, -y] -> [.., a-1, 1, y-1], so the value is preserved by
    construction.  Each ripple negates the remaining letters; that is
    tracked with a parity flag to keep the rewrite linear time.  The
    resulting partial quotients lie in {head, head-1, 1, x-2, x-1, x} and
    the length grows by at most the number of sign changes.
    """
    if not isinstance(head, Polynomial):
        head = Polynomial.constant(head)
    out: list[Polynomial] = [head]
    flipped = False
    x_minus_1 = _X - _ONE
    for s in word:
        effective = -s if flipped else s
        if effective > 0:
            out.append(_X)
        else:
            out[-1] = out[-1] - _ONE
            out.append(_ONE)
            out.append(x_minus_1)
            flipped = not flipped
    return Word(tuple(out[1:]), out[0])


def specialize_by_slicing(head: Polynomial, word: list[int]) -> Word:
    """Reference ripple implementation with literal tail negation (O(L^2));
    kept as an independent cross-check of :func:`specialize`."""
    if not isinstance(head, Polynomial):
        head = Polynomial.constant(head)
    seq: list[Polynomial] = [head] + [_X if s > 0 else -_X for s in word]
    i = 1
    while i < len(seq):
        if _is_negative_lead(seq[i]):
            y = -seq[i]
            seq[i - 1] = seq[i - 1] - _ONE
            tail = [-z for z in seq[i + 1 :]]
            seq = seq[:i] + [_ONE, y - _ONE] + tail
            i += 2  # inserted entries are positive; the negated tail may not be
        else:
            i += 1
    return Word(tuple(seq[1:]), seq[0])


def _is_negative_lead(p: Polynomial) -> bool:
    return bool(p.coeffs) and p.coeffs[-1] < 0


def specialize_three_step(head: Polynomial, word: list[int]) -> Word:
    """The insert-1 / drop-signs / subtract-neighbours shortcut.

    Only defined for words whose first letter is +x; used as an independent
    cross-check of :func:`specialize`.
    """
    if not isinstance(head, Polynomial):
        head = Polynomial.constant(head)
    if not word:
        return Word((), head)
    if word[0] < 0:
        raise ValueError("three-step shortcut requires a leading +x")
    marked: list[int | None] = []  # None marks an inserted 1
    for i, s in enumerate(word):
        marked.append(s)
        if i + 1 < len(word) and word[i + 1] != s:
            marked.append(None)
    entries = []
    for i, v in enumerate(marked):
        if v is None:
            entries.append(_ONE)
        else:
            drop = (i > 0 and marked[i - 1] is None) + (
                i + 1 < len(marked) and marked[i + 1] is None
            )
            entries.append(_X - drop)
    return Word(tuple(entries), head)


def word_to_cf(head: Polynomial, word: list[int]) -> Word:
    """[head; signs * x] as a Word over Q[x]."""
    if not isinstance(head, Polynomial):
        head = Polynomial.constant(head)
    return Word(tuple(_X if s > 0 else -_X for s in word), head)


def specialized_digits(spec, n: int, x_value: int, count: int) -> list[int]:
    """First ``count`` integer partial quotients (head included) of the
    specialized CF of w_n evaluated at an integer x."""
    word = iterate_fold(spec, n)
    sp = specialize(rho_head(n), word)
    out = []
    for sym in sp.symbols():
        out.append(int(sym(x_value)))
        if len(out) >= count:
            break
    return out


# ---------------------------------------------------------------------------
# Generating functions of the sign words; the I/J system.
# ---------------------------------------------------------------------------


class StabilizationError(RuntimeError):
    pass


def sign_generating_functions(spec, order: int, max_iter: int = 64):
    """(even-limit, odd-limit) coefficient prefixes of the word sequence.

    Iterates until two successive words of each parity agree on the first
    order+1 letters and are long enough; raises StabilizationError otherwise.
    """
    spec = resolve_spec(spec)
    need = order + 1
    prev: dict[int, list[int]] = {}
    stable: dict[int, list[int]] = {}
    for n in range(max_iter):
        w = iterate_fold(spec, n)
        par = n % 2
        if par in prev and len(prev[par]) >= need and len(w) >= len(prev[par]):
            if w[:need] == prev[par][:need] and par not in stable:
                stable[par] = w[:need]
        prev[par] = w
        if 0 in stable and 1 in stable:
            return (
                TruncatedSeries(stable[0], order),
                TruncatedSeries(stable[1], order),
            )
    raise StabilizationError(
        f"word prefixes did not stabilize to order {order} within {max_iter} iterations"
    )


def _geom(k: int, order: int) -> TruncatedSeries:
    """1/(1+x^k) as a truncated series."""
    coeffs = [0] * (order + 1)
    s = 1
    for i in range(0, order + 1, k):
        coeffs[i] = s
        s = -s
    return TruncatedSeries(coeffs, order)


def rho_word_equations(order: int):
    """Residuals of both Mahler equations for rho's word GFs, denominators
    cleared to polynomials: returns (residual_F, residual_G) TruncatedSeries.

    F(x) = x^2 F(x^4) - 2x^6/(1+x^8) + 1/(1+x^4) + x/(1+x^2)
    G(x) = x^4 G(x^4) - (1-x^8)/(1+x^8) + x^2/(1+x^4) - x/(1+x^2)
    """
    f, g = sign_generating_functions("rho", order)
    m = Polynomial([1, 0, 1])  # 1+x^2
    m4 = m.substitute_power(2)  # 1+x^4
    m8 = m.substitute_power(4)  # 1+x^8
    clear = m * m4 * m8
    c = TruncatedSeries.from_poly(clear, order)
    x = Polynomial.x()

    lhs_f = c * f
    rhs_f = (
        c * f.substitute_power(4).shift(2)
        - TruncatedSeries.from_poly(2 * (x**6) * m * m4, order)
        + TruncatedSeries.from_poly(m * m8, order)
        + TruncatedSeries.from_poly(x * m4 * m8, order)
    )
    res_f = lhs_f - rhs_f

    lhs_g = c * g
    rhs_g = (
        c * g.substitute_power(4).shift(4)
        - TruncatedSeries.from_poly((Polynomial.one() - x**8) * m * m4, order)
        + TruncatedSeries.from_poly((x**2) * m * m8, order)
        - TruncatedSeries.from_poly(x * m4 * m8, order)
    )
    res_g = lhs_g - rhs_g
    return res_f, res_g


def tilde_transforms(order: int):
    """(F~, G~): F~ = F - x/(1+x^2), G~ = -G - x/(1+x^2); both are even."""
    f, g = sign_generating_functions("rho", order)
    odd = TruncatedSeries.x(order) * _geom(2, order)
    return f - odd, -g - odd


@dataclass(frozen=True)
class IJReport:
    order: int
    eq1_zero: bool
    eq2_zero: bool
    iterated1_zero: bool
    iterated2_zero: bool
    coeff_range_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.eq1_zero
            and self.eq2_zero
            and self.iterated1_zero
            and self.iterated2_zero
            and self.coeff_range_ok
        )


def ij_series(order: int):
    """The {0,±1}-series I, J with I(x^2) = x^2 F~(x^3), J(x^2) = x^4 G~(x^3).

    Equivalently: I's coefficient at 3k+1 is F~'s at 2k, J's at 3k+2 is G~'s
    at 2k, zeros elsewhere.
    """
    src_order = 2 * ((order + 2) // 3) + 2
    ft, gt = tilde_transforms(src_order)
    i_coeffs = [0] * (order + 1)
    j_coeffs = [0] * (order + 1)
    for k in range(order // 3 + 1):
        if 3 * k + 1 <= order and 2 * k <= ft.order:
            i_coeffs[3 * k + 1] = ft.coeffs[2 * k]
        if 3 * k + 2 <= order and 2 * k <= gt.order:
            j_coeffs[3 * k + 2] = gt.coeffs[2 * k]
    return TruncatedSeries(i_coeffs, order), TruncatedSeries(j_coeffs, order)


def ij_system_check(order: int) -> IJReport:
    """Verify I(x) = J(x^2) + x/(1+x^6), J(x) = I(x^2) - x^5/(1+x^6) and the
    once-iterated forms, exactly to the given order."""
    if order < 8:
        raise ValueError("order must be >= 8")
    i_s, j_s = ij_series(order)
    g6 = _geom(6, order)
    g12 = _geom(12, order)
    eq1 = i_s - (j_s.substitute_power(2) + g6.shift(1))
    eq2 = j_s - (i_s.substitute_power(2) - g6.shift(5))
    it1 = i_s - (i_s.substitute_power(4) + g6.shift(1) - g12.shift(10))
    it2 = j_s - (j_s.substitute_power(4) - g6.shift(5) + g12.shift(2))
    coeff_ok = set(i_s.coeffs) <= {0, 1, -1} and set(j_s.coeffs) <= {0, 1, -1}
    return IJReport(
        order,
        eq1.is_zero(),
        eq2.is_zero(),
        it1.is_zero(),
        it2.is_zero(),
        coeff_ok,
    )


def signed_even_subword(word: list[int]) -> list[int]:
    """e_n: the even-index letters with alternating twist (-1)^m w[2m]."""
    return [(-1) ** m * word[2 * m] for m in range(len(word) // 2)]


# ---------------------------------------------------------------------------
# Special recursions: P/Q polynomials.
# ---------------------------------------------------------------------------


class NotSpecialError(ValueError):
    pass


def _is_special(spec: FoldSpec) -> bool:
    refs = [it for it in spec.rule if isinstance(it, RuleRef)]
    consts = [it for it in spec.rule if isinstance(it, RuleConst)]
    if len(spec.bases) != 1 or spec.bases[0]:
        return False
    if any(it.parity for it in consts):
        return False
    # items must alternate ref, const, ref, const, ..., ref
    expect_ref = True
    flip = False
    for it in spec.rule:
        if expect_ref:
            if not isinstance(it, RuleRef) or it.depth != 1:
                return False
            if (it.reverse, it.negate) != ((True, True) if flip else (False, False)):
                return False
            flip = not flip
        else:
            if not isinstance(it, RuleConst):
                return False
        expect_ref = not expect_ref
    return expect_ref is False and len(refs) >= 2


def special_recursion_polys(spec, degree_budget: int = 4096) -> tuple[Polynomial, Polynomial]:
    """P, Q in Z[y] with p_n = p~ P(x p~) and q_n = q~ P(x p~) + Q(x p~).

    p~, q~ are the previous level's continuants.  The continuant sequence is
    sign-normalized (a global sign per level) so that P's leading coefficient
    is positive.  The relations are verified exactly at levels 2..4; a level
    whose word length exceeds ``degree_budget`` (continuant coefficients grow
    doubly fast there) is instead checked as a series prefix to order 256 and
    at the integer points x = 2 and x = 3.
    """
    spec = resolve_spec(spec)
    if not _is_special(spec):
        raise NotSpecialError(f"spec is not special: {spec.pretty()}")
    r = sum(1 for it in spec.rule if isinstance(it, RuleRef))
    lengths = word_lengths(spec, 4)
    full_levels = [n for n in (2, 3, 4) if lengths[n] <= degree_budget]
    light_levels = [n for n in (2, 3, 4) if lengths[n] > degree_budget]
    engine = FoldEngine(spec, Polynomial.x())
    mats = {n: engine.matrix(n) for n in range(0, max(full_levels) + 1)}
    for sigma in (1, -1):
        try:
            P = _solve_poly_in(mats[2].p, mats[1].p, sigma, r - 1).with_int_coeffs()
            Q = _solve_q(mats[2].q, mats[1].q, mats[1].p, P, sigma, r - 2).with_int_coeffs()
        except _NoSolution:
            continue
        if P.coeffs and P.coeffs[-1] < 0:
            continue
        if not all(
            _check_special_level(mats[n], mats[n - 1], P, Q, sigma) for n in full_levels
        ):
            continue
        if light_levels and not _check_special_light(spec, light_levels, P, Q, sigma):
            continue
        return P, Q
    raise NotSpecialError("could not solve for P, Q with a consistent sign")


def _check_special_light(spec, levels, P, Q, sigma) -> bool:
    """Prefix + point checks of the special relations for oversized levels."""
    for x_val in (2, 3):
        int_engine = FoldEngine(spec, x_val)
        for n in levels:
            mat = int_engine.matrix(n)
            prev = int_engine.matrix(n - 1)
            arg = x_val * prev.p * sigma
            if mat.p * sigma != prev.p * sigma * P(arg):
                return False
            if mat.q != prev.q * P(arg) + Q(arg):
                return False
    order = 64
    series_engine = FoldEngine(spec, TruncatedSeries.x(order))
    for n in levels:
        mat = series_engine.matrix(n)
        prev = series_engine.matrix(n - 1)
        arg = TruncatedSeries.x(order) * (prev.p * sigma)
        p_rhs = (prev.p * sigma) * _poly_at_series(P, arg)
        q_rhs = prev.q * _poly_at_series(P, arg) + _poly_at_series(Q, arg)
        if mat.p * sigma != p_rhs or mat.q != q_rhs:
            return False
    return True


def _poly_at_series(p: Polynomial, arg: TruncatedSeries) -> TruncatedSeries:
    result = TruncatedSeries.zero(arg.order)
    for c in reversed(p.coeffs):
        result = result * arg + c
    return result


class _NoSolution(Exception):
    pass


def _solve_poly_in(target: Polynomial, base: Polynomial, sigma: int, deg: int) -> Polynomial:
    """Solve target = (sigma*base) * P(x * sigma*base) for P of given degree."""
    b = base * sigma
    t = target * sigma
    x = Polynomial.x()
    cols = []
    power = Polynomial.one()
    for i in range(deg + 1):
        cols.append(b * power)  # b * (x b)^i
        power = power * (x * b)
    coeffs = _linear_solve(cols, t)
    if coeffs is None:
        raise _NoSolution
    return Polynomial(coeffs)


def _solve_q(qn, qprev, pprev, P: Polynomial, sigma: int, deg: int) -> Polynomial:
    arg = Polynomial.x() * (pprev * sigma)
    rest = qn - qprev * P(arg)
    cols = []
    power = Polynomial.one()
    for i in range(deg + 1):
        cols.append(power)
        power = power * arg
    coeffs = _linear_solve(cols, rest)
    if coeffs is None:
        raise _NoSolution
    return Polynomial(coeffs)


def _check_special_level(mat, prev, P, Q, sigma) -> bool:
    arg = Polynomial.x() * (prev.p * sigma)
    return mat.p * sigma == (prev.p * sigma) * P(arg) and mat.q == prev.q * P(arg) + Q(arg)


def _linear_solve(cols: list[Polynomial], rhs: Polynomial):
    """Solve sum c_i cols[i] = rhs exactly; None when inconsistent.

    The row count equals the polynomial height, which dwarfs the column
    count, so a leading row block is solved first and the candidate verified
    against the full polynomial identity; only on failure does the dense
    system run.
    """
    full = max([rhs.degree] + [c.degree for c in cols]) + 1
    if full <= 0:
        return [0] * len(cols)
    block = 4 * len(cols) + 4
    if block < full:
        candidate = _linear_solve_rows(cols, rhs, block)
        if candidate is not None:
            return candidate
    return _linear_solve_rows(cols, rhs, full)


def _linear_solve_rows(cols: list[Polynomial], rhs: Polynomial, height: int):
    a = [[Fraction(col.coeff(row)) for col in cols] for row in range(height)]
    b = [Fraction(rhs.coeff(row)) for row in range(height)]
    ncols = len(cols)
    row = 0
    pivots = []
    for col in range(ncols):
        piv = next((r for r in range(row, height) if a[r][col]), None)
        if piv is None:
            pivots.append(None)
            continue
        a[row], a[piv] = a[piv], a[row]
        b[row], b[piv] = b[piv], b[row]
        inv = 1 / a[row][col]
        a[row] = [v * inv for v in a[row]]
        b[row] = b[row] * inv
        for r in range(height):
            if r != row and a[r][col]:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[row])]
                b[r] = b[r] - factor * b[row]
        pivots.append(row)
        row += 1
    solution = [0] * ncols
    for col, piv in enumerate(pivots):
        if piv is not None:
            solution[col] = b[piv]
    # consistency: rows without pivots must have zero rhs
    for r in range(height):
        if not any(a[r]) and b[r]:
            return None
    # verify (guards the no-pivot-column case)
    total = Polynomial.zero()
    for c, col in zip(solution, cols):
        total = total + col * c
    if total != rhs:
        return None
    return solution


# ---------------------------------------------------------------------------
# Specializability of iterated-polynomial continued fractions.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpecializableReport:
    mode: str
    specializable: bool
    checked_up_to: int
    fails_at: int | None = None
    witness: Polynomial | None = None


class DegreeCapExceeded(RuntimeError):
    def __init__(self, degree: int, cap: int):
        super().__init__(f"iterated polynomial degree {degree} exceeds cap {cap}")
        self.degree = degree


def specializable_iterated(
    f: Polynomial, mode: str, n_max: int, degree_cap: int = 4096
) -> SpecializableReport:
    """Check whether the CF of sum 1/f^m(x) (cohn_sum) or of the irregular
    x + f(x)/1 + f^2(x)/1 + ... (irregular) has all partial quotients in Z[x].
    """
    if f.degree < 2:
        raise ValueError("deg f must be >= 2")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if mode not in ("cohn_sum", "irregular"):
        raise ValueError(f"unknown mode {mode!r}")
    iterates = [Polynomial.x()]
    for _ in range(n_max):
        nxt = f(iterates[-1])
        if nxt.degree > degree_cap:
            raise DegreeCapExceeded(nxt.degree, degree_cap)
        iterates.append(nxt)
    for n in range(1, n_max + 1):
        if mode == "cohn_sum":
            value = RationalFunction.constant(0)
            for m in range(n, -1, -1):
                value = value + RationalFunction(Polynomial.one(), iterates[m])
        else:
            pairs = tuple((iterates[m], Polynomial.one()) for m in range(1, n + 1))
            value = eval_irregular(
                IrregularCF(Polynomial.x(), pairs), RationalFunction.x()
            )
        word = euclid_cf(value if isinstance(value, RationalFunction) else RationalFunction.from_poly(value))
        for sym in word.symbols():
            if not sym.is_integer():
                return SpecializableReport(mode, False, n_max, fails_at=n, witness=sym)
    return SpecializableReport(mode, True, n_max)


COHN_CONGRUENCES: tuple[tuple[str, str], ...] = (
    ("0", "x^2"),
    ("-x", "x^2"),
    ("1", "x^2*(x-1)"),
    ("-1", "x^2*(x+1)"),
    ("x^3-x^2-x+1", "x^2*(x-1)^2"),
    ("-x^3+2*x^2-x+1", "x^2*(x-1)^2"),
    ("-x^3+3*x^2-2*x+1", "x^2*(x-1)^2"),
    ("x^3+x^2-x-1", "x^2*(x+1)^2"),
    ("-x^3-2*x^2-x-1", "x^2*(x+1)^2"),
    ("-x^3-3*x^2-2*x-1", "x^2*(x+1)^2"),
    ("x^2-x+1", "x^2*(x-1)^2"),
    ("x^2-2*x+1", "x^2*(x-1)^2"),
    ("-x^2-x-1", "x^2*(x+1)^2"),
    ("-x^2-2*x-1", "x^2*(x+1)^2"),
)


def cohn_congruence_test(f: Polynomial) -> list[int]:
    """1-based ids of the fourteen congruences satisfied by f (may be empty)."""
    if f.degree < 2:
        raise ValueError("deg f must be >= 2")
    from .poly import parse_poly

    matches = []
    for i, (rhs, modulus) in enumerate(COHN_CONGRUENCES, start=1):
        if (f - parse_poly(rhs)) % parse_poly(modulus) == Polynomial.zero():
            matches.append(i)
    return matches

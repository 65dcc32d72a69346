"""Hadamard products, the complete-Hadamard classifier, k-kernels and the
Becker homogenization rewrite."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import Polynomial, RationalFunction
from .series import MahlerEquation, TruncatedSeries


def hadamard_product(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Coefficient-wise product to the minimum order."""
    n = min(a.order, b.order)
    return TruncatedSeries([a.coeffs[i] * b.coeffs[i] for i in range(n + 1)], n)


# ---------------------------------------------------------------------------
# Complete Hadamard rational functions.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompleteHadamardResult:
    complete: bool
    m: int | None = None  # lcm of the root orders when complete
    witness: Polynomial | None = None  # a denominator factor with a non-root-of-unity root


def _squarefree_radical(p: Polynomial) -> Polynomial:
    g = p.gcd(p.derivative())
    return (p // g).monic() if g.degree > 0 else p.monic()


def _pow_x_mod(d: int, modulus: Polynomial) -> Polynomial:
    """x^d mod modulus by repeated squaring."""
    result = Polynomial.one() % modulus
    base = Polynomial.x() % modulus
    while d:
        if d & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        d >>= 1
    return result


def is_complete_hadamard_rational(f: RationalFunction) -> CompleteHadamardResult:
    """Classify r/s: complete Hadamard iff every root of s is a root of unity.

    Strategy: reduce to the squarefree radical h of s, then peel off
    gcd(h, x^d - 1) for candidate orders d.  Euler's phi satisfies
    phi(d) >= sqrt(d/2), so any root order d of a degree-e factor obeys
    d <= 2 e^2; enumerating d up to 2 deg(h)^2 is exhaustive.  x^d - 1 is
    never materialized: x^d mod h is computed by repeated squaring.
    """
    if f.den.coeff(0) == 0:
        raise ZeroDivisionError("denominator vanishes at 0")
    h = _squarefree_radical(f.den)
    if h.degree <= 0:
        return CompleteHadamardResult(True, m=1)
    bound = 2 * h.degree * h.degree
    m = 1
    for d in range(1, bound + 1):
        g = h.gcd(_pow_x_mod(d, h) - Polynomial.one())
        if g.degree > 0:
            h = (h // g).monic()
            m = _lcm(m, d)
            if h.degree <= 0:
                return CompleteHadamardResult(True, m=m)
    return CompleteHadamardResult(False, witness=_integerize(h))


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def _integerize(p: Polynomial) -> Polynomial:
    """Scale a rational-coefficient polynomial to primitive integer form."""
    dens = [Fraction(c).denominator for c in p.coeffs]
    if not dens:
        return p
    lcm = 1
    for d in dens:
        lcm = _lcm(lcm, d)
    ints = [int(Fraction(c) * lcm) for c in p.coeffs]
    from math import gcd

    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    if ints and ints[-1] < 0:
        ints = [-v for v in ints]
    return Polynomial(ints)


# ---------------------------------------------------------------------------
# Finite-depth k-kernel reports.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelReport:
    k: int
    depth: int
    distinct: int
    generators_estimate: int  # exact rank of the span of subsequence prefixes


def k_kernel(seq, k: int, depth: int) -> KernelReport:
    """Distinct count and rank of the subsequences (x_{k^e n + r}), e <= depth.

    Requires the prefix to show at least 16 terms of every subsequence at the
    maximum depth.  All rows are truncated to the shortest visible length so
    the comparison is deterministic.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    seq = list(seq)
    ke = k**depth
    max_len = (len(seq) - ke) // ke + 1 if len(seq) >= ke else 0
    if max_len < 16:
        raise ValueError(
            f"prefix of length {len(seq)} shows only {max_len} terms at depth {depth}; need >= 16"
        )
    width = max_len
    rows = []
    for e in range(depth + 1):
        step = k**e
        for r in range(step):
            rows.append(tuple(seq[r + step * i] for i in range(width)))
    distinct = len(set(rows))
    rank = _rank([list(map(Fraction, row)) for row in set(rows)])
    return KernelReport(k, depth, distinct, rank)


def _rank(rows: list[list[Fraction]]) -> int:
    if not rows:
        return 0
    width = len(rows[0])
    rank = 0
    col = 0
    rows = [row[:] for row in rows]
    while col < width and rank < len(rows):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [v * inv for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# Becker homogenization (inhomogeneous -> homogeneous pieces).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BeckerPiece:
    """One monomial piece c*q^n of the inhomogeneous term.

    ``constant_equation`` has constant inhomogeneity c and solves for
    g = f_piece / q^n; ``homogeneous`` is its Step-3 subtraction, of depth
    one more, satisfied by the same g.
    """

    shift: int
    constant: object
    constant_equation: MahlerEquation
    homogeneous: MahlerEquation


def becker_homogenize(eq: MahlerEquation) -> list[BeckerPiece]:
    """Split A by monomials, shift each piece into constant shape, then kill
    the constant with the q -> q^k image.  Requires Becker shape A_0 = 1.

    The input solution recombines as f = sum_j q^(n_j) g_j where g_j solves
    piece j's constant equation (and therefore also its homogeneous one).
    """
    if eq.coeffs[0] != Polynomial.one():
        raise ValueError("Becker shape requires A_0(q) = 1")
    if eq.inhomogeneous.is_zero():
        return [BeckerPiece(0, 0, eq, eq)]
    pieces = []
    k = eq.k
    for n, c in enumerate(eq.inhomogeneous.coeffs):
        if not c:
            continue
        shifted = tuple(ai.shift(n * k**i - n) for i, ai in enumerate(eq.coeffs))
        const_eq = MahlerEquation(
            k=k,
            coeffs=shifted,
            inhomogeneous=Polynomial.constant(c),
            normalization=eq.normalization if n == 0 else None,
        )
        pieces.append(BeckerPiece(n, c, const_eq, _step3(const_eq)))
    return pieces


def _step3(eq: MahlerEquation) -> MahlerEquation:
    """Subtract the q -> q^k image to remove a constant inhomogeneity."""
    k = eq.k
    old = eq.coeffs
    d = len(old) - 1
    new = [Polynomial.zero()] * (d + 2)
    for i, ai in enumerate(old):
        new[i] = new[i] + ai
    for i, ai in enumerate(old):
        new[i + 1] = new[i + 1] - ai.substitute_power(k)
    return MahlerEquation(
        k=k, coeffs=tuple(new), inhomogeneous=Polynomial.zero(), normalization=eq.normalization
    )


def recombine_becker(eq: MahlerEquation, pieces: list[BeckerPiece], order: int) -> TruncatedSeries:
    """Solve each piece's constant equation and reassemble sum q^n_j g_j."""
    from .series import solve_mahler

    total = TruncatedSeries.zero(order)
    for piece in pieces:
        if piece.constant_equation is eq:
            g = solve_mahler(eq, order)
        else:
            norm = piece.constant_equation.normalization
            ceq = piece.constant_equation
            if norm is None:
                ceq = MahlerEquation(
                    ceq.k, ceq.coeffs, ceq.inhomogeneous, _forced_or_zero(ceq)
                )
            g = solve_mahler(ceq, order)
        total = total + g.shift(piece.shift)
    return total


def _forced_or_zero(eq: MahlerEquation):
    """Normalization for a shifted piece: g(0) is forced unless the constant
    column vanishes, in which case 0 is the natural choice."""
    coef = sum(ai.coeff(0) for ai in eq.coeffs)
    if coef:
        return None  # determined by the equation itself
    return 0


# ---------------------------------------------------------------------------
# Bounded search for a Mahler recursion of a Hadamard product.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeResult:
    found: MahlerEquation | None
    d_max: int
    deg_max: int
    order: int

    @property
    def is_none_up_to(self) -> bool:
        return self.found is None


def hadamard_mahler_probe(
    f: TruncatedSeries,
    g: RationalFunction,
    k: int,
    order: int,
    d_max: int,
    deg_max: int,
) -> ProbeResult:
    """Search for polynomial A_0..A_d of degree <= deg_max annihilating the
    Hadamard product f * series(g) to the given order.

    Homogeneous relations only; a "none" answer is bounded-search evidence,
    not a proof of non-Mahlerness.  The first solution in the (d, then RREF
    free-column) enumeration order is returned after exact re-verification.
    """
    if order > f.order:
        raise ValueError("order exceeds the truncation order of f")
    h = hadamard_product(f, TruncatedSeries.from_rational(g, f.order)).truncate(order)
    for d in range(d_max + 1):
        sol = _nullspace_first(h, k, d, deg_max)
        if sol is not None:
            coeffs = tuple(
                Polynomial(sol[i * (deg_max + 1) : (i + 1) * (deg_max + 1)])
                for i in range(d + 1)
            )
            eq = MahlerEquation(k=k, coeffs=coeffs, inhomogeneous=Polynomial.zero())
            if eq.residual(h).is_zero():
                return ProbeResult(eq, d_max, deg_max, order)
    return ProbeResult(None, d_max, deg_max, order)


def _nullspace_first(h: TruncatedSeries, k: int, d: int, deg_max: int):
    """First nullspace vector (cleared to integers) of the annihilation
    system, or None when only the trivial solution exists."""
    ncols = (d + 1) * (deg_max + 1)
    order = h.order
    rows = []
    for n in range(order + 1):
        row = [Fraction(0)] * ncols
        nonzero = False
        for i in range(d + 1):
            ki = k**i
            for j in range(deg_max + 1):
                if j > n:
                    break
                if (n - j) % ki:
                    continue
                idx = (n - j) // ki
                c = h.coeffs[idx]
                if c:
                    row[i * (deg_max + 1) + j] += Fraction(c)
                    nonzero = True
        if nonzero:
            rows.append(row)
    # RREF; track pivot columns
    pivots = {}
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                fac = rows[i][col]
                rows[i] = [v - fac * w for v, w in zip(rows[i], rows[r])]
        pivots[col] = r
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    # basis vector for the first free column
    fc = free[0]
    vec = [Fraction(0)] * ncols
    vec[fc] = Fraction(1)
    for col, row in pivots.items():
        vec[col] = -rows[row][fc]
    # clear denominators
    lcm = 1
    for v in vec:
        lcm = _lcm(lcm, v.denominator)
    ints = [int(v * lcm) for v in vec]
    from math import gcd

    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints

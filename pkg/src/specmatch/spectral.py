"""Graph matrices, certified eigenvalue enclosures, exact eigenvalue
comparisons for integer matrices, and equitable-partition quotients.

Enclosures come from Householder tridiagonalisation followed by Sturm
bisection; the bracket is widened by a backward-error bound so the true
eigenvalue of the input matrix lies inside it.  For integer matrices the
characteristic polynomial is computed exactly, which lets callers decide
``lambda_i == r`` for rational ``r`` without any floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .graph import Graph, complement

DEFAULT_TOL = 1e-9
EPS = np.finfo(float).eps
EXACT_MAX_ORDER = 48


class MatrixKind(str, Enum):
    ADJACENCY = "adjacency"
    LAPLACIAN = "laplacian"
    SIGNLESS_LAPLACIAN = "signless_laplacian"


class EigenToleranceError(ArithmeticError):
    """The requested enclosure width could not be certified."""


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense real symmetric matrix.  ``entries`` is a tuple of row tuples."""

    entries: tuple[tuple, ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if n < 1:
            raise ValueError("a matrix needs order at least 1")
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise ValueError("matrix must be square")
            for j in range(i):
                if row[j] != self.entries[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")

    @property
    def order(self) -> int:
        return len(self.entries)

    @cached_property
    def is_integer(self) -> bool:
        return all(isinstance(x, (int, np.integer)) for row in self.entries for x in row)

    def to_numpy(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def row_sums(self) -> list:
        return [sum(row) for row in self.entries]

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.entries)

    @cached_property
    def charpoly(self) -> list[int]:
        """Integer coefficients of det(xI - M), highest degree first."""
        if not self.is_integer:
            raise TypeError("exact characteristic polynomial needs an integer matrix")
        return _charpoly_int([[int(x) for x in row] for row in self.entries])


def build_matrix(g: Graph, kind: MatrixKind | str) -> SymmetricMatrix:
    kind = MatrixKind(kind)
    if g.n < 1:
        raise ValueError("matrices of the empty graph are not defined")
    sign = {MatrixKind.ADJACENCY: 0, MatrixKind.LAPLACIAN: -1,
            MatrixKind.SIGNLESS_LAPLACIAN: 1}[kind]
    diag = 0 if sign == 0 else 1
    rows = []
    for u in range(g.n):
        row = []
        for v in range(g.n):
            if u == v:
                row.append(diag * g.degree(u))
            elif g.has_edge(u, v):
                row.append(1 if sign >= 0 else -1)
            else:
                row.append(0)
        rows.append(tuple(row))
    return SymmetricMatrix(tuple(rows))


# ---------------------------------------------------------------- enclosures


@dataclass(frozen=True)
class EigenEnclosure:
    """Interval ``[lo, hi]`` certified to contain the ``index``-th largest
    eigenvalue (counting multiplicity)."""

    lo: float
    hi: float
    index: int = 1

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2

    @property
    def radius(self) -> float:
        return (self.hi - self.lo) / 2

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float | Fraction, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def __str__(self) -> str:
        return f"{self.mid:.12g}±{self.radius:.3g}"


def householder_tridiagonal(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduce a symmetric matrix to tridiagonal form by Householder
    reflections.  Returns ``(diagonal, offdiagonal)``."""
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        if x[0] > 0:
            alpha = -alpha
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        # A <- H A H with H = I - 2 v v^T applied to the trailing block
        sub = a[k + 1:, k:]
        sub -= 2.0 * np.outer(v, v @ sub)
        a[k + 1:, k:] = sub
        sub = a[k:, k + 1:]
        sub -= 2.0 * np.outer(sub @ v, v)
        a[k:, k + 1:] = sub
    return np.diag(a).copy(), np.diag(a, 1).copy()


def sturm_count(diag: np.ndarray, off: np.ndarray, x: float) -> int:
    """Number of eigenvalues of the tridiagonal matrix strictly below ``x``."""
    pivmin = EPS * max(1.0, float(np.max(np.abs(off)) ** 2) if len(off) else 1.0)
    count = 0
    q = 1.0
    for i in range(len(diag)):
        q = diag[i] - x - (off[i - 1] ** 2 / q if i else 0.0)
        # a vanishing pivot is pushed negative before it is counted
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


@dataclass
class _Tridiagonal:
    diag: np.ndarray
    off: np.ndarray
    pad: float  # bound on |eig(T) - eig(M)| from the reduction and the count

    @classmethod
    def of(cls, m: SymmetricMatrix) -> _Tridiagonal:
        arr = m.to_numpy()
        n = arr.shape[0]
        diag, off = householder_tridiagonal(arr)
        norm = float(np.linalg.norm(arr, "fro"))
        pad = 4.0 * (n + 1) ** 2 * EPS * max(norm, 1.0)
        return cls(diag, off, pad)

    def gershgorin(self) -> tuple[float, float]:
        radius = np.zeros_like(self.diag)
        radius[:-1] += np.abs(self.off)
        radius[1:] += np.abs(self.off)
        return float(np.min(self.diag - radius)) - 1.0, float(np.max(self.diag + radius)) + 1.0


def _bisect(tri: _Tridiagonal, index: int, tol: float, max_iter: int) -> EigenEnclosure:
    n = len(tri.diag)
    below = n - index  # eigenvalues strictly below the target (ascending rank)
    lo, hi = tri.gershgorin()
    for _ in range(max_iter):
        scale = max(1.0, abs(lo), abs(hi))
        if hi - lo + 2 * tri.pad <= tol * scale:
            return EigenEnclosure(lo - tri.pad, hi + tri.pad, index)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if sturm_count(tri.diag, tri.off, mid) > below:
            hi = mid
        else:
            lo = mid
    raise EigenToleranceError(
        f"could not enclose eigenvalue {index} to relative width {tol:g}"
    )


def eigenvalue(m: SymmetricMatrix, index: int = 1, tol: float = DEFAULT_TOL,
               max_iter: int = 200) -> EigenEnclosure:
    """Enclosure of the ``index``-th largest eigenvalue of ``m`` (1-based)."""
    if not 1 <= index <= m.order:
        raise IndexError(f"eigenvalue index {index} out of range 1..{m.order}")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if m.order == 1:
        v = float(m.entries[0][0])
        return EigenEnclosure(v, v, 1)
    return _bisect(_Tridiagonal.of(m), index, tol, max_iter)


def q1(g: Graph, tol: float = DEFAULT_TOL) -> EigenEnclosure:
    return eigenvalue(build_matrix(g, MatrixKind.SIGNLESS_LAPLACIAN), 1, tol)


def q1_complement(g: Graph, tol: float = DEFAULT_TOL) -> EigenEnclosure:
    return q1(complement(g), tol)


def algebraic_connectivity(g: Graph, tol: float = DEFAULT_TOL) -> EigenEnclosure:
    """Second-smallest Laplacian eigenvalue."""
    if g.n < 2:
        raise ValueError("algebraic connectivity needs at least two vertices")
    return eigenvalue(build_matrix(g, MatrixKind.LAPLACIAN), g.n - 1, tol)


# ---------------------------------------------------------------- exact side


def _charpoly_int(a: list[list[int]]) -> list[int]:
    """Faddeev-LeVerrier over the integers; every division is exact."""
    n = len(a)
    arr = np.array(a, dtype=object)
    eye = np.identity(n, dtype=int).astype(object)
    coeffs = [1]
    mk = np.zeros((n, n), dtype=object)  # M_0 = 0
    c = 1
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I,  c_k = -tr(A M_k) / k
        mk = arr.dot(mk) + c * eye
        trace = int(sum(arr[i, :].dot(mk[:, i]) for i in range(n)))
        c, rem = divmod(-trace, k)
        if rem:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        coeffs.append(c)
    return coeffs


def _taylor_shift(coeffs: Sequence, r: Fraction) -> list[Fraction]:
    """Coefficients (highest first) of p(y + r)."""
    out = [Fraction(x) for x in coeffs]
    n = len(out) - 1
    for i in range(n):
        for j in range(1, n - i + 1):
            out[j] += r * out[j - 1]
    return out


def eigen_counts(m: SymmetricMatrix, r: Fraction | int) -> tuple[int, int]:
    """Exact ``(#eigenvalues > r, multiplicity of r)`` for an integer matrix.

    All roots of the characteristic polynomial are real, so Descartes'
    sign rule applied to p(y + r) counts the positive roots exactly.
    """
    shifted = _taylor_shift(m.charpoly, Fraction(r))
    zero_mult = 0
    while shifted and shifted[-1] == 0:
        shifted.pop()
        zero_mult += 1
    signs = [x > 0 for x in shifted if x != 0]
    changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    return changes, zero_mult


def exact_sign(m: SymmetricMatrix, index: int, r: Fraction | int) -> int:
    """Sign of ``lambda_index(m) - r`` decided exactly."""
    above, mult = eigen_counts(m, r)
    if above >= index:
        return 1
    if above + mult >= index:
        return 0
    return -1


EQUALITY_BAND = 10.0


class SpectralValue:
    """An eigenvalue of a graph matrix that can be compared with rationals.

    Comparisons use the enclosure when it clears the threshold by more than
    ``EQUALITY_BAND`` widths; otherwise the exact integer route decides.
    If no exact route exists the enclosure is refined once at ``tol/100``
    and the comparison may remain undecided (None).
    """

    def __init__(self, matrix: SymmetricMatrix, index: int, tol: float = DEFAULT_TOL,
                 exact_max_order: int = EXACT_MAX_ORDER):
        self.matrix = matrix
        self.index = index
        self.tol = tol
        self.exact_max_order = exact_max_order
        self.enclosure = eigenvalue(matrix, index, tol)

    @property
    def has_exact_route(self) -> bool:
        return self.matrix.is_integer and self.matrix.order <= self.exact_max_order

    def sign_vs(self, r: Fraction | int) -> tuple[int | None, str]:
        """``(sign(value - r), method)`` with sign None when undecided."""
        enc = self.enclosure
        band = EQUALITY_BAND * enc.width
        if r < enc.lo - band:
            return 1, "enclosure"
        if r > enc.hi + band:
            return -1, "enclosure"
        if self.has_exact_route:
            return exact_sign(self.matrix, self.index, r), "exact"
        if not enc.contains(r):
            return (1 if r < enc.lo else -1), "enclosure"
        try:
            fine = eigenvalue(self.matrix, self.index, self.tol / 100)
        except EigenToleranceError:
            return None, "undecided"
        if not fine.contains(r):
            return (1 if r < fine.lo else -1), "enclosure"
        return None, "undecided"


# ---------------------------------------------------------------- quotients


@dataclass(frozen=True)
class Partition:
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, blocks: Sequence[Sequence[int]]) -> Partition:
        return cls(tuple(tuple(b) for b in blocks))

    def validate(self, order: int) -> None:
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise ValueError("partition blocks must be nonempty")
            for v in b:
                if not 0 <= v < order:
                    raise ValueError(f"index {v} outside 0..{order - 1}")
                if v in seen:
                    raise ValueError(f"index {v} appears in two blocks")
                seen.add(v)
        if len(seen) != order:
            raise ValueError("partition does not cover every index")


@dataclass(frozen=True)
class QuotientMatrix:
    """Average block row sums ``b_ij``; exact Fractions for integer sources."""

    entries: tuple[tuple, ...]
    sizes: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.entries)


def _block_row_sums(m: SymmetricMatrix, rows: Sequence[int], cols: Sequence[int]) -> list:
    return [sum(m.entries[i][j] for j in cols) for i in rows]


def quotient_matrix(m: SymmetricMatrix, p: Partition) -> QuotientMatrix:
    p.validate(m.order)
    entries = []
    for bi in p.blocks:
        row = []
        for bj in p.blocks:
            total = sum(_block_row_sums(m, bi, bj))
            row.append(Fraction(total, len(bi)) if m.is_integer else total / len(bi))
        entries.append(tuple(row))
    return QuotientMatrix(tuple(entries), tuple(len(b) for b in p.blocks))


def is_equitable(m: SymmetricMatrix, p: Partition) -> bool:
    p.validate(m.order)
    for bi in p.blocks:
        for bj in p.blocks:
            if len(set(_block_row_sums(m, bi, bj))) > 1:
                return False
    return True


def _sqrt_bracket(x: Fraction, bits: int = 96) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= sqrt(x) <= hi`` with ``hi - lo <= 2**-bits``-ish."""
    if x < 0:
        raise ValueError("square root of a negative number")
    scale = 1 << (2 * bits)
    num = x.numerator * scale
    root = math.isqrt(num // x.denominator)
    lo = Fraction(root, 1 << bits)
    if lo * lo == x:
        return lo, lo
    return lo, Fraction(root + 1, 1 << bits)


def _float_below(x: Fraction) -> float:
    f = float(x)
    return f if Fraction(f) <= x else math.nextafter(f, -math.inf)


def _float_above(x: Fraction) -> float:
    f = float(x)
    return f if Fraction(f) >= x else math.nextafter(f, math.inf)


def quotient_spectral_radius(b: QuotientMatrix, tol: float = DEFAULT_TOL) -> EigenEnclosure:
    """Largest eigenvalue of a nonnegative quotient matrix."""
    if any(x < 0 for row in b.entries for x in row):
        raise ValueError("quotient spectral radius is only defined for nonnegative matrices")
    if b.order == 1:
        v = float(b.entries[0][0])
        return EigenEnclosure(v, v, 1)
    if b.order == 2:
        (a11, a12), (a21, a22) = [[Fraction(x) for x in row] for row in b.entries]
        trace = a11 + a22
        disc = trace * trace - 4 * (a11 * a22 - a12 * a21)
        s_lo, s_hi = _sqrt_bracket(disc)
        return EigenEnclosure(_float_below((trace + s_lo) / 2), _float_above((trace + s_hi) / 2), 1)
    # b_ij * n_i is a symmetric block sum, so D^{1/2} B D^{-1/2} is symmetric
    # and shares B's eigenvalues.
    d = np.sqrt(np.array(b.sizes, dtype=float))
    arr = np.array([[float(x) for x in row] for row in b.entries])
    sym = (d[:, None] * arr) / d[None, :]
    sym = 0.5 * (sym + sym.T)
    return eigenvalue(SymmetricMatrix(tuple(tuple(float(x) for x in row) for row in sym)), 1, tol)

"""Dense bivariate complex polynomials on coefficient grids.

A polynomial f(z1, z2) = sum_{k,l} a[k,l] z1^k z2^l is stored as an
(n+1) x (m+1) complex grid with a tight bidegree: the top row (k = n) and
the top column (l = m) each carry at least one coefficient whose modulus
exceeds the trim tolerance, unless f is identically zero.

All operations are pure; instances are treated as immutable values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._roots import trim_trailing

DEFAULT_TRIM_TOL = 1e-12
DEFAULT_SYMMETRY_TOL = 1e-9


def _trim_grid(a: np.ndarray, rel_tol: float) -> np.ndarray:
    mags = np.abs(a)
    top = mags.max()
    if top == 0.0:
        return np.zeros((1, 1), dtype=complex)
    thr = rel_tol * top
    rows = np.nonzero(mags.max(axis=1) > thr)[0]
    cols = np.nonzero(mags.max(axis=0) > thr)[0]
    if rows.size == 0 or cols.size == 0:
        return np.zeros((1, 1), dtype=complex)
    return a[: rows[-1] + 1, : cols[-1] + 1]


class Poly2:
    """Bivariate polynomial with complex floating-point coefficients."""

    __slots__ = ("coeffs", "trim_tolerance")

    def __init__(self, coeffs, trim_tolerance: float = DEFAULT_TRIM_TOL):
        a = np.array(coeffs, dtype=complex)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        elif a.ndim == 1:
            a = a.reshape(-1, 1)
        elif a.ndim != 2:
            raise ValueError("coefficient grid must be two-dimensional")
        if trim_tolerance < 0:
            raise ValueError("trim_tolerance must be nonnegative")
        a = _trim_grid(a, trim_tolerance)
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)
        object.__setattr__(self, "trim_tolerance", float(trim_tolerance))

    def __setattr__(self, name, value):
        raise AttributeError("Poly2 is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly2":
        return cls(np.zeros((1, 1)))

    @classmethod
    def constant(cls, c) -> "Poly2":
        return cls(np.array([[c]], dtype=complex))

    @classmethod
    def monomial(cls, k: int, l: int, c=1.0) -> "Poly2":
        a = np.zeros((k + 1, l + 1), dtype=complex)
        a[k, l] = c
        return cls(a)

    @classmethod
    def from_terms(cls, terms: dict) -> "Poly2":
        """Build from {(k, l): coefficient} pairs."""
        if not terms:
            return cls.zero()
        n = max(k for k, _ in terms)
        m = max(l for _, l in terms)
        a = np.zeros((n + 1, m + 1), dtype=complex)
        for (k, l), c in terms.items():
            a[k, l] = c
        return cls(a)

    # -- structure ----------------------------------------------------------

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1)

    @property
    def is_zero(self) -> bool:
        return bool(np.all(self.coeffs == 0))

    @property
    def scale(self) -> float:
        """Largest coefficient modulus (0 for the zero polynomial)."""
        return float(np.abs(self.coeffs).max())

    def depends_on(self, axis: int) -> bool:
        n, m = self.bidegree
        return (n > 0) if axis == 1 else (m > 0)

    @property
    def is_univariate(self) -> bool:
        n, m = self.bidegree
        return n == 0 or m == 0

    def padded(self, shape: tuple[int, int]) -> np.ndarray:
        """Coefficient grid zero-padded to the given shape."""
        K, L = shape
        n, m = self.bidegree
        if K < n + 1 or L < m + 1:
            raise ValueError("padding shape smaller than the grid")
        out = np.zeros((K, L), dtype=complex)
        out[: n + 1, : m + 1] = self.coeffs
        return out

    # -- evaluation and arithmetic ------------------------------------------

    def __call__(self, z1, z2):
        """Evaluate by bivariate Horner; broadcasts over array inputs."""
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        shape = np.broadcast(z1, z2).shape
        acc = np.zeros(shape, dtype=complex)
        for row in self.coeffs[::-1]:
            inner = np.zeros(shape, dtype=complex)
            for c in row[::-1]:
                inner = inner * z2 + c
            acc = acc * z1 + inner
        return acc if shape else complex(acc)

    def __add__(self, other) -> "Poly2":
        other = _as_poly(other)
        K = max(self.coeffs.shape[0], other.coeffs.shape[0])
        L = max(self.coeffs.shape[1], other.coeffs.shape[1])
        return Poly2(self.padded((K, L)) + other.padded((K, L)), self.trim_tolerance)

    __radd__ = __add__

    def __neg__(self) -> "Poly2":
        return Poly2(-self.coeffs, self.trim_tolerance)

    def __sub__(self, other) -> "Poly2":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly2":
        return _as_poly(other) + (-self)

    def __mul__(self, other) -> "Poly2":
        if np.isscalar(other):
            return Poly2(self.coeffs * other, self.trim_tolerance)
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if self.is_zero or other.is_zero:
            return Poly2.zero()
        out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1),
                       dtype=complex)
        # convolve by accumulating shifted copies of the denser grid
        for k in range(a.shape[0]):
            for l in range(a.shape[1]):
                c = a[k, l]
                if c != 0:
                    out[k: k + b.shape[0], l: l + b.shape[1]] += c * b
        return Poly2(out, self.trim_tolerance)

    __rmul__ = __mul__

    def __pow__(self, p: int) -> "Poly2":
        if p < 0:
            raise ValueError("negative power")
        out = Poly2.constant(1.0)
        base = self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    # -- calculus and reflection --------------------------------------------

    def partial_derivative(self, axis: int) -> "Poly2":
        """Formal derivative with respect to z1 (axis=1) or z2 (axis=2)."""
        a = self.coeffs
        if axis == 1:
            if a.shape[0] == 1:
                return Poly2.zero()
            return Poly2(a[1:] * np.arange(1, a.shape[0])[:, None], self.trim_tolerance)
        if axis == 2:
            if a.shape[1] == 1:
                return Poly2.zero()
            return Poly2(a[:, 1:] * np.arange(1, a.shape[1])[None, :], self.trim_tolerance)
        raise ValueError("axis must be 1 or 2")

    def reflect(self, bidegree: tuple[int, int] | None = None) -> "Poly2":
        """Reflection f~(z) = z1^n z2^m conj(f(1/conj(z1), 1/conj(z2))).

        Coefficientwise b[k, l] = conj(a[n-k, m-l]).  By default (n, m) is
        the tight bidegree; passing `bidegree` reflects at a larger one
        (needed e.g. when reflecting h at the bidegree of f).  Reflection is
        an involution up to the reflecting bidegree: it drops degree exactly
        when the constant term vanishes.
        """
        if self.is_zero:
            raise ValueError("cannot reflect the zero polynomial")
        if bidegree is None:
            grid = self.coeffs
        else:
            grid = self.padded((bidegree[0] + 1, bidegree[1] + 1))
        return Poly2(np.conj(grid[::-1, ::-1]), self.trim_tolerance)

    def swap_variables(self) -> "Poly2":
        return Poly2(self.coeffs.T, self.trim_tolerance)

    def conjugate_coeffs(self) -> "Poly2":
        return Poly2(np.conj(self.coeffs), self.trim_tolerance)

    def univariate_coeffs(self) -> np.ndarray:
        """1-D coefficient array for polynomials in a single variable."""
        n, m = self.bidegree
        if n > 0 and m > 0:
            raise ValueError("polynomial depends on both variables")
        return self.coeffs[:, 0].copy() if m == 0 else self.coeffs[0, :].copy()

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        n, m = self.bidegree
        return {
            "bidegree": [n, m],
            "coeffs": [[[float(c.real), float(c.imag)] for c in row]
                       for row in self.coeffs],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Poly2":
        try:
            n, m = d["bidegree"]
            rows = d["coeffs"]
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"malformed polynomial JSON: {e}") from None
        if len(rows) != n + 1 or any(len(r) != m + 1 for r in rows):
            raise ValueError("ragged or inconsistent coefficient grid")
        a = np.empty((n + 1, m + 1), dtype=complex)
        for k, row in enumerate(rows):
            for l, pair in enumerate(row):
                if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                    raise ValueError("coefficients must be [re, im] pairs")
                a[k, l] = complex(pair[0], pair[1])
        return cls(a)

    def __repr__(self) -> str:
        n, m = self.bidegree
        return f"Poly2(bidegree=({n},{m}), scale={self.scale:.3g})"


def _as_poly(x) -> Poly2:
    if isinstance(x, Poly2):
        return x
    if np.isscalar(x):
        return Poly2.constant(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as Poly2")


def coeff_distance(f: Poly2, g: Poly2) -> float:
    """Max modulus of the coefficientwise difference."""
    K = max(f.coeffs.shape[0], g.coeffs.shape[0])
    L = max(f.coeffs.shape[1], g.coeffs.shape[1])
    return float(np.abs(f.padded((K, L)) - g.padded((K, L))).max())


@dataclass(frozen=True)
class UnimodularMatch:
    """Outcome of testing f~ = lambda * f for a single unimodular lambda."""

    matches: bool
    lam: complex | None
    residual: float


def unimodular_reflection_match(f: Poly2, tol: float = DEFAULT_SYMMETRY_TOL) -> UnimodularMatch:
    """Test whether the reflection equals a unimodular multiple of f.

    lambda is taken from the coefficient of largest modulus and projected to
    the unit circle; the residual is the max coefficient deviation of
    f~ - lambda f.
    """
    if f.is_zero:
        raise ValueError("zero polynomial has no reflection symmetry")
    a = f.coeffs
    b = f.reflect().coeffs
    k, l = np.unravel_index(np.argmax(np.abs(a)), a.shape)
    ratio = b[k, l] / a[k, l]
    lam = ratio / abs(ratio) if abs(ratio) > 0 else 1.0 + 0j
    residual = float(np.abs(b - lam * a).max())
    matches = residual <= tol * f.scale
    return UnimodularMatch(matches, complex(lam) if matches else None, residual)


def normalize_symmetric(f: Poly2, tol: float = DEFAULT_SYMMETRY_TOL) -> tuple[Poly2, complex]:
    """Scale f by a unimodular mu so the result g satisfies g~ = g.

    Requires f~ = lambda f; mu is a square root of lambda.  Returns (g, mu).
    """
    match = unimodular_reflection_match(f, tol)
    if not match.matches:
        raise ValueError(
            f"not reflection-symmetric (residual {match.residual:.3e})")
    mu = np.sqrt(match.lam)
    return f * mu, complex(mu)


@dataclass(frozen=True)
class MobiusParams:
    """Parameters of the bidisk automorphism (a-z1)/(1-conj(a)z1) x same in z2."""

    a: complex
    b: complex = 0j

    def __post_init__(self):
        if abs(self.a) >= 1 or abs(self.b) >= 1:
            raise ValueError("Mobius parameters must lie strictly inside the unit disk")


def mobius_numerator(f: Poly2, params: MobiusParams) -> Poly2:
    """Cleared-denominator Mobius composition.

    Returns (1 - conj(a)z1)^n (1 - conj(b)z2)^m * f((a-z1)/(1-conj(a)z1),
    (b-z2)/(1-conj(b)z2)), a polynomial of bidegree at most (n, m).
    """
    n, m = f.bidegree

    def basis(alpha: complex, deg: int) -> np.ndarray:
        # row k: coefficients of (alpha - z)^k (1 - conj(alpha) z)^(deg - k)
        num = [np.array([1.0 + 0j])]
        den = [np.array([1.0 + 0j])]
        for _ in range(deg):
            num.append(np.convolve(num[-1], np.array([alpha, -1.0])))
            den.append(np.convolve(den[-1], np.array([1.0, -np.conj(alpha)])))
        T = np.zeros((deg + 1, deg + 1), dtype=complex)
        for k in range(deg + 1):
            c = np.convolve(num[k], den[deg - k])
            T[k, : c.size] = c
        return T

    T1 = basis(complex(params.a), n)
    T2 = basis(complex(params.b), m)
    out = np.einsum("kl,ki,lj->ij", f.coeffs, T1, T2)
    return Poly2(out, f.trim_tolerance)


def compute_h(f: Poly2) -> Poly2:
    """h = z1 df/dz1 + z2 df/dz2, i.e. coefficientwise (k+l) a[k,l]."""
    if f.is_zero:
        raise ValueError("h undefined for the zero polynomial")
    n, m = f.bidegree
    k = np.arange(n + 1)[:, None]
    l = np.arange(m + 1)[None, :]
    return Poly2(f.coeffs * (k + l), f.trim_tolerance)


def sylvester_resultant_z2(f: Poly2, g: Poly2,
                           zero_tol: float = 1e-10) -> np.ndarray:
    """Resultant of f and g in z2, a univariate polynomial in z1.

    The Sylvester determinant (entries in C[z1]) is recovered by evaluating
    at roots of unity and interpolating with an inverse DFT.  Returns a 1-D
    low-first coefficient array; the identically zero resultant (common
    z2-factor) comes back as [0].
    """
    if f.is_zero or g.is_zero:
        raise ValueError("resultant of a zero polynomial")
    nf, mf = f.bidegree
    ng, mg = g.bidegree
    if mf == 0 and mg == 0:
        raise ValueError("both polynomials are constant in z2")

    deg_bound = nf * mg + ng * mf
    S = deg_bound + 1
    nodes = np.exp(2j * np.pi * np.arange(S) / S)

    # z2-coefficient rows of f and g evaluated at the z1 nodes
    Vf = nodes[:, None] ** np.arange(nf + 1)[None, :]
    Vg = nodes[:, None] ** np.arange(ng + 1)[None, :]
    Pf = Vf @ f.coeffs          # (S, mf+1), low-first in z2
    Pg = Vg @ g.coeffs          # (S, mg+1)

    size = mf + mg
    M = np.zeros((S, size, size), dtype=complex)
    for r in range(mg):                       # rows from f, high-first
        M[:, r, r: r + mf + 1] = Pf[:, ::-1]
    for r in range(mf):                       # rows from g
        M[:, mg + r, r: r + mg + 1] = Pg[:, ::-1]
    dets = np.linalg.det(M)

    # Hadamard bound gives the natural scale for zero detection
    row_norms = np.sqrt((np.abs(M) ** 2).sum(axis=2))
    hadamard = np.exp(np.log(np.maximum(row_norms, 1e-300)).sum(axis=1)).max()
    if np.abs(dets).max() <= zero_tol * max(hadamard, 1e-300):
        return np.zeros(1, dtype=complex)

    coeffs = np.fft.fft(dets) / S
    return trim_trailing(coeffs, rel=1e-11)

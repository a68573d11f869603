"""Exact arithmetic for multi-affine subset polynomials.

A nonnegative weight function p on subsets of {1, ..., n} is stored through
its generating polynomial

    g_p(x_1, ..., x_n) = sum over S of p(S) * prod_{i in S} x_i,

a polynomial that is affine in each variable separately.  Coefficients live
in a dense tuple of 2**n `fractions.Fraction` values indexed by subset
bitmask, where bit k of the mask stands for variable k+1.  All coefficient
algebra is exact; floating point enters only when a polynomial is evaluated
at a float point.

`SparsePoly` is a companion type for general sparse polynomials with small
integer exponents.  It exists to carry products of first derivatives, which
are quadratic per variable and therefore leave the multi-affine class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

MAX_VARS = 16

RationalLike = Union[Fraction, int, str]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce an int, a Fraction, or a string like '3/22' or '0.05' to Fraction.

    Floats are rejected on purpose: a float literal has already lost the
    decimal value it was written as, and this library promises exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(
        f"expected an exact rational (int, Fraction, or string), got {type(value).__name__}; "
        "write floats as strings, e.g. '0.05'"
    )


def mask_from_indices(indices: Iterable[int], n: int) -> int:
    """Bitmask for a collection of 1-based variable indices."""
    mask = 0
    for i in indices:
        if not 1 <= i <= n:
            raise IndexError(f"variable index {i} out of range 1..{n}")
        bit = 1 << (i - 1)
        if mask & bit:
            raise ValueError(f"duplicate variable index {i}")
        mask |= bit
    return mask


def indices_from_mask(mask: int) -> tuple[int, ...]:
    """Sorted 1-based variable indices present in a bitmask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def format_subset(mask: int) -> str:
    return "{" + ",".join(str(i) for i in indices_from_mask(mask)) + "}"


def check_point(point: Sequence[float], n: int, *, positive: bool = False) -> tuple[float, ...]:
    """Validate an evaluation point and return it as a float tuple.

    With positive=True every coordinate must be a finite float > 0, the
    domain on which log g is defined.
    """
    if len(point) != n:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {n} variables")
    coords = tuple(float(v) for v in point)
    for v in coords:
        if not math.isfinite(v):
            raise ValueError(f"point coordinate {v!r} is not finite")
        if positive and v <= 0.0:
            raise ValueError(f"point coordinate {v!r} is not strictly positive")
    return coords


@dataclass(frozen=True)
class SubsetPoly:
    """Multi-affine polynomial with exact rational coefficients.

    coeffs[mask] is the coefficient of prod_{bit k set in mask} x_{k+1}.
    Instances are immutable; every operation returns a new polynomial.
    """

    n: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_VARS:
            raise ValueError(f"number of variables must be in 1..{MAX_VARS}, got {self.n}")
        if len(self.coeffs) != 1 << self.n:
            raise ValueError(
                f"need {1 << self.n} coefficients for n={self.n}, got {len(self.coeffs)}"
            )
        if not all(isinstance(c, Fraction) for c in self.coeffs):
            raise TypeError("coefficients must be Fraction; use SubsetPoly.from_weights")

    # ----- constructors -------------------------------------------------

    @staticmethod
    def from_weights(n: int, weights: Mapping[int, RationalLike]) -> SubsetPoly:
        """Build from a mask -> rational mapping; missing subsets get 0."""
        coeffs = [_ZERO] * (1 << n)
        for mask, value in weights.items():
            if not 0 <= mask < (1 << n):
                raise ValueError(f"subset mask {mask} out of range for n={n}")
            coeffs[mask] = as_fraction(value)
        return SubsetPoly(n, tuple(coeffs))

    @staticmethod
    def zero(n: int) -> SubsetPoly:
        return SubsetPoly(n, tuple([_ZERO] * (1 << n)))

    @staticmethod
    def constant(n: int, value: RationalLike) -> SubsetPoly:
        return SubsetPoly.from_weights(n, {0: value})

    @staticmethod
    def point_mass(n: int, mask: int) -> SubsetPoly:
        """Distribution concentrated on a single subset."""
        return SubsetPoly.from_weights(n, {mask: 1})

    @staticmethod
    def product_measure(probs: Sequence[RationalLike]) -> SubsetPoly:
        """Independent inclusion probabilities q_i: p(S) = prod q_i prod (1-q_i)."""
        n = len(probs)
        qs = [as_fraction(q) for q in probs]
        for q in qs:
            if not 0 <= q <= 1:
                raise ValueError(f"inclusion probability {q} outside [0, 1]")
        coeffs = []
        for mask in range(1 << n):
            c = _ONE
            for k in range(n):
                c *= qs[k] if mask & (1 << k) else (1 - qs[k])
            coeffs.append(c)
        return SubsetPoly(n, tuple(coeffs))

    # ----- structure ----------------------------------------------------

    def coeff(self, mask: int) -> Fraction:
        if not 0 <= mask < (1 << self.n):
            raise ValueError(f"subset mask {mask} out of range for n={self.n}")
        return self.coeffs[mask]

    def nonzero_masks(self) -> tuple[int, ...]:
        return tuple(m for m, c in enumerate(self.coeffs) if c != 0)

    def coeff_sum(self) -> Fraction:
        return sum(self.coeffs, _ZERO)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_constant(self) -> bool:
        return all(c == 0 for m, c in enumerate(self.coeffs) if m != 0)

    def is_monomial(self) -> bool:
        """Exactly one nonzero coefficient."""
        return len(self.nonzero_masks()) == 1

    def is_affine(self) -> bool:
        """Total degree at most one (only the empty set and singletons weighted)."""
        return all(c == 0 for m, c in enumerate(self.coeffs) if m & (m - 1))

    def has_negative_coeff(self) -> bool:
        return any(c < 0 for c in self.coeffs)

    def is_distribution(self) -> bool:
        return not self.has_negative_coeff() and self.coeff_sum() == 1

    # ----- evaluation ---------------------------------------------------

    def eval(self, point: Sequence[float]) -> float:
        """Evaluate at a float point.  Exact coefficients, float products."""
        coords = check_point(point, self.n)
        total = 0.0
        for mask, c in enumerate(self.coeffs):
            if c == 0:
                continue
            term = float(c)
            m = mask
            k = 0
            while m:
                if m & 1:
                    term *= coords[k]
                m >>= 1
                k += 1
            total += term
        return total

    def eval_exact(self, point: Sequence[RationalLike]) -> Fraction:
        """Evaluate at a rational point entirely in exact arithmetic."""
        if len(point) != self.n:
            raise ValueError(f"point has {len(point)} coordinates, polynomial has {self.n} variables")
        coords = [as_fraction(v) for v in point]
        total = _ZERO
        for mask, c in enumerate(self.coeffs):
            if c == 0:
                continue
            term = c
            m = mask
            k = 0
            while m:
                if m & 1:
                    term *= coords[k]
                m >>= 1
                k += 1
            total += term
        return total

    # ----- calculus on coefficients --------------------------------------

    def derivative(self, var: int) -> SubsetPoly:
        """Partial derivative with respect to variable `var` (1-based).

        Multi-affinity makes this a coefficient shift: the new weight of S
        is the old weight of S together with var, and subsets containing
        var drop to zero.
        """
        if not 1 <= var <= self.n:
            raise IndexError(f"variable index {var} out of range 1..{self.n}")
        bit = 1 << (var - 1)
        coeffs = [_ZERO] * (1 << self.n)
        for mask in range(1 << self.n):
            if not mask & bit:
                coeffs[mask] = self.coeffs[mask | bit]
        return SubsetPoly(self.n, tuple(coeffs))

    def derivative_subset(self, mask: int) -> SubsetPoly:
        """Iterated derivative over a set of distinct variables given as a bitmask."""
        if not 0 <= mask < (1 << self.n):
            raise ValueError(f"derivative mask {mask} out of range for n={self.n}")
        coeffs = [_ZERO] * (1 << self.n)
        for s in range(1 << self.n):
            if not s & mask:
                coeffs[s] = self.coeffs[s | mask]
        return SubsetPoly(self.n, tuple(coeffs))

    # ----- rescaling ------------------------------------------------------

    def scale(self, factor: RationalLike) -> SubsetPoly:
        f = as_fraction(factor)
        if f <= 0:
            raise ValueError(f"scale factor must be positive, got {f}")
        return SubsetPoly(self.n, tuple(c * f for c in self.coeffs))

    def normalize(self) -> SubsetPoly:
        """Rescale so the coefficients sum to one."""
        s = self.coeff_sum()
        if s <= 0:
            raise ValueError(f"cannot normalize: coefficient sum is {s}")
        return self.scale(1 / s)

    def permute(self, images: Sequence[int]) -> SubsetPoly:
        """Relabel variables: variable i becomes images[i-1] (a permutation of 1..n)."""
        if sorted(images) != list(range(1, self.n + 1)):
            raise ValueError(f"{images!r} is not a permutation of 1..{self.n}")
        coeffs = [_ZERO] * (1 << self.n)
        for mask, c in enumerate(self.coeffs):
            target = 0
            m = mask
            k = 0
            while m:
                if m & 1:
                    target |= 1 << (images[k] - 1)
                m >>= 1
                k += 1
            coeffs[target] = c
        return SubsetPoly(self.n, tuple(coeffs))

    def __str__(self) -> str:
        return sparse_from_subset(self).__str__()


def default_var_names(n: int) -> tuple[str, ...]:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i}" for i in range(1, n + 1))


@dataclass(frozen=True)
class SparsePoly:
    """Sparse polynomial in n variables with exact rational coefficients.

    terms maps an exponent tuple of length n to a nonzero Fraction.  The
    mapping is canonical: zero coefficients are never stored, so equality
    of dataclass fields is equality of polynomials.  Treat instances as
    immutable.
    """

    n: int
    terms: Mapping[tuple[int, ...], Fraction]

    @staticmethod
    def make(n: int, terms: Mapping[tuple[int, ...], RationalLike]) -> SparsePoly:
        if not 1 <= n <= MAX_VARS:
            raise ValueError(f"number of variables must be in 1..{MAX_VARS}, got {n}")
        canon: dict[tuple[int, ...], Fraction] = {}
        for exps, value in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(f"exponent tuple {exps} has length {len(exps)}, expected {n}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = as_fraction(value)
            if c != 0:
                canon[exps] = canon.get(exps, _ZERO) + c
                if canon[exps] == 0:
                    del canon[exps]
        return SparsePoly(n, canon)

    @staticmethod
    def zero(n: int) -> SparsePoly:
        return SparsePoly(n, {})

    @staticmethod
    def constant(n: int, value: RationalLike) -> SparsePoly:
        return SparsePoly.make(n, {(0,) * n: value})

    @staticmethod
    def variable(n: int, var: int) -> SparsePoly:
        if not 1 <= var <= n:
            raise IndexError(f"variable index {var} out of range 1..{n}")
        exps = tuple(1 if k == var - 1 else 0 for k in range(n))
        return SparsePoly(n, {exps: _ONE})

    # ----- ring operations ----------------------------------------------

    def _require_same_n(self, other: SparsePoly) -> None:
        if self.n != other.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")

    def __add__(self, other: SparsePoly) -> SparsePoly:
        self._require_same_n(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            tot = out.get(exps, _ZERO) + c
            if tot == 0:
                out.pop(exps, None)
            else:
                out[exps] = tot
        return SparsePoly(self.n, out)

    def __neg__(self) -> SparsePoly:
        return SparsePoly(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: SparsePoly) -> SparsePoly:
        return self + (-other)

    def __mul__(self, other: SparsePoly | RationalLike) -> SparsePoly:
        if isinstance(other, SparsePoly):
            self._require_same_n(other)
            out: dict[tuple[int, ...], Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    exps = tuple(a + b for a, b in zip(e1, e2))
                    tot = out.get(exps, _ZERO) + c1 * c2
                    if tot == 0:
                        out.pop(exps, None)
                    else:
                        out[exps] = tot
            return SparsePoly(self.n, out)
        c = as_fraction(other)
        if c == 0:
            return SparsePoly.zero(self.n)
        return SparsePoly(self.n, {e: v * c for e, v in self.terms.items()})

    def __rmul__(self, other: RationalLike) -> SparsePoly:
        return self.__mul__(other)

    def abs_coeffs(self) -> SparsePoly:
        """Coefficient-wise absolute value: an upper bound for |self| on x > 0."""
        return SparsePoly(self.n, {e: abs(c) for e, c in self.terms.items()})

    # ----- predicates ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def all_coeffs_nonneg(self) -> bool:
        return all(c >= 0 for c in self.terms.values())

    def has_positive_coeff(self) -> bool:
        return any(c > 0 for c in self.terms.values())

    def total_degree(self) -> int:
        """Degree of the highest term, or -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    # ----- evaluation -------------------------------------------------------

    def eval(self, point: Sequence[float]) -> float:
        coords = check_point(point, self.n)
        total = 0.0
        for exps, c in self.terms.items():
            term = float(c)
            for v, e in zip(coords, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    def eval_exact(self, point: Sequence[RationalLike]) -> Fraction:
        if len(point) != self.n:
            raise ValueError(f"point has {len(point)} coordinates, polynomial has {self.n} variables")
        coords = [as_fraction(v) for v in point]
        total = _ZERO
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(coords, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    def __str__(self) -> str:
        return self.format()

    def format(self, var_names: Sequence[str] | None = None) -> str:
        """Deterministic human-readable rendering, low degree terms first."""
        if not self.terms:
            return "0"
        names = var_names or default_var_names(self.n)
        if len(names) != self.n:
            raise ValueError(f"need {self.n} variable names, got {len(names)}")
        pieces = []
        for exps in sorted(self.terms, key=lambda e: (sum(e), tuple(-v for v in e))):
            c = self.terms[exps]
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            mag = abs(c)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if not pieces:
                pieces.append(text if c > 0 else f"-{text}")
            else:
                pieces.append(f"+ {text}" if c > 0 else f"- {text}")
        return " ".join(pieces)


def sparse_from_subset(p: SubsetPoly) -> SparsePoly:
    """View a multi-affine subset polynomial as a SparsePoly (same values everywhere)."""
    terms: dict[tuple[int, ...], Fraction] = {}
    for mask, c in enumerate(p.coeffs):
        if c == 0:
            continue
        exps = tuple(1 if mask & (1 << k) else 0 for k in range(p.n))
        terms[exps] = c
    return SparsePoly(p.n, terms)

"""Verdicts, witnesses, certificates, and the checking procedures.

Three verdict shapes cover every check:

  * Holds(certificate)        proved, with the exact reason attached;
  * Violated(witness)         disproved, with a re-checkable witness;
  * NoViolationFound(stats)   sampling ran out of points, nothing proved.

Sampling can only ever falsify.  A Holds verdict always traces back to an
exact argument: exhaustive enumeration for the lattice condition, a
coefficient-wise diagonal dominance certificate, or membership in a class
that is log-concave for structural reasons (zero, constant, a single
monomial, or an affine polynomial).  Every Violated verdict re-verifies its
own witness from scratch before it is returned.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

import numpy as np

from .calculus import SymbolicMatrix, log_hessian, log_hessian_many, m_matrix
from .linalg import eigen_sym, nsd_threshold
from .poly import SparsePoly, SubsetPoly, format_subset

# ----- certificates ---------------------------------------------------------


@dataclass(frozen=True)
class ExhaustiveEnumeration:
    """All pairs of subsets were checked exactly."""

    pairs_checked: int


@dataclass(frozen=True)
class TrivialLogConcavity:
    """Membership in a structurally log-concave class.

    kind is one of 'zero', 'constant', 'monomial', 'affine'.  A constant or
    single monomial has an affine logarithm; an affine polynomial has
    log-Hessian -grad grad^T / g^2, which is negative semidefinite wherever
    g is positive; the zero polynomial holds by convention.
    """

    kind: str


@dataclass(frozen=True)
class DominanceCertificate:
    """Coefficient-wise strict diagonal dominance of the M matrix.

    row_gaps[i] is M_ii minus the coefficient-wise absolute values of the
    off-diagonal row entries.  Every gap has nonnegative coefficients and at
    least one positive coefficient, so on the open positive orthant M is
    strictly diagonally dominant with positive diagonal, hence positive
    definite, hence log g is concave there.
    """

    matrix: SymbolicMatrix
    row_gaps: tuple[SparsePoly, ...]


@dataclass(frozen=True)
class SubsetCertificates:
    """Aggregate certificate: one exact certificate per derivative subset."""

    entries: tuple[tuple[int, Union[TrivialLogConcavity, DominanceCertificate]], ...]


Certificate = Union[
    ExhaustiveEnumeration, TrivialLogConcavity, DominanceCertificate, SubsetCertificates
]

# ----- witnesses -------------------------------------------------------------


@dataclass(frozen=True)
class NlcWitness:
    """A pair of subsets violating p(S) p(T) >= p(S | T) p(S & T)."""

    s_mask: int
    t_mask: int
    lhs: Fraction
    rhs: Fraction

    def describe(self) -> str:
        return (
            f"S = {format_subset(self.s_mask)}, T = {format_subset(self.t_mask)}: "
            f"p(S)*p(T) = {format_fraction_pair(self.lhs, self.rhs)} = p(S|T)*p(S&T)"
        )


@dataclass(frozen=True)
class PointWitness:
    """A positive point where a derivative's log-Hessian fails to be NSD."""

    subset_mask: int
    point: tuple[float, ...]
    max_eigenvalue: float
    threshold: float

    def describe(self) -> str:
        pt = "(" + ", ".join(repr(v) for v in self.point) + ")"
        return (
            f"derivative subset A = {format_subset(self.subset_mask)} at {pt}: "
            f"max log-Hessian eigenvalue {self.max_eigenvalue:.6e} "
            f"exceeds threshold {self.threshold:.6e}"
        )


def format_fraction_pair(lhs: Fraction, rhs: Fraction) -> str:
    """Render two rationals over their least common denominator, as 'a/d < b/d'."""
    den = math.lcm(lhs.denominator, rhs.denominator)
    rel = "<" if lhs < rhs else (">" if lhs > rhs else "=")
    return (
        f"{lhs.numerator * (den // lhs.denominator)}/{den} {rel} "
        f"{rhs.numerator * (den // rhs.denominator)}/{den}"
    )


# ----- verdicts --------------------------------------------------------------


@dataclass(frozen=True)
class SampleStats:
    points_tested: int
    derivatives_tested: int
    tolerance: float
    seed: object
    max_eigenvalue_seen: float


@dataclass(frozen=True)
class Holds:
    certificate: Certificate


@dataclass(frozen=True)
class Violated:
    witness: Union[NlcWitness, PointWitness]


@dataclass(frozen=True)
class NoViolationFound:
    stats: SampleStats


Verdict = Union[Holds, Violated, NoViolationFound]


def exit_code(verdict: Verdict) -> int:
    """Process exit convention: 0 unless a violation was found."""
    return 1 if isinstance(verdict, Violated) else 0


# ----- negative lattice condition --------------------------------------------


def _require_nonnegative(p: SubsetPoly) -> None:
    if p.has_negative_coeff():
        raise ValueError("weights must be nonnegative")


def check_nlc(p: SubsetPoly) -> Verdict:
    """Exact log-submodularity check by full enumeration.

    Tests p(S) p(T) >= p(S | T) p(S & T) for every ordered pair of subsets
    (cost 4**n) and returns the lexicographically first violating pair by
    (S, T) bitmask, or Holds with an enumeration certificate.
    """
    _require_nonnegative(p)
    size = 1 << p.n
    c = p.coeffs
    for s in range(size):
        ps = c[s]
        for t in range(size):
            # Comparable pairs hold with equality; skip the products.
            if s & t == s or s & t == t:
                continue
            lhs = ps * c[t]
            rhs = c[s | t] * c[s & t]
            if lhs < rhs:
                witness = NlcWitness(s, t, lhs, rhs)
                _reverify_nlc_witness(p, witness)
                return Violated(witness)
    return Holds(ExhaustiveEnumeration(pairs_checked=size * size))


def _reverify_nlc_witness(p: SubsetPoly, w: NlcWitness) -> None:
    lhs = p.coeff(w.s_mask) * p.coeff(w.t_mask)
    rhs = p.coeff(w.s_mask | w.t_mask) * p.coeff(w.s_mask & w.t_mask)
    if not (lhs == w.lhs and rhs == w.rhs and lhs < rhs):
        raise AssertionError(f"witness failed re-verification: {w}")


def nlc_violations(p: SubsetPoly) -> list[NlcWitness]:
    """Every violating ordered pair, in lexicographic (S, T) order."""
    _require_nonnegative(p)
    size = 1 << p.n
    c = p.coeffs
    out = []
    for s in range(size):
        for t in range(size):
            if s & t == s or s & t == t:
                continue
            lhs = c[s] * c[t]
            rhs = c[s | t] * c[s & t]
            if lhs < rhs:
                out.append(NlcWitness(s, t, lhs, rhs))
    return out


# ----- sampled log-concavity ---------------------------------------------------

GRID_VALUES = (0.1, 0.5, 1.0, 2.0, 10.0)

# The fixed grid has 5**n points; past this many variables it would dwarf
# the random sample, so it is only included for small n.
GRID_MAX_VARS = 6


@dataclass(frozen=True)
class SampleConfig:
    """Configuration for the sampling falsifier.

    points log-uniform samples are drawn from box[0]..box[1] per coordinate,
    on top of a fixed deterministic grid.  tolerance is relative: at each
    point the largest log-Hessian eigenvalue may not exceed
    tolerance * (1 + max |H entry|).
    """

    points: int = 2000
    box: tuple[float, float] = (0.01, 100.0)
    seed: object = 0
    tolerance: float = 1e-9
    chunk: int = 1024

    def validate(self) -> None:
        lo, hi = self.box
        if not (0.0 < lo <= hi):
            raise ValueError(f"box must satisfy 0 < lo <= hi, got {self.box}")
        if self.points < 0:
            raise ValueError("points must be nonnegative")
        if self.tolerance < 0:
            raise ValueError("tolerance must be nonnegative")
        if self.chunk <= 0:
            raise ValueError("chunk must be positive")


def grid_points(n: int) -> np.ndarray:
    if n > GRID_MAX_VARS:
        return np.empty((0, n), dtype=float)
    return np.array(list(itertools.product(GRID_VALUES, repeat=n)), dtype=float)


def sample_points(n: int, cfg: SampleConfig) -> np.ndarray:
    """Deterministic point sequence: fixed grid first, then seeded log-uniform draws."""
    rng = np.random.default_rng(cfg.seed)
    lo, hi = cfg.box
    draws = np.exp(rng.uniform(np.log(lo), np.log(hi), size=(cfg.points, n)))
    return np.vstack([grid_points(n), draws])


def trivial_log_concavity(p: SubsetPoly) -> TrivialLogConcavity | None:
    """Exact structural reasons making log g concave wherever g > 0."""
    if p.is_zero():
        return TrivialLogConcavity("zero")
    if p.is_constant():
        return TrivialLogConcavity("constant")
    if p.is_monomial():
        return TrivialLogConcavity("monomial")
    if p.is_affine():
        return TrivialLogConcavity("affine")
    return None


def check_log_concavity_sampled(
    p: SubsetPoly, cfg: SampleConfig = SampleConfig(), *, subset_mask: int = 0
) -> Verdict:
    """Search positive points for a non-NSD log-Hessian.

    Never returns Holds on the strength of samples alone: only the zero,
    constant, and single-monomial short circuits produce Holds here.  The
    scan order (grid, then seeded draws) is deterministic, and the first
    confirmed failure wins.  subset_mask only labels the witness; the
    polynomial passed in is checked as is.
    """
    _require_nonnegative(p)
    cfg.validate()
    if p.is_zero():
        return Holds(TrivialLogConcavity("zero"))
    if p.is_constant():
        return Holds(TrivialLogConcavity("constant"))
    if p.is_monomial():
        return Holds(TrivialLogConcavity("monomial"))

    pts = sample_points(p.n, cfg)
    max_seen = -np.inf
    tested = 0
    for start in range(0, pts.shape[0], cfg.chunk):
        chunk = pts[start : start + cfg.chunk]
        hessians = log_hessian_many(p, chunk)
        eigs = np.linalg.eigvalsh(hessians)[:, -1]
        thresholds = cfg.tolerance * (1.0 + np.abs(hessians).max(axis=(1, 2)))
        max_seen = max(max_seen, float(eigs.max()))
        bad = np.flatnonzero(eigs > thresholds)
        for k in bad:
            point = tuple(float(v) for v in chunk[k])
            witness = _confirm_point_witness(p, point, cfg.tolerance, subset_mask)
            if witness is not None:
                return Violated(witness)
        tested += chunk.shape[0]
    stats = SampleStats(
        points_tested=tested,
        derivatives_tested=1,
        tolerance=cfg.tolerance,
        seed=cfg.seed,
        max_eigenvalue_seen=max_seen,
    )
    return NoViolationFound(stats)


def _confirm_point_witness(
    p: SubsetPoly, point: tuple[float, ...], tolerance: float, subset_mask: int
) -> PointWitness | None:
    """Re-derive the failure from scratch through the scalar path and Jacobi."""
    h = log_hessian(p, point)
    top = eigen_sym(h).max
    threshold = nsd_threshold(h, tolerance)
    if top > threshold:
        return PointWitness(subset_mask, point, top, threshold)
    return None


def verify_point_witness(p: SubsetPoly, witness: PointWitness) -> bool:
    """Re-check a PointWitness against the polynomial it was issued for.

    The witness stores the absolute threshold that was in force, so the
    re-check is a fresh log-Hessian evaluation plus one Jacobi eigen solve.
    """
    q = p.derivative_subset(witness.subset_mask)
    h = log_hessian(q, witness.point)
    return eigen_sym(h).max > witness.threshold


# ----- dominance certificate ----------------------------------------------------


def certify_log_concavity_dominance(p: SubsetPoly) -> DominanceCertificate | None:
    """Try to prove log-concavity on the whole positive orthant, exactly.

    Builds M = grad g grad g^T - g D2g and, per row, the gap polynomial

        D_i = M_ii - sum_{j != i} abs_coeffs(M_ij).

    If every gap has nonnegative coefficients and at least one positive
    coefficient then, at every point with all coordinates positive, M is
    strictly diagonally dominant with positive diagonal, hence positive
    definite; so the log-Hessian is negative definite there.  Returns None
    when this sufficient condition does not apply (which proves nothing).
    """
    _require_nonnegative(p)
    if p.is_zero():
        return None
    m = m_matrix(p)
    gaps = []
    for i in range(p.n):
        if not m.entry(i, i).all_coeffs_nonneg():
            return None
        gap = m.entry(i, i)
        for j in range(p.n):
            if j != i:
                gap = gap - m.entry(i, j).abs_coeffs()
        if not (gap.all_coeffs_nonneg() and gap.has_positive_coeff()):
            return None
        gaps.append(gap)
    return DominanceCertificate(matrix=m, row_gaps=tuple(gaps))


# ----- full strong log-concavity check -------------------------------------------


@dataclass(frozen=True)
class SlcReport:
    """Outcome of checking every square-free derivative of p.

    subsets maps each derivative bitmask A (including 0) to the verdict for
    that derivative.  aggregate is Violated if anything was violated, Holds
    if every subset carries an exact certificate, and NoViolationFound
    otherwise.
    """

    subsets: Mapping[int, Verdict]
    aggregate: Verdict


def check_slc(p: SubsetPoly, cfg: SampleConfig = SampleConfig()) -> SlcReport:
    """Check log-concavity of every iterated derivative of g_p.

    Only square-free derivative sets matter: differentiating a multi-affine
    polynomial twice in the same variable yields zero.  Per subset the
    strategy is triviality, then the exact dominance certificate, then
    sampling.
    """
    _require_nonnegative(p)
    cfg.validate()
    results: dict[int, Verdict] = {}
    for a in range(1 << p.n):
        q = p.derivative_subset(a)
        trivial = trivial_log_concavity(q)
        if trivial is not None:
            results[a] = Holds(trivial)
            continue
        cert = certify_log_concavity_dominance(q)
        if cert is not None:
            results[a] = Holds(cert)
            continue
        results[a] = check_log_concavity_sampled(q, cfg, subset_mask=a)
    return SlcReport(subsets=results, aggregate=_aggregate(results, cfg))


def _aggregate(results: Mapping[int, Verdict], cfg: SampleConfig) -> Verdict:
    for a in sorted(results):
        v = results[a]
        if isinstance(v, Violated):
            return v
    if all(isinstance(v, Holds) for v in results.values()):
        entries = tuple((a, results[a].certificate) for a in sorted(results))  # type: ignore[union-attr]
        return Holds(SubsetCertificates(entries))
    points = sum(
        v.stats.points_tested for v in results.values() if isinstance(v, NoViolationFound)
    )
    max_seen = max(
        (v.stats.max_eigenvalue_seen for v in results.values() if isinstance(v, NoViolationFound)),
        default=-np.inf,
    )
    stats = SampleStats(
        points_tested=points,
        derivatives_tested=len(results),
        tolerance=cfg.tolerance,
        seed=cfg.seed,
        max_eigenvalue_seen=max_seen,
    )
    return NoViolationFound(stats)

"""Coordinate Bethe ansatz for the open XXZ chain: phases, counting
function, and the momentum solver.

Conventions
-----------
The chain has ``L`` sites, ``M`` down spins, anisotropy ``delta`` and
boundary fields ``h`` (left, site 0) and ``h_prime`` (right, site L-1).
Real momenta ``k_j`` live in the open interval (0, pi); the reflection
``k -> -k`` labels the same state, so only positive representatives are
reported.  Each solution is indexed by ``M`` distinct integers
``J_j in {1, ..., L}`` through ``Z(k_j) = 2 pi J_j`` where ``Z`` is the
counting function below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateSolutionError,
    SingularPhaseError,
    ValidationError,
)

__all__ = [
    "ModelParams",
    "QuantumNumbers",
    "BetheSolution",
    "theta",
    "phi",
    "counting_function",
    "solve_bethe_roots",
    "energy",
    "recover_quantum_numbers",
]

#: grid resolution used to track the continuous branch of the counting
#: function across arctangent discontinuities on (0, pi)
_BRANCH_GRID = 20001

_TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# parameter containers


@dataclass(frozen=True)
class ModelParams:
    """Couplings and sizes of one spin chain instance.

    ``delta`` is the anisotropy, ``h``/``h_prime`` are the boundary
    fields on the first/last site, ``length`` is the number of sites L,
    and ``num_down`` the number of down spins M.  The working regime is
    ``0 <= M <= floor(L / 2)``.
    """

    delta: float
    h: float
    h_prime: float
    length: int
    num_down: int

    def __post_init__(self):
        for name in ("delta", "h", "h_prime"):
            v = getattr(self, name)
            if not math.isfinite(float(v)):
                raise ValidationError(f"{name} must be a finite real, got {v!r}")
        if int(self.length) != self.length or self.length < 2:
            raise ValidationError(f"length must be an integer >= 2, got {self.length!r}")
        if int(self.num_down) != self.num_down or not (
            0 <= self.num_down <= self.length // 2
        ):
            raise ValidationError(
                f"num_down must satisfy 0 <= M <= floor(L/2); "
                f"got M={self.num_down!r} for L={self.length!r}"
            )
        object.__setattr__(self, "length", int(self.length))
        object.__setattr__(self, "num_down", int(self.num_down))


@dataclass(frozen=True)
class QuantumNumbers:
    """Ordered tuple of M pairwise-distinct integers J_j in {1, ..., L}."""

    values: tuple

    def __init__(self, values):
        vals = tuple(int(v) for v in values)
        if len(set(vals)) != len(vals):
            raise ValidationError(f"quantum numbers must be distinct, got {vals}")
        object.__setattr__(self, "values", vals)

    def validate(self, params: ModelParams):
        vals = self.values
        if len(vals) != params.num_down:
            raise ValidationError(
                f"expected {params.num_down} quantum numbers, got {len(vals)}"
            )
        if len(set(vals)) != len(vals):
            raise ValidationError(f"quantum numbers must be distinct, got {vals}")
        for v in vals:
            if not 1 <= v <= params.length:
                raise ValidationError(
                    f"quantum number {v} outside {{1, ..., {params.length}}}"
                )
        return self


@dataclass(frozen=True)
class BetheSolution:
    """Solved momenta with their labels, energy and solver diagnostics.

    ``residual`` is ``max_j |Z(k_j; {k_l}) - 2 pi J_j|`` evaluated with
    the returned roots.
    """

    roots: tuple
    quantum_numbers: QuantumNumbers
    energy: float
    iterations: int
    residual: float

    @property
    def num_down(self):
        return len(self.roots)


# ---------------------------------------------------------------------------
# scattering phases


def _arctan_quotient(num, den):
    """Principal arctangent of ``num / den`` with 0/0 detection.

    A vanishing numerator with nonzero denominator gives exactly 0; a
    vanishing denominator with nonzero numerator gives +-pi/2.  Both
    vanishing signals a degenerate momentum pair and raises.
    """
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    singular = (num == 0.0) & (den == 0.0)
    if np.any(singular):
        raise SingularPhaseError("arctangent quotient is 0/0")
    with np.errstate(divide="ignore"):
        return np.arctan(np.true_divide(num, den))


def theta(k, k_prime, delta):
    """Two-momentum scattering phase.

    ``theta(k, k') = 2 arctan[ d sin((k-k')/2) / (d cos((k-k')/2)
    - cos((k+k')/2)) ]`` with the principal single-argument arctangent.
    Antisymmetric under exchange of its momentum arguments.  Accepts
    scalars or numpy arrays (broadcast).
    """
    k = np.asarray(k, dtype=float)
    k_prime = np.asarray(k_prime, dtype=float)
    half_diff = 0.5 * (k - k_prime)
    half_sum = 0.5 * (k + k_prime)
    out = 2.0 * _arctan_quotient(
        delta * np.sin(half_diff), delta * np.cos(half_diff) - np.cos(half_sum)
    )
    if out.ndim == 0:
        return float(out)
    return out


def phi(k, field, delta):
    """Boundary reflection phase for one momentum and one boundary field.

    ``phi(k, f) = -2 arctan[ (f-d) sin k / (1 + (f-d) cos k) ]``,
    principal branch; odd in ``k``.
    """
    k = np.asarray(k, dtype=float)
    a = field - delta
    out = -2.0 * _arctan_quotient(a * np.sin(k), 1.0 + a * np.cos(k))
    if out.ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# counting function


def _counting_raw(k, roots, params):
    """Termwise counting function with principal-branch arctangents.

    ``2(L+1)k + phi(k,h) + phi(k,h') + theta(k,-k)
    - sum_l [theta(k,k_l) + theta(k,-k_l)]``.  The sum runs over every
    root in ``roots`` including any equal to ``k`` (the diagonal
    ``theta(k, k)`` term is exactly zero).  Vectorized over ``k``.
    """
    k = np.asarray(k, dtype=float)
    z = (
        2.0 * (params.length + 1) * k
        + phi(k, params.h, params.delta)
        + phi(k, params.h_prime, params.delta)
        + theta(k, -k, params.delta)
    )
    for kl in roots:
        z = z - (theta(k, kl, params.delta) + theta(k, -kl, params.delta))
    return z


def _branch_correction_grid(roots, params, extra_points=None):
    """Evaluation grid on (0, hi) with cumulative 2-pi branch corrections.

    The principal arctangents in the counting function jump by multiples
    of 2 pi at isolated momenta.  Subtracting the accumulated jumps
    restores the continuous branch anchored at ``Z(0) = 0``.  Returns
    ``(grid, z_corrected, corrections)`` where ``corrections[i]`` is the
    amount subtracted at ``grid[i]``.
    """
    hi = math.pi
    if extra_points is not None and len(extra_points):
        hi = max(hi, float(np.max(extra_points)) * (1.0 + 1e-12))
    n = max(_BRANCH_GRID, int(_BRANCH_GRID * hi / math.pi))
    grid = np.linspace(0.0, hi, n)
    grid[0] = 1e-12
    if extra_points is not None and len(extra_points):
        pts = np.asarray(extra_points, dtype=float)
        grid = np.unique(np.concatenate([grid, pts[(pts > 0.0) & (pts <= hi)]]))
    z = _counting_raw(grid, roots, params)
    d = np.diff(z)
    jumps = np.where(np.abs(d) > math.pi, np.round(d / _TWO_PI) * _TWO_PI, 0.0)
    corrections = np.concatenate([[0.0], np.cumsum(jumps)])
    return grid, z - corrections, corrections


def counting_function(k, roots, params):
    """Continuous counting function ``Z(k; {k_l})``.

    Evaluates the termwise formula (see ``_counting_raw``) and removes
    the isolated 2-pi discontinuities introduced by the principal
    arctangent branches, so that Z is continuous on (0, pi) with
    ``Z(0) = 0``; negative momenta use oddness, ``Z(-k) = -Z(k)``.
    Solutions satisfy ``Z(k_j) = 2 pi J_j`` with the integer labels
    ``J_j`` used throughout this package.

    Accepts a scalar or an array of momenta; ``roots`` must hold exactly
    ``params.num_down`` values.
    """
    roots = tuple(float(r) for r in roots)
    if len(roots) != params.num_down:
        raise ValidationError(
            f"expected {params.num_down} roots, got {len(roots)}"
        )
    karr = np.atleast_1d(np.asarray(k, dtype=float))
    absk = np.abs(karr)
    out = np.zeros_like(absk)
    nz = absk > 0.0
    if np.any(nz):
        grid, _, corrections = _branch_correction_grid(
            roots, params, extra_points=absk[nz]
        )
        pos = np.searchsorted(grid, absk[nz])
        pos = np.clip(pos, 0, len(grid) - 1)
        raw = _counting_raw(absk[nz], roots, params)
        out[nz] = raw - corrections[pos]
    out = out * np.sign(karr)
    if np.ndim(k) == 0:
        return float(out[0])
    return out


# ---------------------------------------------------------------------------
# solver


def _solve_level(level, grid, z_corrected, corrections, roots, params):
    """Find k in (0, pi) with continuous Z(k) = level by cell bisection.

    ``grid``/``z_corrected``/``corrections`` come from
    ``_branch_correction_grid`` for the current root configuration.  The
    refinement evaluates the raw counting function and re-applies the
    cell's branch correction, wrapping any residual 2-pi slip.
    """
    if not z_corrected[0] < level < z_corrected[-1]:
        raise ConvergenceError(
            "quantum-number level lies outside the counting-function range "
            "(no real solution)",
            last_roots=roots,
        )
    i = int(np.searchsorted(z_corrected, level)) - 1
    i = max(0, min(i, len(grid) - 2))
    a, b = grid[i], grid[i + 1]
    fa = z_corrected[i] - level
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = _counting_raw(mid, roots, params) - corrections[i] - level
        fm -= _TWO_PI * np.round(fm / _TWO_PI)
        if fa * fm <= 0.0:
            b = mid
        else:
            a, fa = mid, fm
        if b - a < 5e-17:
            break
    return 0.5 * (a + b)


def _wrapped_residuals(ks, levels, params):
    """Residuals Z(k_j) - 2 pi J_j folded into (-pi, pi]."""
    res = np.empty(len(ks))
    for j, kj in enumerate(ks):
        r = float(_counting_raw(kj, ks, params)) - levels[j]
        res[j] = r - _TWO_PI * np.round(r / _TWO_PI)
    return res


def _newton_polish(ks, levels, params, steps=8):
    """Joint Newton refinement of the wrapped residuals.

    Full (undamped) steps with a finite-difference Jacobian; any step
    leaving the momentum domain aborts the polish, keeping the sweep
    result.
    """
    ks = np.array(ks, dtype=float)
    m = len(ks)
    eps = 1e-7
    for _ in range(steps):
        f = _wrapped_residuals(ks, levels, params)
        if np.max(np.abs(f)) < 1e-14:
            break
        jac = np.empty((m, m))
        for c in range(m):
            shifted = ks.copy()
            shifted[c] += eps
            jac[:, c] = (_wrapped_residuals(shifted, levels, params) - f) / eps
        try:
            step = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError:
            break
        cand = ks - step
        if np.any(~np.isfinite(cand)) or np.any(cand <= 0.0) or np.any(cand >= math.pi):
            break
        ks = cand
    return ks


def solve_bethe_roots(J, params, tol=1e-12, max_iter=500):
    """Solve the coupled transcendental system ``Z(k_j; {k_l}) = 2 pi J_j``.

    Runs the standard self-consistent iteration: starting from
    ``k_j = J_j`` (clipped into the momentum domain), each sweep re-solves
    every scalar level equation against the previous sweep's
    configuration, until the largest root movement drops below ``tol``.
    A joint Newton polish then pushes the residuals to machine precision.
    Roots are returned sorted ascending together with their labels,
    energy, sweep count and final residual.

    Raises ``ValidationError`` for bad quantum numbers,
    ``ConvergenceError`` when a level is unreachable or the iteration
    stalls (the exception carries the last iterate), and
    ``DegenerateSolutionError`` when roots collide with each other or
    with the boundary of (0, pi).
    """
    if tol <= 0:
        raise ValidationError(f"tol must be positive, got {tol}")
    if not isinstance(J, QuantumNumbers):
        J = QuantumNumbers(J)
    J = QuantumNumbers(sorted(J.values)).validate(params)
    m = params.num_down
    if m == 0:
        return BetheSolution(
            roots=(),
            quantum_numbers=J,
            energy=energy((), params),
            iterations=0,
            residual=0.0,
        )
    levels = [_TWO_PI * v for v in J.values]
    ks = [min(max(float(v), 0.02), math.pi - 0.02) for v in J.values]
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        grid, z_corr, corrections = _branch_correction_grid(ks, params)
        try:
            new = [
                _solve_level(level, grid, z_corr, corrections, ks, params)
                for level in levels
            ]
        except ConvergenceError as exc:
            raise ConvergenceError(
                str(exc), last_roots=ks, iterations=iterations
            ) from None
        movement = max(abs(a - b) for a, b in zip(new, ks))
        ks = new
        if movement < tol:
            converged = True
            break
    if not converged:
        raise ConvergenceError(
            f"root iteration did not converge within {max_iter} sweeps",
            last_roots=ks,
            iterations=max_iter,
        )
    ks = np.sort(_newton_polish(np.sort(ks), sorted(levels), params))
    if ks[0] < 1e-9 or ks[-1] > math.pi - 1e-9:
        raise DegenerateSolutionError(
            f"root at the boundary of (0, pi): {ks.tolist()}"
        )
    if m > 1 and np.min(np.diff(ks)) < tol:
        raise DegenerateSolutionError(f"roots collided: {ks.tolist()}")
    roots = tuple(float(x) for x in ks)
    zvals = counting_function(np.array(roots), roots, params)
    residual = float(np.max(np.abs(zvals - _TWO_PI * np.array(J.values, dtype=float))))
    return BetheSolution(
        roots=roots,
        quantum_numbers=J,
        energy=energy(roots, params),
        iterations=iterations,
        residual=residual,
    )


def energy(roots, params):
    """Eigenvalue of the chain for a set of solved momenta.

    ``E = -[(L-1) delta + h + h'] / 2 + 2 sum_j (delta - cos k_j)``;
    even in every ``k_j``, and the ``M = 0`` reference value for an
    empty root set.
    """
    roots = tuple(float(r) for r in roots)
    if len(roots) != params.num_down:
        raise ValidationError(
            f"expected {params.num_down} roots, got {len(roots)}"
        )
    base = -0.5 * ((params.length - 1) * params.delta + params.h + params.h_prime)
    return base + 2.0 * sum(params.delta - math.cos(k) for k in roots)


def recover_quantum_numbers(roots, params):
    """Integer labels ``J_j = Z(k_j; {k_l}) / (2 pi)`` of solved momenta.

    Utility for identifying which levels a known root set occupies; the
    rounded values are exact integers whenever the roots solve the
    system.
    """
    roots = tuple(float(r) for r in roots)
    z = counting_function(np.array(roots), roots, params)
    return QuantumNumbers(np.round(np.asarray(z) / _TWO_PI).astype(int))

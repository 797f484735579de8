"""Closed-form eigenstate amplitudes for the open chain.

The position-space wavefunction over down-spin configurations
``x_1 < ... < x_M`` is a sum over all signed arrangements of the solved
momenta,

    f(x) = sum_{P, e} sign(P) (prod_j e_j) A(e k_P) prod_j e^{i e_j k_{P_j} (x_j + 1)},

with a closed-form coefficient ``A`` for each arrangement.  Sites are
numbered from 0 in configurations but enter the plane-wave phases
shifted by one, i.e. the leftmost site carries phase ``e^{i k}``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import combinations, permutations, product

import numpy as np

from .bethe import BetheSolution, ModelParams
from .errors import NullStateError, ValidationError

__all__ = [
    "SignedRootSequence",
    "SpinConfiguration",
    "OracleState",
    "signed_arrangements",
    "amplitude_A",
    "wavefunction_f",
    "direct_bethe_state",
    "classical_success_probability",
]

#: amplitudes below this threshold count as zero when testing for a null state
_NULL_THRESHOLD = 1e-14


@dataclass(frozen=True)
class SignedRootSequence:
    """One arrangement ``(e_1 k_{P_1}, ..., e_M k_{P_M})`` of signed momenta."""

    values: tuple

    def __init__(self, values):
        object.__setattr__(self, "values", tuple(float(v) for v in values))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def negated(self, j):
        """Copy with the momentum in slot ``j`` sign-flipped."""
        vals = list(self.values)
        vals[j] = -vals[j]
        return SignedRootSequence(vals)

    def swapped(self, j):
        """Copy with slots ``j`` and ``j + 1`` exchanged."""
        vals = list(self.values)
        vals[j], vals[j + 1] = vals[j + 1], vals[j]
        return SignedRootSequence(vals)


@dataclass(frozen=True)
class SpinConfiguration:
    """Strictly increasing 0-based positions of the down spins."""

    sites: tuple

    def __init__(self, sites):
        vals = tuple(int(s) for s in sites)
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValidationError(
                f"sites must be strictly increasing, got {vals}"
            )
        if vals and vals[0] < 0:
            raise ValidationError(f"sites must be >= 0, got {vals}")
        object.__setattr__(self, "sites", vals)

    def __len__(self):
        return len(self.sites)

    def __iter__(self):
        return iter(self.sites)

    def bitmask(self):
        """Basis-state index with bit ``x`` set for each down spin at site x."""
        m = 0
        for x in self.sites:
            m |= 1 << x
        return m

    @staticmethod
    def from_bitmask(mask):
        return SpinConfiguration(
            [x for x in range(mask.bit_length()) if (mask >> x) & 1]
        )


@dataclass(frozen=True)
class OracleState:
    """Reference eigenstate as a configuration-amplitude map.

    ``amplitudes`` maps every weight-M ``SpinConfiguration`` with
    non-negligible weight to its (unnormalized) complex amplitude;
    ``norm`` is the 2-norm of that amplitude list.
    """

    amplitudes: dict
    norm: float

    def to_statevector(self, length):
        """Dense normalized state on ``length`` sites, little-endian bits."""
        psi = np.zeros(1 << length, dtype=complex)
        for conf, amp in self.amplitudes.items():
            psi[conf.bitmask()] = amp
        return psi / self.norm


# ---------------------------------------------------------------------------
# arrangement coefficients


def _beta(k, params):
    """Right-boundary factor ``[1 + (h' - d) e^{-ik}] e^{i(L+1)k}``."""
    return (1.0 + (params.h_prime - params.delta) * cmath.exp(-1j * k)) * cmath.exp(
        1j * (params.length + 1) * k
    )


def _pair_s(k, k_prime, delta):
    """Two-particle kernel ``1 - 2 d e^{ik'} + e^{i(k + k')}``."""
    return 1.0 - 2.0 * delta * cmath.exp(1j * k_prime) + cmath.exp(1j * (k + k_prime))


def _pair_v(k, k_prime, delta):
    """Symmetric pair factor ``e^{ik} + e^{ik'} - 2 d e^{i(k + k')}``."""
    return (
        cmath.exp(1j * k)
        + cmath.exp(1j * k_prime)
        - 2.0 * delta * cmath.exp(1j * (k + k_prime))
    )


def amplitude_A(signed_roots, params):
    """Coefficient of one signed arrangement in the eigenstate expansion.

    ``A(q) = prod_j beta(-q_j) e^{-i(M-1) q_j}
    prod_{j<l} s(q_l, q_j) v(q_j, q_l)`` with the factors above.  For a
    single momentum this reduces to ``beta(-k)``.  The ratios under a
    neighbor swap and under a sign flip are pure phases (a scattering
    phase, and a reflection phase with the extra two-momentum phases
    needed to move past later slots, respectively), which is what the
    state-preparation circuit imprints gate by gate.
    """
    if not isinstance(signed_roots, SignedRootSequence):
        signed_roots = SignedRootSequence(signed_roots)
    kk = signed_roots.values
    m = len(kk)
    out = 1.0 + 0.0j
    for k in kk:
        out *= _beta(-k, params) * cmath.exp(-1j * (m - 1) * k)
    for a in range(m):
        for b in range(a + 1, m):
            out *= _pair_s(kk[b], kk[a], params.delta) * _pair_v(
                kk[a], kk[b], params.delta
            )
    return out


def _permutation_sign(perm):
    inversions = sum(
        1
        for a in range(len(perm))
        for b in range(a + 1, len(perm))
        if perm[a] > perm[b]
    )
    return -1 if inversions % 2 else 1


def signed_arrangements(roots):
    """Yield ``(overall_sign, SignedRootSequence)`` for every arrangement.

    Arrangements run over all ``M!`` orderings of the roots and all
    ``2^M`` sign patterns; the overall sign is the permutation sign
    times ``(-1)^{number of negated momenta}``.
    """
    roots = tuple(float(r) for r in roots)
    m = len(roots)
    for perm in permutations(range(m)):
        psign = _permutation_sign(perm)
        for signs in product((1, -1), repeat=m):
            nneg = signs.count(-1)
            eps = psign * (-1 if nneg % 2 else 1)
            yield eps, SignedRootSequence(
                [signs[i] * roots[perm[i]] for i in range(m)]
            )


def _expansion_arrays(roots, params):
    """Stacked coefficients and momentum rows for the arrangement sum."""
    terms = list(signed_arrangements(roots))
    coefs = np.array([eps * amplitude_A(seq, params) for eps, seq in terms])
    karr = np.array([seq.values for _, seq in terms])
    return coefs, karr


def wavefunction_f(configuration, roots, params):
    """Unnormalized eigenstate amplitude of one down-spin configuration."""
    if not isinstance(configuration, SpinConfiguration):
        configuration = SpinConfiguration(configuration)
    if len(configuration) != len(tuple(roots)):
        raise ValidationError(
            f"configuration holds {len(configuration)} sites for "
            f"{len(tuple(roots))} momenta"
        )
    if len(configuration) and max(configuration.sites) >= params.length:
        raise ValidationError(
            f"site index out of range for L={params.length}: "
            f"{configuration.sites}"
        )
    coefs, karr = _expansion_arrays(roots, params)
    xv = np.asarray(configuration.sites, dtype=float) + 1.0
    if len(xv) == 0:
        return 1.0 + 0.0j
    return complex(np.sum(coefs * np.exp(1j * (karr @ xv))))


def direct_bethe_state(solution, params=None):
    """Reference eigenstate from the closed-form expansion.

    Accepts a ``BetheSolution`` (with ``params``) or a bare root tuple,
    evaluates ``f`` on every weight-M configuration and collects the
    non-negligible ones.  Raises ``NullStateError`` when every amplitude
    is below the null threshold (an inadmissible root set).
    """
    if isinstance(solution, BetheSolution):
        roots = solution.roots
    else:
        roots = tuple(float(r) for r in solution)
    if params is None:
        raise ValidationError("model parameters are required")
    m = len(roots)
    if m != params.num_down:
        raise ValidationError(
            f"solution has {m} momenta but params.num_down = {params.num_down}"
        )
    coefs, karr = _expansion_arrays(roots, params)
    amps = {}
    sq = 0.0
    for xs in combinations(range(params.length), m):
        if m:
            xv = np.asarray(xs, dtype=float) + 1.0
            f = complex(np.sum(coefs * np.exp(1j * (karr @ xv))))
        else:
            f = 1.0 + 0.0j
        if abs(f) > _NULL_THRESHOLD:
            amps[SpinConfiguration(xs)] = f
        sq += abs(f) ** 2
    if not amps:
        raise NullStateError(
            "every configuration amplitude vanished for roots "
            f"{tuple(roots)}"
        )
    return OracleState(amplitudes=amps, norm=math.sqrt(sq))


def classical_success_probability(solution, params=None):
    """Probability that the preparation circuit's measurement succeeds.

    Closed form: ``sum_x |f(x) / A(identity)|^2`` divided by
    ``(2^M M!)^2 binom(L, M)``.  Independent of the overall convention
    chosen for ``A`` because only arrangement ratios enter.
    """
    if isinstance(solution, BetheSolution):
        roots = solution.roots
    else:
        roots = tuple(float(r) for r in solution)
    if params is None:
        raise ValidationError("model parameters are required")
    m = len(roots)
    if m == 0:
        return 1.0
    a_id = amplitude_A(SignedRootSequence(roots), params)
    coefs, karr = _expansion_arrays(roots, params)
    total = 0.0
    for xs in combinations(range(params.length), m):
        xv = np.asarray(xs, dtype=float) + 1.0
        f = complex(np.sum(coefs * np.exp(1j * (karr @ xv))))
        total += abs(f / a_id) ** 2
    arrangements = (2**m) * math.factorial(m)
    return total / (arrangements**2 * math.comb(params.length, m))

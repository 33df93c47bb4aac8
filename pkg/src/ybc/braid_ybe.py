"""Braid-group gates with a phase parameter and their Yang-Baxterization.

The central object is the 4x4 matrix

    S(phi) = 1/sqrt(2) * [[0,          e^{i phi},   i e^{i phi},  0        ],
                          [e^{-i phi}, 0,           0,            e^{i phi}],
                          [-i e^{-i phi}, 0,        0,          i e^{i phi}],
                          [0,          e^{-i phi}, -i e^{-i phi}, 0        ]]

which is simultaneously unitary, Hermitian and involutive (S^2 = I) and
satisfies the braid relation.  Yang-Baxterizing it gives the one-parameter
unitary family

    R(theta, phi) = sin(theta) I + i cos(theta) S(phi)

equal to (I + i mu S)/sqrt(1 + mu^2) under cos(theta) = mu/sqrt(1 + mu^2).
R solves the Yang-Baxter equation with additive spectral parameters.

A second family comes from the eight-vertex ansatz: the braid matrix
b_(+/-)(q) below has eigenvalues 1 -/+ i, and b + 2x b^{-1} solves the
Yang-Baxter equation with multiplicative spectral parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .linalg import identity, kron, max_abs_diff

DEFAULT_TOL = 1e-10
UNIT_MODULUS_TOL = 1e-12


@dataclass(frozen=True)
class GateParams:
    """Angle pair (theta, phi) selecting one gate R(theta, phi)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError(f"angles must be finite: {self.theta}, {self.phi}")


@dataclass(frozen=True)
class SpectralParams:
    """Spectral and deformation parameters for the two YBE forms.

    mu, nu are additive spectral parameters; x, y multiplicative ones.
    The deformation q must sit on the unit circle for the unitary forms.
    """

    mu: float = 0.0
    nu: float = 0.0
    x: float = 1.0
    y: float = 1.0
    q: complex = 1.0 + 0.0j

    def __post_init__(self):
        for name in ("mu", "nu", "x", "y"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be a finite real, got {v!r}")
        if abs(abs(self.q) - 1.0) > UNIT_MODULUS_TOL:
            raise ValueError(f"|q| must be 1, got |q| = {abs(self.q)!r}")


class CheckResult(NamedTuple):
    residual: float
    passed: bool


def build_s(phi: float) -> np.ndarray:
    """The unitary, Hermitian, involutive braid matrix S(phi)."""
    ep = np.exp(1j * phi)
    em = np.exp(-1j * phi)
    return np.array(
        [
            [0, ep, 1j * ep, 0],
            [em, 0, 0, ep],
            [-1j * em, 0, 0, 1j * ep],
            [0, em, -1j * em, 0],
        ],
        dtype=complex,
    ) / np.sqrt(2.0)


def build_r_theta_phi(params: GateParams) -> np.ndarray:
    """R(theta, phi) = sin(theta) I + i cos(theta) S(phi); unitary for all angles."""
    return np.sin(params.theta) * identity(4) + 1j * np.cos(params.theta) * build_s(
        params.phi
    )


def yang_baxterize_rational(phi: float, mu: float) -> np.ndarray:
    """Rational YBE solution (I + i mu S(phi)) / sqrt(1 + mu^2).

    Equals R(theta, phi) under cos(theta) = mu/sqrt(1+mu^2),
    sin(theta) = 1/sqrt(1+mu^2); tends to i S(phi) as mu -> infinity.
    """
    if not math.isfinite(mu):
        raise ValueError(f"mu must be finite, got {mu!r}")
    return (identity(4) + 1j * mu * build_s(phi)) / math.sqrt(1.0 + mu * mu)


def _check_sign(sign: int) -> int:
    if sign not in (+1, -1):
        raise ValueError(f"braid sign must be +1 or -1, got {sign!r}")
    return int(sign)


def build_eight_vertex_b(sign: int, q: complex, normalized: bool = False) -> np.ndarray:
    """Eight-vertex braid matrix b_(+/-)(q).

    Unnormalized form [[1,0,0,q],[0,1,s,0],[0,-s,1,0],[-1/q,0,0,1]] with
    s = sign; its eigenvalues are 1-i and 1+i, each doubly degenerate.
    With ``normalized`` the matrix is scaled by 1/sqrt(2), which is unitary
    when |q| = 1 (so q = e^{-i phi} for real phi).
    """
    s = _check_sign(sign)
    q = complex(q)
    if q == 0:
        raise ValueError("deformation parameter q must be nonzero")
    b = np.array(
        [
            [1, 0, 0, q],
            [0, 1, s, 0],
            [0, -s, 1, 0],
            [-1.0 / q, 0, 0, 1],
        ],
        dtype=complex,
    )
    return b / np.sqrt(2.0) if normalized else b


def yang_baxterize_eight_vertex(
    sign: int, q: complex, x: float, normalized: bool = False
) -> np.ndarray:
    """Spectral-parameter family obtained from the eight-vertex braid matrix.

    Unnormalized entries:

        [[1+x, 0,        0,       q(1-x)],
         [0,   1+x,      s(1-x),  0     ],
         [0,   -s(1-x),  1+x,     0     ],
         [-(1-x)/q, 0,   0,       1+x   ]]

    equal to b + 2x b^{-1} (2 being the product of b's two eigenvalues), so
    x = 0 recovers b and x = 1 gives 2I.  The normalized variant is
    cos(t) B + sin(t) B^{-1} with B the 1/sqrt(2)-scaled b,
    cos(t) = 1/sqrt(1+x^2) and sin(t) = x/sqrt(1+x^2); it is unitary for
    every real x when |q| = 1.
    """
    s = _check_sign(sign)
    q = complex(q)
    if q == 0:
        raise ValueError("deformation parameter q must be nonzero")
    if not math.isfinite(x):
        raise ValueError(f"spectral parameter x must be finite, got {x!r}")
    if normalized:
        hyp = math.sqrt(1.0 + x * x)
        b = build_eight_vertex_b(s, q, normalized=True)
        return (b + x * np.linalg.inv(b)) / hyp
    return np.array(
        [
            [1 + x, 0, 0, q * (1 - x)],
            [0, 1 + x, s * (1 - x), 0],
            [0, -s * (1 - x), 1 + x, 0],
            [-(1 - x) / q, 0, 0, 1 + x],
        ],
        dtype=complex,
    )


def _embed_two_site(b: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Embed a two-site 4x4 operator at (site, site+1) in an n-qubit register."""
    if b.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-site operator, got {b.shape}")
    if site < 0 or site + 1 >= n_sites:
        raise ValueError(f"site {site} does not fit in {n_sites} qubits")
    op = identity(2**site)
    op = kron(op, b)
    return kron(op, identity(2 ** (n_sites - site - 2)))


def check_braid_relation(b: np.ndarray, tol: float = DEFAULT_TOL) -> CheckResult:
    """Residual of b1 b2 b1 = b2 b1 b2 for the three-qubit embeddings of b."""
    b = np.asarray(b, dtype=complex)
    b1 = _embed_two_site(b, 0, 3)
    b2 = _embed_two_site(b, 1, 3)
    residual = max_abs_diff(b1 @ b2 @ b1, b2 @ b1 @ b2)
    return CheckResult(residual, residual <= tol)


def check_far_commutation(b: np.ndarray, tol: float = DEFAULT_TOL) -> CheckResult:
    """Residual of b1 b3 = b3 b1 on four qubits (|i - j| >= 2 generators)."""
    b = np.asarray(b, dtype=complex)
    b1 = _embed_two_site(b, 0, 4)
    b3 = _embed_two_site(b, 2, 4)
    residual = max_abs_diff(b1 @ b3, b3 @ b1)
    return CheckResult(residual, residual <= tol)


def check_ybe_additive(
    phi: float, mu: float, nu: float, tol: float = DEFAULT_TOL
) -> CheckResult:
    """Residual of R1(mu) R2(mu+nu) R1(nu) = R2(nu) R1(mu+nu) R2(mu).

    R is the rational family at the given phi; R1 = R (x) I, R2 = I (x) R.
    """
    i2 = identity(2)

    def r1(m):
        return kron(yang_baxterize_rational(phi, m), i2)

    def r2(m):
        return kron(i2, yang_baxterize_rational(phi, m))

    lhs = r1(mu) @ r2(mu + nu) @ r1(nu)
    rhs = r2(nu) @ r1(mu + nu) @ r2(mu)
    residual = max_abs_diff(lhs, rhs)
    return CheckResult(residual, residual <= tol)


def check_ybe_multiplicative(
    builder: Callable[[float], np.ndarray],
    x: float,
    y: float,
    tol: float = DEFAULT_TOL,
) -> CheckResult:
    """Residual of R1(x) R2(xy) R1(y) = R2(y) R1(xy) R2(x) for a gate family.

    ``builder`` maps a spectral parameter to a 4x4 matrix, e.g.
    ``lambda t: yang_baxterize_eight_vertex(+1, q, t)``.
    """
    i2 = identity(2)

    def r1(t):
        return kron(builder(t), i2)

    def r2(t):
        return kron(i2, builder(t))

    lhs = r1(x) @ r2(x * y) @ r1(y)
    rhs = r2(y) @ r1(x * y) @ r2(x)
    residual = max_abs_diff(lhs, rhs)
    return CheckResult(residual, residual <= tol)


def evolution_hamiltonian(
    params: GateParams,
    gamma: float = 1.0,
    hbar: float = 1.0,
    step: float = 1e-4,
) -> np.ndarray:
    """Generator H = i hbar (dR/dt) R^dagger of the evolution R(gamma t, phi).

    The time derivative is taken by central finite difference with the given
    step, so the result is Hermitian up to O(step^2) plus roundoff.  The
    analytic value is gamma * hbar * S(phi), which tests use as reference.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step!r}")
    r_plus = build_r_theta_phi(GateParams(params.theta + gamma * step, params.phi))
    r_minus = build_r_theta_phi(GateParams(params.theta - gamma * step, params.phi))
    derivative = (r_plus - r_minus) / (2.0 * step)
    r = build_r_theta_phi(params)
    return 1j * hbar * derivative @ r.conj().T

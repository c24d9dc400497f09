"""Teleportation fidelity of a coherent state sent through the shared ladder.

Using the shared state |psi> = sum_n d_n |n, n> as the resource of a
unit-gain continuous-variable teleporter, the output fidelity for coherent
input is

    F = 1/2 sum_{m,n} C(m+n, n) / 2^(m+n) * d_m conj(d_n).

The sum is sign- and phase-sensitive, which is why ladder states elsewhere
in the package keep signed/complex coefficients instead of magnitudes.
Binomials are evaluated in log space (no overflow at any cutoff) and the
accumulation order is fixed (diagonals s = m+n ascending, n ascending
inside a diagonal), so results are reproducible bit for bit.

For the TMSV resource the sum telescopes to F = (1 + lambda)/2, and for the
sine-filtered ladder of the atom-cavity scheme it has the closed form
implemented by `cavity_teleport_fidelity_analytic`; both serve as oracles
for the generic double sum in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .cavity import CavityParams, cavity_success_prob_analytic
from .errors import ZeroProbabilityError
from .fock import SchmidtState

__all__ = [
    "FidelityResult",
    "teleport_fidelity",
    "cavity_teleport_fidelity_analytic",
]


@dataclass(frozen=True)
class FidelityResult:
    """Value of the double sum plus numerical diagnostics.

    imag_residual is the leftover imaginary part (exactly zero in real
    arithmetic by Hermitian symmetry; reported instead of silently dropped).
    terms_used counts the (m, n) pairs in the truncated sum.
    """

    fidelity: float
    imag_residual: float
    terms_used: int

    def to_json_dict(self) -> dict:
        return {
            "fidelity": self.fidelity,
            "imag_residual": self.imag_residual,
            "terms_used": self.terms_used,
        }


def teleport_fidelity(state: SchmidtState) -> FidelityResult:
    """Evaluate the double sum on the state's truncated ladder."""
    total = _kernels.teleport_sum(state.coeffs)
    size = state.coeffs.size
    return FidelityResult(
        fidelity=0.5 * total.real,
        imag_residual=abs(0.5 * total.imag),
        terms_used=size * size,
    )


def cavity_teleport_fidelity_analytic(lam: float, phi: float, phi0: float) -> float:
    """Closed-form fidelity for the sine-filtered ladder.

    F = (1-lam^2)/(4P) [ 1/(1 - lam cos(phi/2))
                         - (cos phi0 - lam cos(phi/2 + phi0))
                           / (1 - 2 lam cos(phi/2) + lam^2) ]

    with P the closed-form success probability.  Angles are reduced the same
    way CavityParams reduces them, so this agrees with the double sum over
    the signed ladder produced by `cavity_schmidt`.
    """
    params = CavityParams(lam, phi, phi0)
    lam, phi, phi0 = params.lam, params.phi, params.phi0
    prob = cavity_success_prob_analytic(params)
    if prob < 1e-300:
        raise ZeroProbabilityError("success probability vanishes; fidelity undefined")
    half = phi / 2.0
    first = 1.0 / (1.0 - lam * math.cos(half))
    second = (math.cos(phi0) - lam * math.cos(half + phi0)) / (
        1.0 - 2.0 * lam * math.cos(half) + lam * lam
    )
    return (1.0 - lam * lam) / (4.0 * prob) * (first - second)

"""Atomic-optical trap design: gradient-index photon confinement matched to
a magnetic atom trap.

A transverse index profile n^2(r) = n0^2 (1 - n' r^2) focuses the photon
component with the dimensionless potential U_opt(r) = n' r^2 / 2.  Mapping
that onto the harmonic trap U(r) = m_eff Omega_eff^2 r^2 / 2 requires an
explicit energy scale E_char (the bare relation n' = m_eff Omega_eff^2 is
dimensionally short by one energy): here

    n' = m_eff Omega_eff^2 / E_char,

with E_char defaulting to the transition energy, since the trapped object
is the paraxial photon of energy ~E0.  That assumption is printed into
every trap design.  The magnetic-trap frequency Omega_at for the atomic
component is carried as user input and echoed, never derived; no
constraint equation ties it to Omega_eff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .thermo import TRAP_BEC_ZETA
from .units import (
    CURVATURE,
    ENERGY,
    FREQUENCY,
    HBAR_CGS,
    KB_CGS,
    LENGTH,
    MASS,
    Quantity,
    TEMPERATURE,
    magnitude_in_cgs,
)

__all__ = [
    "LensProfile",
    "TrapDesign",
    "lens_for_omega",
    "omega_for_lens",
    "design_trap",
    "ENERGY_SCALE_NOTE",
]

ENERGY_SCALE_NOTE = (
    "optical potential normalization: n' = m_eff * omega_eff^2 / E_char, "
    "E_char defaulting to the transition energy of the trapped photon"
)

# keep the harmonic approximation honest: half the index-zero-crossing radius
_DEFAULT_R_MAX_FRAC = 0.5


@dataclass(frozen=True)
class LensProfile:
    """Gradient-index profile n^2(r) = n0^2 (1 - n' r^2), valid for r <= r_max."""

    n0: float
    n_prime: Quantity    # cm^-2
    r_max: Quantity      # cm

    def __post_init__(self) -> None:
        if not self.n0 > 0:
            raise ValueError(f"n0 must be positive, got {self.n0}")
        n_prime = magnitude_in_cgs(self.n_prime, CURVATURE, "n_prime")
        if n_prime < 0:
            raise ValueError(f"n_prime must be non-negative, got {n_prime}")
        r_max = magnitude_in_cgs(self.r_max, LENGTH, "r_max")
        if n_prime > 0 and r_max * r_max * n_prime >= 1.0:
            raise ValueError(
                "r_max reaches the index zero crossing: need r_max < 1/sqrt(n')"
            )

    def index_squared(self, r: Quantity) -> float:
        """n^2(r) at transverse radius r."""
        r_cm = magnitude_in_cgs(r, LENGTH, "r")
        return self.n0**2 * (1.0 - self.n_prime.cgs * r_cm * r_cm)

    def optical_potential(self, r: Quantity) -> float:
        """Dimensionless U_opt(r) = (n0^2 - n^2(r)) / (2 n0^2) = n' r^2 / 2."""
        r_cm = magnitude_in_cgs(r, LENGTH, "r")
        return 0.5 * self.n_prime.cgs * r_cm * r_cm


@dataclass(frozen=True)
class TrapDesign:
    """A lens profile with the trap frequencies and energy scale that produced it."""

    lens: LensProfile
    omega_eff: Quantity
    energy_scale: Quantity            # E_char
    omega_at: Quantity | None = None  # magnetic trap frequency (echoed input)
    assumption_note: str = ENERGY_SCALE_NOTE
    beam_fits_profile: bool | None = None  # 2*r_max >= beam diameter, when given

    def __post_init__(self) -> None:
        if not magnitude_in_cgs(self.omega_eff, FREQUENCY, "omega_eff") > 0:
            raise ValueError("omega_eff must be positive")


def lens_for_omega(
    omega_eff: Quantity,
    m_eff: Quantity,
    energy_scale: Quantity,
    n0: float,
    r_max_frac: float = _DEFAULT_R_MAX_FRAC,
) -> LensProfile:
    """Gradient parameter realising a trap frequency: n' = m_eff Omega^2 / E_char.

    Omega_eff = 0 gives the flat (untrapped) profile.  r_max defaults to
    half the profile's zero-crossing radius 1/sqrt(n').
    """
    omega = magnitude_in_cgs(omega_eff, FREQUENCY, "omega_eff")
    m = magnitude_in_cgs(m_eff, MASS, "m_eff")
    e_char = magnitude_in_cgs(energy_scale, ENERGY, "energy_scale")
    if omega < 0 or not m > 0 or not e_char > 0:
        raise ValueError("omega_eff must be >= 0; m_eff and energy_scale positive")
    n_prime = m * omega * omega / e_char
    r_max = math.inf if n_prime == 0.0 else r_max_frac / math.sqrt(n_prime)
    return LensProfile(
        n0=n0,
        n_prime=Quantity(n_prime, CURVATURE),
        r_max=Quantity(r_max, LENGTH),
    )


def omega_for_lens(lens: LensProfile, m_eff: Quantity, energy_scale: Quantity) -> Quantity:
    """Exact inverse of lens_for_omega: Omega_eff = sqrt(n' E_char / m_eff)."""
    m = magnitude_in_cgs(m_eff, MASS, "m_eff")
    e_char = magnitude_in_cgs(energy_scale, ENERGY, "energy_scale")
    if not m > 0 or not e_char > 0:
        raise ValueError("m_eff and energy_scale must be positive")
    return Quantity(math.sqrt(lens.n_prime.cgs * e_char / m), FREQUENCY)


def design_trap(
    target_tc: Quantity,
    n_particles: float,
    m_eff: Quantity,
    energy_scale: Quantity,
    omega_at: Quantity | None = None,
    n0: float = 1.0,
    beam_diameter: Quantity | None = None,
) -> TrapDesign:
    """Trap design hitting a target condensation temperature for N particles.

    Inverts the particle-number form of the critical temperature,
    Omega_eff = kB T_c sqrt(1.645 / N) / hbar, then builds the index
    profile for that frequency.  When a beam diameter is given, the design
    records whether the harmonic region 2*r_max covers the beam.
    """
    t_c = magnitude_in_cgs(target_tc, TEMPERATURE, "target_tc")
    if not t_c > 0:
        raise ValueError(f"target_tc must be positive, got {t_c}")
    if not n_particles > 0:
        raise ValueError(f"n_particles must be positive, got {n_particles}")
    omega = KB_CGS * t_c * math.sqrt(TRAP_BEC_ZETA / n_particles) / HBAR_CGS
    omega_eff = Quantity(omega, FREQUENCY)
    lens = lens_for_omega(omega_eff, m_eff, energy_scale, n0)
    fits = None
    if beam_diameter is not None:
        d = magnitude_in_cgs(beam_diameter, LENGTH, "beam_diameter")
        fits = 2.0 * lens.r_max.cgs >= d
    return TrapDesign(
        lens=lens,
        omega_eff=omega_eff,
        energy_scale=energy_scale,
        omega_at=omega_at,
        beam_fits_profile=fits,
    )

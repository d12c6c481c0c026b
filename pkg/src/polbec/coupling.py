"""Strong-coupling regime test and field-matter coupling parameters.

The cooperative frequency omega_c = sqrt(2 pi d^2 omega0 n / hbar) is
evaluated in Gaussian units (dipole moment in esu*cm); the 2*pi prefactor
form of that expression is only dimensionally consistent in the Gaussian
convention, so SI inputs are converted at the Quantity layer before the
formula is touched.

The coupling energy g between field and a single atom is a direct user
input; no microscopic formula tying it to (d, n, omega0) is adopted here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .units import (
    C_CGS,
    DIPOLE_MOMENT,
    ENERGY,
    FREQUENCY,
    HBAR_CGS,
    LENGTH,
    Quantity,
    TIME,
    VOLUME_DENSITY,
    WAVENUMBER,
    magnitude_in_cgs,
)

__all__ = [
    "MediumParams",
    "CavityParams",
    "CouplingParams",
    "CouplingRegime",
    "StrongCouplingCheck",
    "cooperative_frequency",
    "is_strong_coupling",
    "coupling_from_geometry",
    "make_coupling",
    "resonant_cavity_length",
    "resonant_coupling",
    "DEFAULT_STRONG_THRESHOLD",
]

# "much greater" margin for the strong-coupling inequality; not quantified
# by the model, so it is a configuration knob.
DEFAULT_STRONG_THRESHOLD = 10.0


def _require_positive(value: float, name: str) -> None:
    if not value > 0:
        raise ValueError(f"{name} must be strictly positive, got {value}")


@dataclass(frozen=True)
class MediumParams:
    """Two-level atomic medium: transition energy E0, Gaussian dipole moment,
    3D number density, and coherence time."""

    transition_energy: Quantity   # E0, energy
    dipole_moment: Quantity       # d, esu*cm
    density: Quantity             # n3, cm^-3
    coherence_time: Quantity      # tau_coh, s

    def __post_init__(self) -> None:
        _require_positive(magnitude_in_cgs(self.transition_energy, ENERGY, "transition_energy"), "transition_energy")
        _require_positive(magnitude_in_cgs(self.dipole_moment, DIPOLE_MOMENT, "dipole_moment"), "dipole_moment")
        _require_positive(magnitude_in_cgs(self.density, VOLUME_DENSITY, "density"), "density")
        _require_positive(magnitude_in_cgs(self.coherence_time, TIME, "coherence_time"), "coherence_time")

    @property
    def transition_frequency(self) -> Quantity:
        """omega0 = E0 / hbar."""
        return Quantity(self.transition_energy.cgs / HBAR_CGS, FREQUENCY)


@dataclass(frozen=True)
class CavityParams:
    """Resonator geometry: effective length, longitudinal mode index, beam diameter."""

    length: Quantity           # L_cav
    mode_index: int            # m >= 1
    beam_diameter: Quantity    # d_beam

    def __post_init__(self) -> None:
        _require_positive(magnitude_in_cgs(self.length, LENGTH, "length"), "length")
        _require_positive(magnitude_in_cgs(self.beam_diameter, LENGTH, "beam_diameter"), "beam_diameter")
        if not (isinstance(self.mode_index, int) and self.mode_index >= 1):
            raise ValueError(f"mode_index must be an integer >= 1, got {self.mode_index!r}")


@dataclass(frozen=True)
class CouplingParams:
    """Coupling energy g, quantised axial wavenumber k_perp, and detuning
    Delta = E0 - hbar*c*k_perp of the selected mode from the transition."""

    g: Quantity          # energy, > 0
    k_perp: Quantity     # cm^-1
    delta: Quantity      # energy, signed

    def __post_init__(self) -> None:
        _require_positive(magnitude_in_cgs(self.g, ENERGY, "g"), "g")
        _require_positive(magnitude_in_cgs(self.k_perp, WAVENUMBER, "k_perp"), "k_perp")
        magnitude_in_cgs(self.delta, ENERGY, "delta")


class CouplingRegime(enum.Enum):
    STRONG = "strong"
    WEAK = "weak"


@dataclass(frozen=True)
class StrongCouplingCheck:
    """Outcome of the strong-coupling inequality omega_c >> 1/(2 tau_coh)."""

    omega_c: Quantity            # cooperative frequency
    decoherence_rate: Quantity   # 1/(2 tau_coh)
    ratio: float                 # omega_c * 2 tau_coh
    threshold: float
    regime: CouplingRegime


def cooperative_frequency(medium: MediumParams) -> Quantity:
    """Cooperative frequency omega_c = sqrt(2 pi d^2 omega0 n / hbar).

    Scales as sqrt(n) and linearly in d.
    """
    d = medium.dipole_moment.cgs
    omega0 = medium.transition_frequency.cgs
    n = medium.density.cgs
    omega_c = math.sqrt(2.0 * math.pi * d * d * omega0 * n / HBAR_CGS)
    return Quantity(omega_c, FREQUENCY)


def is_strong_coupling(
    medium: MediumParams, threshold: float = DEFAULT_STRONG_THRESHOLD
) -> StrongCouplingCheck:
    """Classify the coupling regime.

    ratio = omega_c * 2 tau_coh; strong iff ratio > threshold.
    """
    omega_c = cooperative_frequency(medium)
    tau = medium.coherence_time.cgs
    rate = Quantity(0.5 / tau, FREQUENCY)
    ratio = omega_c.cgs * 2.0 * tau
    regime = CouplingRegime.STRONG if ratio > threshold else CouplingRegime.WEAK
    return StrongCouplingCheck(omega_c, rate, ratio, threshold, regime)


def coupling_from_geometry(
    transition_energy: Quantity, length: Quantity, mode_index: int, g: Quantity
) -> CouplingParams:
    """CouplingParams from the bare resonator geometry.

    k_perp = pi*m/L_cav, Delta = E0 - hbar*c*k_perp.
    """
    e0 = magnitude_in_cgs(transition_energy, ENERGY, "transition_energy")
    l_cav = magnitude_in_cgs(length, LENGTH, "length")
    if not (isinstance(mode_index, int) and mode_index >= 1):
        raise ValueError(f"mode_index must be an integer >= 1, got {mode_index!r}")
    k_perp = math.pi * mode_index / l_cav
    delta = e0 - HBAR_CGS * C_CGS * k_perp
    return CouplingParams(
        g=g,
        k_perp=Quantity(k_perp, WAVENUMBER),
        delta=Quantity(delta, ENERGY),
    )


def make_coupling(medium: MediumParams, cavity: CavityParams, g: Quantity) -> CouplingParams:
    """Coupling parameters for a given medium/cavity pair."""
    return coupling_from_geometry(
        medium.transition_energy, cavity.length, cavity.mode_index, g
    )


def resonant_cavity_length(medium: MediumParams, mode_index: int) -> Quantity:
    """Cavity length L = pi*m*hbar*c/E0 putting the selected mode on resonance
    (Delta = 0); equals half the transition wavelength times the mode index."""
    if mode_index < 1:
        raise ValueError(f"mode_index must be >= 1, got {mode_index}")
    e0 = medium.transition_energy.cgs
    return Quantity(math.pi * mode_index * HBAR_CGS * C_CGS / e0, LENGTH)


def resonant_coupling(transition_energy: Quantity, g: Quantity, detuning: Quantity | None = None) -> CouplingParams:
    """CouplingParams with an explicitly prescribed detuning.

    The detuning is stored exactly as given (Delta = 0 stays exactly zero)
    and k_perp = (E0 - Delta)/(hbar c) is derived, i.e. the resonator is
    assumed tuned to realise the requested Delta.
    """
    e0 = magnitude_in_cgs(transition_energy, ENERGY, "transition_energy")
    delta = 0.0 if detuning is None else magnitude_in_cgs(detuning, ENERGY, "detuning")
    e_mode = e0 - delta
    if e_mode <= 0:
        raise ValueError("detuning leaves no positive mode energy")
    return CouplingParams(
        g=g,
        k_perp=Quantity(e_mode / (HBAR_CGS * C_CGS), WAVENUMBER),
        delta=Quantity(delta, ENERGY),
    )

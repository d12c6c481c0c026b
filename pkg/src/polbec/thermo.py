"""Transverse polariton-gas thermodynamics.

Effective masses of both branches, the quadratic transverse dispersion and
its group velocity, and the 2D Bose-gas threshold ladder: thermal
wavelength, degeneracy temperature, chemical potential, the
Kosterlitz-Thouless temperature, and the trapped-gas condensation
temperature with its condensate fraction.

Conventions fixed here (and echoed as notes in every report):

* lambda_T = h / sqrt(2 pi m kB T).  This is the only prefactor consistent
  with both the 1.84e-4 cm reference value at (5e-33 g, 300 K) and the
  identity n2 * lambda_T(T_d)^2 = 1 required by the chemical-potential
  closed form.
* mu = kB T ln(1 - exp(-T_d/T)) with T_d/T = n2 lambda_T^2, evaluated with
  cancellation-safe primitives at both temperature extremes.
* The trapped-gas ladder uses the printed constant 1.645 (zeta(2) to four
  figures) consistently in both the particle-number and the density form,
  so the two forms invert each other exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .coupling import CouplingParams
from .units import (
    AREA_DENSITY,
    C_CGS,
    ENERGY,
    FREQUENCY,
    H_CGS,
    HBAR_CGS,
    KB_CGS,
    LENGTH,
    MASS,
    Quantity,
    TEMPERATURE,
    VELOCITY,
    VOLUME_DENSITY,
    WAVENUMBER,
    magnitude_in_cgs,
)

__all__ = [
    "PolaritonMasses",
    "GasState",
    "TrapSpec",
    "CondensationReport",
    "TRAP_BEC_ZETA",
    "effective_masses",
    "transverse_energy",
    "group_velocity",
    "thermal_wavelength",
    "degeneracy_temperature",
    "chemical_potential",
    "kt_temperature",
    "trapped_bec_temperature",
    "trapped_bec_temperature_from_N",
    "trapped_number",
    "condensate_fraction",
    "condensation_report",
    "lambda_T_cm",
    "degeneracy_temperature_K",
    "mu_over_kbt",
]

# zeta(2) = pi^2/6 to the four printed figures; used identically in both
# forms of the trapped-gas critical temperature so they invert exactly.
TRAP_BEC_ZETA = 1.645

# denominators 1 -/+ Delta/sqrt(Delta^2+4g^2) below this are reported as
# saturated rather than letting the branch mass blow up to inf
_MASS_SATURATION_EPS = 1e-12

_LOG2 = math.log(2.0)

# |mu| below ~1e-13 kB T (T_d/T > 30): flagged as effectively zero
_MU_ZERO_X = 30.0


@dataclass(frozen=True)
class PolaritonMasses:
    """Curvature masses of the transverse dispersion for both branches."""

    m_ph: Quantity       # effective photon mass hbar k_perp / c
    m_upper: Quantity
    m_lower: Quantity
    detuning: Quantity
    upper_saturated: bool = False
    lower_saturated: bool = False


@dataclass(frozen=True)
class GasState:
    """2D gas snapshot: temperature, effective mass, and at least one of
    the areal density n2 or the source 3D density n3."""

    temperature: Quantity
    m_eff: Quantity
    n2: Quantity | None = None
    n3: Quantity | None = None

    def __post_init__(self) -> None:
        if not magnitude_in_cgs(self.temperature, TEMPERATURE, "temperature") > 0:
            raise ValueError("temperature must be positive")
        if not magnitude_in_cgs(self.m_eff, MASS, "m_eff") > 0:
            raise ValueError("m_eff must be positive")
        if self.n2 is None and self.n3 is None:
            raise ValueError("GasState needs n2 or n3")
        if self.n2 is not None and not magnitude_in_cgs(self.n2, AREA_DENSITY, "n2") > 0:
            raise ValueError("n2 must be positive")
        if self.n3 is not None and not magnitude_in_cgs(self.n3, VOLUME_DENSITY, "n3") > 0:
            raise ValueError("n3 must be positive")


@dataclass(frozen=True)
class TrapSpec:
    """Harmonic trap U(r) = m_eff Omega_eff^2 r^2 / 2.

    U0 and r0 are an optional redundant parametrization U(r0) = U0; their
    consistency with omega_eff is checked where the mass is known.
    """

    omega_eff: Quantity
    u0: Quantity | None = None
    r0: Quantity | None = None

    def __post_init__(self) -> None:
        if magnitude_in_cgs(self.omega_eff, FREQUENCY, "omega_eff") < 0:
            raise ValueError("omega_eff must be non-negative")
        if self.u0 is not None:
            magnitude_in_cgs(self.u0, ENERGY, "u0")
        if self.r0 is not None:
            magnitude_in_cgs(self.r0, LENGTH, "r0")

    def check_consistency(self, m_eff: Quantity, rel_tol: float = 1e-6) -> None:
        """Verify U(r0) = U0 against m_eff Omega^2 r0^2 / 2 when both given."""
        if self.u0 is None or self.r0 is None:
            return
        expected = 0.5 * m_eff.cgs * self.omega_eff.cgs**2 * self.r0.cgs**2
        u0 = self.u0.cgs
        if abs(u0 - expected) > rel_tol * max(abs(u0), abs(expected)):
            raise ValueError(
                f"inconsistent trap: U0 = {u0:.6g} erg but "
                f"m_eff*Omega_eff^2*r0^2/2 = {expected:.6g} erg"
            )


@dataclass(frozen=True)
class CondensationReport:
    """The full condensation-threshold ladder for one parameter set."""

    temperature: Quantity
    m_eff: Quantity
    n2: Quantity
    lambda_t: Quantity
    r_int: Quantity
    t_degeneracy: Quantity
    t_kt: Quantity
    mu: Quantity
    n3: Quantity | None = None
    omega_eff: Quantity | None = None
    t_c: Quantity | None = None
    n_trapped: float | None = None
    condensate_frac: float | None = None
    degenerate: bool = False
    kt_superfluid: bool = False
    overlap: bool = False
    n2_estimated: bool = False
    mu_effectively_zero: bool = False
    notes: tuple[str, ...] = field(default=())


# ---------------------------------------------------------------------------
# numeric cores (cgs floats)
# ---------------------------------------------------------------------------

def lambda_T_cm(m_g: float, t_k: float) -> float:
    """Thermal de Broglie wavelength h / sqrt(2 pi m kB T) in cm."""
    return H_CGS / math.sqrt(2.0 * math.pi * m_g * KB_CGS * t_k)


def degeneracy_temperature_K(n2_cm2: float, m_g: float) -> float:
    """T_d = 2 pi hbar^2 n2 / (m kB); satisfies n2 lambda_T(T_d)^2 = 1."""
    return 2.0 * math.pi * HBAR_CGS**2 * n2_cm2 / (m_g * KB_CGS)


def mu_over_kbt(x: float) -> float:
    """ln(1 - exp(-x)) for x = T_d/T > 0 without catastrophic cancellation."""
    if x > _LOG2:
        return math.log1p(-math.exp(-x))
    return math.log(-math.expm1(-x))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def effective_masses(coupling: CouplingParams) -> PolaritonMasses:
    """Branch masses m_{1,2} = 2 m_ph / (1 -/+ Delta / sqrt(Delta^2 + 4 g^2)).

    The upper branch takes '-', the lower '+'.  At Delta = 0 both equal
    2 m_ph.  When a denominator falls below 1e-12 (|Delta| >> g with the
    diverging sign) the mass is clamped there and flagged as saturated
    instead of returning infinity.
    """
    delta = coupling.delta.cgs
    g = coupling.g.cgs
    m_ph = HBAR_CGS * coupling.k_perp.cgs / C_CGS
    ratio = delta / math.hypot(delta, 2.0 * g)
    den_upper = 1.0 - ratio
    den_lower = 1.0 + ratio
    upper_saturated = den_upper < _MASS_SATURATION_EPS
    lower_saturated = den_lower < _MASS_SATURATION_EPS
    if upper_saturated:
        den_upper = _MASS_SATURATION_EPS
    if lower_saturated:
        den_lower = _MASS_SATURATION_EPS
    return PolaritonMasses(
        m_ph=Quantity(m_ph, MASS),
        m_upper=Quantity(2.0 * m_ph / den_upper, MASS),
        m_lower=Quantity(2.0 * m_ph / den_lower, MASS),
        detuning=coupling.delta,
        upper_saturated=upper_saturated,
        lower_saturated=lower_saturated,
    )


def transverse_energy(k_par: Quantity, m: Quantity) -> Quantity:
    """Quadratic transverse dispersion hbar^2 k_par^2 / (2 m)."""
    k = magnitude_in_cgs(k_par, WAVENUMBER, "k_par")
    m_g = magnitude_in_cgs(m, MASS, "m")
    if not m_g > 0:
        raise ValueError("mass must be positive")
    return Quantity(HBAR_CGS * HBAR_CGS * k * k / (2.0 * m_g), ENERGY)


def group_velocity(k_par: Quantity, m: Quantity) -> Quantity:
    """v = d E_tr / d(hbar k) = hbar k / m; equals k c / (2 k_perp) at Delta = 0."""
    k = magnitude_in_cgs(k_par, WAVENUMBER, "k_par")
    m_g = magnitude_in_cgs(m, MASS, "m")
    if not m_g > 0:
        raise ValueError("mass must be positive")
    return Quantity(HBAR_CGS * k / m_g, VELOCITY)


def thermal_wavelength(m: Quantity, temperature: Quantity) -> Quantity:
    """Thermal de Broglie wavelength lambda_T = h / sqrt(2 pi m kB T)."""
    m_g = magnitude_in_cgs(m, MASS, "m")
    t_k = magnitude_in_cgs(temperature, TEMPERATURE, "temperature")
    if not (m_g > 0 and t_k > 0):
        raise ValueError("mass and temperature must be positive")
    return Quantity(lambda_T_cm(m_g, t_k), LENGTH)


def degeneracy_temperature(n2: Quantity, m: Quantity) -> Quantity:
    """Degeneracy temperature T_d = 2 pi hbar^2 n2 / (m kB)."""
    n = magnitude_in_cgs(n2, AREA_DENSITY, "n2")
    m_g = magnitude_in_cgs(m, MASS, "m")
    if not (n > 0 and m_g > 0):
        raise ValueError("n2 and mass must be positive")
    return Quantity(degeneracy_temperature_K(n, m_g), TEMPERATURE)


def chemical_potential(state: GasState) -> Quantity:
    """mu = kB T ln(1 - exp(-T_d/T)), always negative, -> 0- as T -> 0."""
    n2 = state.n2
    if n2 is None:
        n2 = thermal_wavelength(state.m_eff, state.temperature) * state.n3
    t_k = state.temperature.cgs
    x = degeneracy_temperature_K(n2.cgs, state.m_eff.cgs) / t_k
    return Quantity(KB_CGS * t_k * mu_over_kbt(x), ENERGY)


def kt_temperature(n_s: Quantity, m: Quantity) -> Quantity:
    """Kosterlitz-Thouless temperature pi hbar^2 n_s / (2 m kB) = T_d/4 at n_s = n2."""
    n = magnitude_in_cgs(n_s, AREA_DENSITY, "n_s")
    m_g = magnitude_in_cgs(m, MASS, "m")
    if not (n > 0 and m_g > 0):
        raise ValueError("n_s and mass must be positive")
    return Quantity(math.pi * HBAR_CGS**2 * n / (2.0 * m_g * KB_CGS), TEMPERATURE)


def trapped_bec_temperature(n2: Quantity, m: Quantity) -> Quantity:
    """Trapped-gas condensation temperature, density form:
    T_c = 2 pi hbar^2 n2 / (1.645 m kB) with n2 the peak areal density."""
    n = magnitude_in_cgs(n2, AREA_DENSITY, "n2")
    m_g = magnitude_in_cgs(m, MASS, "m")
    if not (n > 0 and m_g > 0):
        raise ValueError("n2 and mass must be positive")
    return Quantity(degeneracy_temperature_K(n, m_g) / TRAP_BEC_ZETA, TEMPERATURE)


def trapped_bec_temperature_from_N(n_particles: float, omega_eff: Quantity) -> Quantity:
    """Trapped-gas condensation temperature, particle-number form:
    T_c = (hbar Omega_eff / kB) sqrt(N / 1.645); zero without a trap."""
    if not n_particles > 0:
        raise ValueError("particle number must be positive")
    omega = magnitude_in_cgs(omega_eff, FREQUENCY, "omega_eff")
    if omega < 0:
        raise ValueError("omega_eff must be non-negative")
    return Quantity(
        HBAR_CGS * omega / KB_CGS * math.sqrt(n_particles / TRAP_BEC_ZETA), TEMPERATURE
    )


def trapped_number(n2: Quantity, temperature: Quantity, omega_eff: Quantity, m: Quantity) -> float:
    """Particles held by the harmonic trap: N2 = 2 pi n2 kB T / (m Omega_eff^2)."""
    n = magnitude_in_cgs(n2, AREA_DENSITY, "n2")
    t_k = magnitude_in_cgs(temperature, TEMPERATURE, "temperature")
    omega = magnitude_in_cgs(omega_eff, FREQUENCY, "omega_eff")
    m_g = magnitude_in_cgs(m, MASS, "m")
    if omega == 0.0:
        raise ZeroDivisionError("trapped_number diverges without a trap (omega_eff = 0)")
    return 2.0 * math.pi * n * KB_CGS * t_k / (m_g * omega * omega)


def condensate_fraction(temperature: Quantity, t_c: Quantity) -> float:
    """Ground-state share N0/N = max(0, 1 - (T/T_c)^2); clamps above T_c."""
    t = magnitude_in_cgs(temperature, TEMPERATURE, "temperature")
    tc = magnitude_in_cgs(t_c, TEMPERATURE, "t_c")
    if t < 0:
        raise ValueError("temperature must be non-negative")
    if not tc > 0:
        raise ValueError("t_c must be positive")
    return max(0.0, 1.0 - (t / tc) ** 2)


def condensation_report(
    state: GasState,
    trap: TrapSpec | None = None,
    n_s: Quantity | None = None,
) -> CondensationReport:
    """Assemble the full threshold ladder for one gas state.

    When n2 is absent it is estimated as lambda_T(T) * n3 and flagged as
    such.  n_s defaults to n2, making T_KT = T_d/4 exactly.  Trap columns
    are only populated when a trap is given; a trap with omega_eff = 0
    yields T_c = 0 (no condensation), which is distinct from "no trap".
    """
    m = state.m_eff
    t = state.temperature
    notes = [
        "lambda_T = h / sqrt(2 pi m kB T)",
        "mu = kB T ln(1 - exp(-T_d/T))",
    ]

    lam = thermal_wavelength(m, t)
    n2 = state.n2
    n2_estimated = False
    if n2 is None:
        n2 = lam * state.n3
        n2_estimated = True
        notes.append("n2 estimated as lambda_T(T) * n3")

    r_int = Quantity(1.0 / math.sqrt(n2.cgs), LENGTH)
    t_d = degeneracy_temperature(n2, m)
    t_kt = kt_temperature(n2 if n_s is None else n_s, m)
    x = t_d.cgs / t.cgs
    mu = Quantity(KB_CGS * t.cgs * mu_over_kbt(x), ENERGY)
    mu_zero = x > _MU_ZERO_X
    if mu_zero:
        notes.append("|mu| below 1e-13 kB T; effectively 0-")

    omega_eff = None
    t_c = None
    n_trapped = None
    frac = None
    if trap is not None:
        trap.check_consistency(m)
        omega_eff = trap.omega_eff
        if omega_eff.cgs == 0.0:
            t_c = Quantity(0.0, TEMPERATURE)
            frac = 0.0
            notes.append("omega_eff = 0: no trap confinement, T_c = 0")
        else:
            t_c = trapped_bec_temperature(n2, m)
            n_trapped = trapped_number(n2, t, omega_eff, m)
            frac = condensate_fraction(t, t_c)

    return CondensationReport(
        temperature=t,
        m_eff=m,
        n2=n2,
        lambda_t=lam,
        r_int=r_int,
        t_degeneracy=t_d,
        t_kt=t_kt,
        mu=mu,
        n3=state.n3,
        omega_eff=omega_eff,
        t_c=t_c,
        n_trapped=n_trapped,
        condensate_frac=frac,
        degenerate=t.cgs <= t_d.cgs,
        kt_superfluid=t.cgs <= t_kt.cgs,
        overlap=lam.cgs >= r_int.cgs,
        n2_estimated=n2_estimated,
        mu_effectively_zero=mu_zero,
        notes=tuple(notes),
    )

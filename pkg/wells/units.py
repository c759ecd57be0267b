"""Conversion of dimensionless energies to electron volts."""
from scipy import constants


def energy_scale_ev(mass_ratio, width_nm):
    """hbar^2 / (2 m d^2) in eV for m = mass_ratio * m_e and d = width_nm nanometres."""
    if mass_ratio <= 0 or width_nm <= 0:
        raise ValueError("mass and width must be positive")
    mass = mass_ratio * constants.m_e
    width = width_nm * constants.nano
    return constants.hbar ** 2 / (2.0 * mass * width ** 2) / constants.electron_volt

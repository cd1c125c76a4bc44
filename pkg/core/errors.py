# core/errors.py
# Hierarki exception untuk seluruh lab.


class LabError(Exception):
    pass


class DomainError(LabError, ValueError):
    """
    Input di luar domain formula / invariant tipe
    (q di luar (0, 1/2), gamma = 0 tanpa limit mode, grid tidak valid, dll).
    """


class SimulationError(LabError, RuntimeError):
    """
    Kesalahan internal simulator: batas event tercapai, paritas LSM rusak,
    atau walk sampling Catalan melewati batas.
    """


class EmitError(LabError, OSError):
    """Gagal menulis output (CSV / PPM / stdout)."""

"""The physical pulse: sampled Omega(t) plus a constant gap Delta."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, InputError
from .io import read_table, write_table


@dataclass(eq=False)
class Waveform:
    """Drive ``Omega(t)`` (linear between samples) and constant gap ``delta``.

    Parameters
    ----------
    t : array
        Strictly increasing times starting at 0.
    omega : array
        Detuning samples, same length as ``t``.
    delta : float
        Gap Delta >= 0 of the ``(Delta/2) sigma_x`` term.
    meta : dict
        Provenance written to the CSV header (builder name, parameters, ...).
    """

    t: np.ndarray
    omega: np.ndarray
    delta: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.omega = np.asarray(self.omega, dtype=float)
        self.delta = float(self.delta)
        if self.t.ndim != 1 or self.t.shape != self.omega.shape:
            raise ContractError("t and omega must be 1-D arrays of equal length")
        if len(self.t) < 2:
            raise ContractError("a waveform needs at least two samples")
        if not (np.all(np.isfinite(self.t)) and np.all(np.isfinite(self.omega)) and np.isfinite(self.delta)):
            raise ContractError("waveform contains non-finite values")
        if self.t[0] != 0.0:
            raise ContractError("waveform time must start at 0")
        if np.any(np.diff(self.t) <= 0):
            raise ContractError("waveform time must be strictly increasing")
        if self.delta < 0:
            raise ContractError("gap delta must be >= 0")

    @property
    def duration(self) -> float:
        return float(self.t[-1])

    @property
    def n(self) -> int:
        return len(self.t)

    def area(self) -> float:
        """Pulse area int Omega dt (exact for the linear interpolant)."""
        return float(np.trapezoid(self.omega, self.t))

    def __call__(self, tq) -> np.ndarray:
        return np.interp(tq, self.t, self.omega)

    def refined(self, n: int) -> "Waveform":
        """Same pulse with at least ``n`` samples (original nodes kept)."""
        if self.n >= n:
            return self
        t = np.union1d(self.t, np.linspace(0.0, self.duration, int(n)))
        return Waveform(t, self(t), self.delta, dict(self.meta))

    def scaled(self, time_factor: float) -> "Waveform":
        """Same shape on the time axis stretched by ``time_factor``."""
        return Waveform(self.t * time_factor, self.omega / time_factor, self.delta / time_factor, dict(self.meta))


def write_waveform_csv(w: Waveform, path, extra: dict | None = None) -> None:
    meta = {"delta": repr(w.delta)}
    for k, v in w.meta.items():
        if isinstance(v, (str, int, float, bool)):
            meta[k] = v
    meta.update(extra or {})
    write_table(path, {"t": w.t, "omega": w.omega}, meta)


def read_waveform_csv(path) -> Waveform:
    meta, cols = read_table(path, required=("t", "omega"))
    try:
        delta = float(meta.pop("delta", 0.0))
    except ValueError:
        raise InputError(f"{path}: bad delta in header") from None
    if len(cols["t"]) < 2:
        raise InputError(f"{path}: need at least two samples")
    try:
        return Waveform(cols["t"], cols["omega"], delta, meta)
    except ContractError as exc:
        raise InputError(f"{path}: {exc}") from None

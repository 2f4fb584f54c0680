"""Finite direction codebooks for uniform planar arrays and their steered gains.

A codebook of n directions splits the azimuth circle into equal sectors.  Each
direction is modeled as the UPA aperture re-oriented so its boresight points at
the sector azimuth, with elevation steered at broadside.  The response is the
standard conjugate-steered array factor, normalized so the peak power gain of
an R x C array is R*C (the classic array gain).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Codebook:
    """Steering directions for a rows x cols UPA with lambda/2-style spacing."""

    rows: int
    cols: int
    n_directions: int
    spacing_wavelengths: float = 0.5
    azimuths_rad: np.ndarray = field(default=None, repr=False)
    elevations_rad: np.ndarray = field(default=None, repr=False)

    @property
    def n_elements(self) -> int:
        return self.rows * self.cols


def make_codebook(rows: int, cols: int, n_directions: int,
                  spacing_wavelengths: float = 0.5) -> Codebook:
    """Build a codebook whose azimuths partition [0, 2*pi) into equal sectors."""
    if rows < 1 or cols < 1:
        raise ValueError("array dimensions must be >= 1")
    if n_directions < 1:
        raise ValueError("n_directions must be >= 1")
    az = 2.0 * np.pi * np.arange(n_directions) / n_directions
    el = np.zeros(n_directions)
    return Codebook(rows=rows, cols=cols, n_directions=n_directions,
                    spacing_wavelengths=spacing_wavelengths,
                    azimuths_rad=az, elevations_rad=el)


def _aperture_sum(n: int, spacing: float, u: np.ndarray) -> np.ndarray:
    """Sum of element phasors along one aperture axis for direction cosine u."""
    phases = 2.0 * np.pi * spacing * np.arange(n)
    return np.exp(1j * np.multiply.outer(u, phases)).sum(axis=-1)


def response_matrix(cb: Codebook, azimuths, elevations) -> np.ndarray:
    """Complex amplitude response of every codebook direction at given angles.

    azimuths/elevations are arrays of shape (S,); the result has shape
    (S, n_directions).  |response|^2 is the power gain; it peaks at
    cb.n_elements when the evaluated angle matches the steering angle.
    """
    az = np.atleast_1d(np.asarray(azimuths, dtype=float))
    el = np.atleast_1d(np.asarray(elevations, dtype=float))
    # Horizontal direction cosine in each direction's rotated aperture frame.
    daz = az[:, None] - cb.azimuths_rad[None, :]
    u_par = np.sin(daz) * np.cos(el)[:, None]
    par = _aperture_sum(cb.cols, cb.spacing_wavelengths, u_par)
    # All shipped codebooks steer elevation at broadside, so the vertical
    # factor is direction-independent and computed once.
    if cb.elevations_rad is not None and np.any(cb.elevations_rad != 0.0):
        u_el = np.sin(el)[:, None] - np.sin(cb.elevations_rad)[None, :]
        vert = _aperture_sum(cb.rows, cb.spacing_wavelengths, u_el)
    else:
        vert = _aperture_sum(cb.rows, cb.spacing_wavelengths, np.sin(el))[:, None]
    return par * vert / np.sqrt(cb.n_elements)


def array_response(cb: Codebook, direction: int, azimuth: float, elevation: float) -> complex:
    """Complex amplitude response of one steered direction at (azimuth, elevation)."""
    if not 0 <= direction < cb.n_directions:
        raise ValueError(f"direction index {direction} out of range [0, {cb.n_directions})")
    return complex(response_matrix(cb, [azimuth], [elevation])[0, direction])


def array_gain_db(cb: Codebook, direction: int, azimuth: float, elevation: float) -> float:
    """Power gain in dB of one steered direction at (azimuth, elevation)."""
    amp = array_response(cb, direction, azimuth, elevation)
    power = abs(amp) ** 2
    if power == 0.0:
        return -np.inf
    return float(10.0 * np.log10(power))


def peak_gain_db(cb: Codebook) -> float:
    """Boresight power gain, 10*log10(rows*cols)."""
    return float(10.0 * np.log10(cb.n_elements))

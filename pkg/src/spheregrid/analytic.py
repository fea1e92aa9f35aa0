"""Analytic fields for initializing and verifying remaps.

Field specs: ``constant:<v>``, ``linear:<x|y|z>``, ``harmonic:Y<l>,<m>``
(real spherical harmonics, closed forms up to degree 4).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import SpheregridError

# associated Legendre P_l^m(x), closed forms for l <= 4, m >= 0
_PLM = {
    (0, 0): lambda x: np.ones_like(x),
    (1, 0): lambda x: x,
    (1, 1): lambda x: -np.sqrt(1 - x**2),
    (2, 0): lambda x: 0.5 * (3 * x**2 - 1),
    (2, 1): lambda x: -3 * x * np.sqrt(1 - x**2),
    (2, 2): lambda x: 3 * (1 - x**2),
    (3, 0): lambda x: 0.5 * (5 * x**3 - 3 * x),
    (3, 1): lambda x: -1.5 * (5 * x**2 - 1) * np.sqrt(1 - x**2),
    (3, 2): lambda x: 15 * x * (1 - x**2),
    (3, 3): lambda x: -15 * (1 - x**2) ** 1.5,
    (4, 0): lambda x: 0.125 * (35 * x**4 - 30 * x**2 + 3),
    (4, 1): lambda x: -2.5 * (7 * x**3 - 3 * x) * np.sqrt(1 - x**2),
    (4, 2): lambda x: 7.5 * (7 * x**2 - 1) * (1 - x**2),
    (4, 3): lambda x: -105 * x * (1 - x**2) ** 1.5,
    (4, 4): lambda x: 105 * (1 - x**2) ** 2,
}


def spherical_harmonic(l: int, m: int, xyz: np.ndarray) -> np.ndarray:
    """Real, orthonormal spherical harmonic Y_l^m on unit vectors (n, 3)."""
    if not (0 <= l <= 4) or abs(m) > l:
        raise SpheregridError(f"harmonic Y{l},{m} not available (need 0 <= l <= 4, |m| <= l)")
    z = xyz[:, 2]
    plm = _PLM[(l, abs(m))](z)
    norm = math.sqrt(
        (2 * l + 1) / (4 * math.pi) * math.factorial(l - abs(m)) / math.factorial(l + abs(m))
    )
    if m == 0:
        return norm * plm
    phi = np.arctan2(xyz[:, 1], xyz[:, 0])
    trig = np.cos(m * phi) if m > 0 else np.sin(-m * phi)
    return math.sqrt(2.0) * norm * plm * trig


class FieldSpec:
    """Parsed analytic-field specification; call on (n, 3) unit vectors."""

    def __init__(self, text: str):
        self.text = text
        kind, _, arg = text.partition(":")
        if kind == "constant":
            try:
                self._const = float(arg)
            except ValueError:
                raise SpheregridError(f"bad constant in field spec {text!r}") from None
            self._eval = lambda xyz: np.full(len(xyz), self._const)
        elif kind == "linear":
            if arg not in ("x", "y", "z"):
                raise SpheregridError(f"linear axis must be x, y or z in {text!r}")
            axis = "xyz".index(arg)
            self._eval = lambda xyz: xyz[:, axis].copy()
        elif kind == "harmonic":
            m = re_match = None
            import re

            re_match = re.match(r"^Y(\d+),(-?\d+)$", arg)
            if re_match is None:
                raise SpheregridError(f"bad harmonic spec {text!r}; expected harmonic:Y<l>,<m>")
            l, m = int(re_match.group(1)), int(re_match.group(2))
            self._eval = lambda xyz: spherical_harmonic(l, m, xyz)
            self._eval(np.array([[0.0, 0.0, 1.0]]))  # validate (l, m) now
        else:
            raise SpheregridError(f"unknown field spec {text!r}")

    def __call__(self, xyz: np.ndarray) -> np.ndarray:
        return self._eval(np.atleast_2d(np.asarray(xyz, dtype=float)))

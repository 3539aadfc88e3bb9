"""Symmetric multiports, Dove prism stages, and composite OAM beamsplitters.

The central device routes photons among ``D`` paths according to their
winding number.  It sandwiches a stage of Dove prisms (one per port, prism
``n`` rotated so its phase coefficient is ``2*pi*n/D``) between two identical
symmetric multiports whose scattering matrix is the discrete-Fourier matrix

    ``S[n, m] = exp(i*2*pi*n*m/D) / sqrt(D)``.

Because photons reflect an odd number of times inside a symmetric multiport,
each transit also flips the winding sign; that aggregate flip is modeled as a
single parity attribute of the multiport rather than being distributed over
individual beamsplitters.

Closed forms for a photon entering with winding ``l`` on path ``n``:

* forward transit:  ``|l>_n  ->  |-l>_{(-l-n) mod D}``
* reverse transit:  ``|l>_n  ->  |-l>_{(l-n) mod D}``

with amplitude exactly 1 in both cases; the reverse device (the same optics
traversed right to left) conjugates the prism phases, making it the exact
inverse of the forward device.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .elements import Direction, Element, reversed_element
from .errors import DomainError
from .states import ModeLabel, compose_images

UNITARITY_TOL = 1e-12
GENPERM_TOL = 1e-9


@lru_cache(maxsize=None)
def _symmetric_matrix_cached(dimension: int) -> np.ndarray:
    indices = np.arange(dimension)
    # reduce the integer phase index first: exp(2*pi*i*q/D) is periodic in
    # q mod D, and small arguments keep the cancellation noise well under
    # the amplitude pruning threshold
    phase_index = np.outer(indices, indices) % dimension
    matrix = np.exp(2j * np.pi * phase_index / dimension)
    matrix /= np.sqrt(dimension)
    matrix.setflags(write=False)
    return matrix


def symmetric_matrix(dimension: int) -> np.ndarray:
    """Discrete-Fourier scattering matrix of the ``dimension``-port multiport.

    Exactly symmetric by construction (entry ``(n, m)`` is computed from the
    integer product ``n*m``), which is what makes forward and backward
    transits of the multiport identical.
    """
    if dimension < 1:
        raise DomainError(f"dimension must be >= 1, got {dimension}")
    return _symmetric_matrix_cached(dimension).copy()


@dataclass(frozen=True)
class SymmetricMultiport:
    """Symmetric multiport stage; ``parity_flip`` is the per-transit sign flip."""

    dimension: int
    parity_flip: bool = True

    def mode_images(self, label: ModeLabel):
        if not 0 <= label.path < self.dimension:
            raise DomainError(
                f"path {label.path} outside multiport of dimension {self.dimension}"
            )
        matrix = _symmetric_matrix_cached(self.dimension)
        oam = -label.oam if self.parity_flip else label.oam
        column = matrix[:, label.path]
        return [
            (ModeLabel(out_path, oam, label.pol), complex(column[out_path]))
            for out_path in range(self.dimension)
        ]

    def reversed(self) -> "SymmetricMultiport":
        return self


@dataclass(frozen=True)
class DoveStage:
    """One Dove prism per port; prism ``n`` has phase coefficient ``2*pi*n/D``."""

    dimension: int
    direction: Direction = Direction.FORWARD

    def __post_init__(self) -> None:
        object.__setattr__(self, "direction", Direction.coerce(self.direction))

    def mode_images(self, label: ModeLabel):
        if not 0 <= label.path < self.dimension:
            raise DomainError(
                f"path {label.path} outside Dove stage of dimension {self.dimension}"
            )
        # prism n at phase coefficient 2*pi*n/D acting on an integer winding:
        # the phase index n*oam is exact, so reduce it mod D before
        # exponentiating (see _symmetric_matrix_cached)
        phase_index = label.path * label.oam
        if self.direction is Direction.REVERSE:
            phase_index = -phase_index
        phase = complex(
            np.exp(-2j * np.pi * (phase_index % self.dimension) / self.dimension)
        )
        return ((ModeLabel(label.path, -label.oam, label.pol), phase),)

    def reversed(self) -> "DoveStage":
        flipped = (
            Direction.REVERSE
            if self.direction is Direction.FORWARD
            else Direction.FORWARD
        )
        return DoveStage(self.dimension, flipped)


Stage = SymmetricMultiport | DoveStage | Element


@dataclass(frozen=True)
class CompositeDevice:
    """Ordered stages applied left to right, all sharing one dimension."""

    stages: tuple[Stage, ...]
    dimension: int

    def mode_images(self, label: ModeLabel):
        return compose_images(self.stages, label)

    def reversed(self) -> "CompositeDevice":
        flipped = []
        for stage in reversed(self.stages):
            if hasattr(stage, "reversed"):
                flipped.append(stage.reversed())
            else:
                flipped.append(reversed_element(stage))
        return CompositeDevice(tuple(flipped), self.dimension)


def oambs(dimension: int) -> CompositeDevice:
    """Forward OAM beamsplitter: multiport, Dove stage, multiport."""
    if dimension < 1:
        raise DomainError(f"dimension must be >= 1, got {dimension}")
    s = SymmetricMultiport(dimension)
    return CompositeDevice(
        (s, DoveStage(dimension, Direction.FORWARD), s), dimension
    )


def sbmao(dimension: int) -> CompositeDevice:
    """The OAM beamsplitter traversed right to left; exact inverse of forward."""
    return oambs(dimension).reversed()


def oambs_closed_form(
    oam: int,
    path: int,
    dimension: int,
    direction: Direction | str = Direction.FORWARD,
) -> tuple[int, int]:
    """Output ``(oam, path)`` for a basis photon, by the collapsed geometric sum.

    The winding flips sign exactly (no modular wrap); only the output path is
    reduced modulo the dimension.
    """
    if dimension < 1:
        raise DomainError(f"dimension must be >= 1, got {dimension}")
    if not 0 <= path < dimension:
        raise DomainError(f"path {path} outside [0, {dimension - 1}]")
    if Direction.coerce(direction) is Direction.FORWARD:
        return -oam, (-oam - path) % dimension
    return -oam, (oam - path) % dimension


def default_oam_values(dimension: int) -> tuple[int, ...]:
    """Window closed under one sign flip for basis windings ``0..D-1``."""
    return tuple(range(-(dimension - 1), dimension))


def device_basis(
    dimension: int, oam_values: Iterable[int]
) -> list[ModeLabel]:
    """Enumeration basis: path ascending, then OAM ascending (polarization
    is a spectator for every device, so only H labels are enumerated)."""
    values = sorted(set(int(v) for v in oam_values))
    return [
        ModeLabel(path, oam) for path in range(dimension) for oam in values
    ]


def device_matrix(
    device: CompositeDevice | Stage,
    oam_values: Iterable[int] | None = None,
) -> np.ndarray:
    """Explicit matrix of ``device`` over the (path x OAM) basis.

    The supplied windings must be closed under negation (include ``-l`` for
    every ``l``); images falling outside the enumerated basis raise
    :class:`DomainError`.
    """
    dimension = device.dimension
    if oam_values is None:
        oam_values = default_oam_values(dimension)
    values = sorted(set(int(v) for v in oam_values))
    value_set = set(values)
    for value in values:
        if -value not in value_set:
            raise DomainError(
                f"OAM values not closed under sign flip: {value} without {-value}"
            )
    basis = device_basis(dimension, values)
    index = {label: i for i, label in enumerate(basis)}
    size = len(basis)
    matrix = np.zeros((size, size), dtype=complex)
    for j, label in enumerate(basis):
        for image, amplitude in device.mode_images(label):
            i = index.get(image)
            if i is None:
                raise DomainError(
                    f"basis not closed: {label} maps onto {image}"
                )
            matrix[i, j] += amplitude
    return matrix


def is_generalized_permutation(
    matrix: np.ndarray, tol: float = GENPERM_TOL
) -> tuple[bool, dict[int, tuple[int, complex]] | None]:
    """Whether ``matrix`` maps each basis vector to one basis vector.

    Returns ``(True, witness)`` where ``witness[input] = (output, phase)``
    when every column holds exactly one entry of unit modulus (within
    ``tol``) with all others below ``tol`` and no two columns share an
    output row; ``(False, None)`` otherwise.
    """
    array = np.asarray(matrix)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise DomainError(f"matrix must be square, got shape {array.shape}")
    witness: dict[int, tuple[int, complex]] = {}
    used_rows: set[int] = set()
    for j in range(array.shape[1]):
        column = array[:, j]
        big = np.flatnonzero(np.abs(column) >= tol)
        if big.size != 1:
            return False, None
        i = int(big[0])
        if abs(abs(column[i]) - 1.0) > tol or i in used_rows:
            return False, None
        used_rows.add(i)
        witness[j] = (i, complex(column[i]))
    return True, witness


def aligning_phase(candidate: np.ndarray, target: np.ndarray) -> float:
    """Phase that best aligns ``candidate`` with ``target`` at the target's
    largest-magnitude entry."""
    target = np.asarray(target)
    candidate = np.asarray(candidate)
    flat = int(np.argmax(np.abs(target)))
    i, j = np.unravel_index(flat, target.shape)
    return float(np.angle(candidate[i, j]) - np.angle(target[i, j]))


def global_phase_error(candidate: np.ndarray, target: np.ndarray) -> float:
    """``max |candidate - e^{i*gamma}*target|`` for the aligning phase gamma."""
    gamma = aligning_phase(candidate, target)
    return float(
        np.max(np.abs(np.asarray(candidate) - np.exp(1j * gamma) * np.asarray(target)))
    )


__all__ = [
    "CompositeDevice",
    "DoveStage",
    "GENPERM_TOL",
    "Stage",
    "SymmetricMultiport",
    "UNITARITY_TOL",
    "aligning_phase",
    "default_oam_values",
    "device_basis",
    "device_matrix",
    "global_phase_error",
    "is_generalized_permutation",
    "oambs",
    "oambs_closed_form",
    "sbmao",
    "symmetric_matrix",
]

"""Sparse photon states over path / orbital-angular-momentum / polarization modes.

A single-photon mode is labeled by its spatial path index, its integer OAM
winding number, and its polarization.  States store only nonzero complex
amplitudes, keyed by :class:`ModeLabel` for one photon and by ordered tuples
of labels (one slot per photon) for few-photon ensembles.

Winding numbers are true signed integers.  Devices routinely produce negative
values (every reflection flips the sign) and routing formulas reduce them
modulo the path count only where they must; the state itself never wraps.

Multi-photon states use distinguishable slots.  That is exact as long as each
operator sends every occupied label to a single label (all composite devices
in this package do); driving two slots onto one label raises
:class:`~oamnet.errors.BunchingError` instead of silently producing wrong
interference terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Protocol, Sequence

from .errors import (
    BunchingError,
    DomainError,
    NormalizationError,
    WindowOverflowError,
)

NORM_TOL = 1e-9
PRUNE_TOL = 1e-15
BUNCHING_TOL = 1e-12


class Polarization(Enum):
    """Photon polarization. Every element here treats it as a spectator."""

    H = "H"
    V = "V"


H = Polarization.H
V = Polarization.V


@dataclass(frozen=True)
class ModeLabel:
    """One single-photon mode: (path, winding number, polarization)."""

    path: int
    oam: int
    pol: Polarization = H

    def __str__(self) -> str:
        return f"|{self.oam}^{self.pol.value}>_{self.path}"


def label_key(label: ModeLabel) -> tuple[int, int, str]:
    """Sort key: path ascending, then OAM ascending, then H before V."""
    return (label.path, label.oam, label.pol.value)


@dataclass(frozen=True)
class ModeSpace:
    """Declared mode space: paths ``0..dimension-1``, ``|oam| <= oam_window``.

    The window turns runaway winding numbers into loud errors instead of
    silently growing supports.  Four times the path count leaves room for
    every device chain built here, since no pipeline shifts a winding by
    more than a few multiples of the dimension.
    """

    dimension: int
    oam_window: int | None = None

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise DomainError(f"dimension must be >= 1, got {self.dimension}")
        if self.oam_window is None:
            object.__setattr__(self, "oam_window", 4 * self.dimension)
        if self.oam_window < 0:
            raise DomainError(f"oam_window must be >= 0, got {self.oam_window}")

    def check_label(self, label: ModeLabel) -> None:
        if not 0 <= label.path < self.dimension:
            raise DomainError(
                f"path {label.path} outside [0, {self.dimension - 1}]"
            )
        if abs(label.oam) > self.oam_window:
            raise WindowOverflowError(
                f"winding number {label.oam} outside window "
                f"[-{self.oam_window}, {self.oam_window}]"
            )


class ModeOperator(Protocol):
    """Anything that maps one mode label to a sparse list of (label, amplitude)."""

    def mode_images(
        self, label: ModeLabel
    ) -> Iterable[tuple[ModeLabel, complex]]: ...


@dataclass(frozen=True)
class QubitSpec:
    """Polarization qubit: ``alpha`` on H, ``beta`` on V, unit norm."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        norm_sq = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise NormalizationError(
                f"|alpha|^2 + |beta|^2 = {norm_sq!r}, expected 1"
            )


@dataclass(frozen=True)
class PhotonState:
    """One photon as a sparse map from mode labels to complex amplitudes.

    Construction prunes entries with magnitude at or below ``PRUNE_TOL``,
    validates every label against ``space`` and requires unit norm within
    ``NORM_TOL``.  Instances are immutable values; treat ``amplitudes`` as
    read-only.
    """

    space: ModeSpace
    amplitudes: Mapping[ModeLabel, complex]

    def __post_init__(self) -> None:
        clean: dict[ModeLabel, complex] = {}
        norm_sq = 0.0
        for label, raw in self.amplitudes.items():
            amp = complex(raw)
            if abs(amp) <= PRUNE_TOL:
                continue
            self.space.check_label(label)
            clean[label] = amp
            norm_sq += abs(amp) ** 2
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise NormalizationError(f"photon norm^2 = {norm_sq!r}, expected 1")
        object.__setattr__(self, "amplitudes", clean)

    def amplitude(self, label: ModeLabel) -> complex:
        return self.amplitudes.get(label, 0j)

    def labels(self) -> list[ModeLabel]:
        return sorted(self.amplitudes, key=label_key)

    def __str__(self) -> str:
        terms = [
            f"({self.amplitudes[label]:.6g}){label}" for label in self.labels()
        ]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class EnsembleState:
    """Few photons in distinguishable slots: amplitudes over label tuples.

    Every stored tuple has exactly ``slot_count`` entries and pairwise
    distinct labels; see the module docstring for why duplicates are
    rejected rather than symmetrized.
    """

    space: ModeSpace
    slot_count: int
    amplitudes: Mapping[tuple[ModeLabel, ...], complex]

    def __post_init__(self) -> None:
        if self.slot_count < 1:
            raise DomainError(f"slot_count must be >= 1, got {self.slot_count}")
        clean: dict[tuple[ModeLabel, ...], complex] = {}
        norm_sq = 0.0
        for labels, raw in self.amplitudes.items():
            amp = complex(raw)
            if abs(amp) <= PRUNE_TOL:
                continue
            if len(labels) != self.slot_count:
                raise DomainError(
                    f"tuple arity {len(labels)} != slot_count {self.slot_count}"
                )
            if len(set(labels)) != len(labels):
                raise BunchingError(
                    "two slots share the label "
                    + str(_first_duplicate(labels))
                )
            for label in labels:
                self.space.check_label(label)
            clean[tuple(labels)] = amp
            norm_sq += abs(amp) ** 2
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise NormalizationError(f"ensemble norm^2 = {norm_sq!r}, expected 1")
        object.__setattr__(self, "amplitudes", clean)

    def amplitude(self, labels: tuple[ModeLabel, ...]) -> complex:
        return self.amplitudes.get(tuple(labels), 0j)

    def tuples(self) -> list[tuple[ModeLabel, ...]]:
        return sorted(
            self.amplitudes, key=lambda t: tuple(label_key(l) for l in t)
        )

    def __str__(self) -> str:
        parts = []
        for labels in self.tuples():
            joint = "".join(str(l) for l in labels)
            parts.append(f"({self.amplitudes[labels]:.6g}){joint}")
        return " + ".join(parts) if parts else "0"


def _first_duplicate(labels: Sequence[ModeLabel]) -> ModeLabel:
    seen: set[ModeLabel] = set()
    for label in labels:
        if label in seen:
            return label
        seen.add(label)
    raise AssertionError("no duplicate present")


def make_qubit_photon(
    spec: QubitSpec, path: int, oam: int, space: ModeSpace
) -> PhotonState:
    """Photon on one (path, winding) carrying ``spec`` in its polarization."""
    return PhotonState(
        space,
        {
            ModeLabel(path, oam, H): spec.alpha,
            ModeLabel(path, oam, V): spec.beta,
        },
    )


def fidelity(
    a: PhotonState | EnsembleState, b: PhotonState | EnsembleState
) -> float:
    """Squared overlap ``|<a|b>|^2``; symmetric in its arguments.

    Raises :class:`DomainError` when the states are of different kinds or
    the ensembles disagree on slot count.
    """
    if isinstance(a, PhotonState) != isinstance(b, PhotonState):
        raise DomainError("cannot compare a single photon with an ensemble")
    if isinstance(a, EnsembleState) and a.slot_count != b.slot_count:
        raise DomainError(
            f"slot counts differ: {a.slot_count} vs {b.slot_count}"
        )
    overlap = 0j
    for key, amp in a.amplitudes.items():
        other = b.amplitudes.get(key)
        if other is not None:
            overlap += amp.conjugate() * other
    return min(1.0, abs(overlap) ** 2)


def tensor(photons: Sequence[PhotonState]) -> EnsembleState:
    """Product state of independent photons; slot order follows list order."""
    if not photons:
        raise DomainError("tensor of an empty photon list")
    space = photons[0].space
    for photon in photons[1:]:
        if photon.space != space:
            raise DomainError("all photons must share one mode space")
    terms: dict[tuple[ModeLabel, ...], complex] = {(): 1.0 + 0j}
    for photon in photons:
        grown: dict[tuple[ModeLabel, ...], complex] = {}
        for labels, amp in terms.items():
            for label, factor in photon.amplitudes.items():
                value = amp * factor
                if abs(value) > PRUNE_TOL:
                    grown[labels + (label,)] = value
        terms = grown
    return EnsembleState(space, len(photons), terms)


def compose_images(
    operators: Sequence[ModeOperator], label: ModeLabel
) -> list[tuple[ModeLabel, complex]]:
    """Image of one label under a chain of operators, applied left to right."""
    current: dict[ModeLabel, complex] = {label: 1.0 + 0j}
    for operator in operators:
        grown: dict[ModeLabel, complex] = {}
        for lbl, amp in current.items():
            for image, factor in operator.mode_images(lbl):
                grown[image] = grown.get(image, 0j) + amp * factor
        current = {l: a for l, a in grown.items() if abs(a) > PRUNE_TOL}
    return list(current.items())


def apply_mode_map(
    state: PhotonState | EnsembleState, operator: ModeOperator
) -> PhotonState | EnsembleState:
    """Apply a single-photon linear operator to a state.

    Single photons evolve by plain linearity.  Ensembles evolve slot by
    slot: each slot's label is replaced by its image and the tuple
    amplitudes recombined, which is exact for the generalized-permutation
    devices this package builds.  An output tuple that collides two slots
    on one label with magnitude above ``BUNCHING_TOL`` raises
    :class:`BunchingError`; collisions at or below it are numerical dust
    and are dropped.
    """
    if isinstance(state, PhotonState):
        return _apply_photon(state, operator)
    if isinstance(state, EnsembleState):
        return _apply_ensemble(state, operator)
    raise DomainError(f"not a state: {type(state).__name__}")


def _apply_photon(state: PhotonState, operator: ModeOperator) -> PhotonState:
    out: dict[ModeLabel, complex] = {}
    for label, amp in state.amplitudes.items():
        for image, factor in operator.mode_images(label):
            state.space.check_label(image)
            out[image] = out.get(image, 0j) + amp * factor
    return PhotonState(state.space, out)


def _apply_ensemble(
    state: EnsembleState, operator: ModeOperator
) -> EnsembleState:
    space = state.space
    images: dict[ModeLabel, list[tuple[ModeLabel, complex]]] = {}

    def slot_image(label: ModeLabel) -> list[tuple[ModeLabel, complex]]:
        cached = images.get(label)
        if cached is None:
            cached = [
                (image, factor)
                for image, factor in operator.mode_images(label)
                if abs(factor) > PRUNE_TOL
            ]
            for image, _ in cached:
                space.check_label(image)
            images[label] = cached
        return cached

    out: dict[tuple[ModeLabel, ...], complex] = {}
    for labels, amp in state.amplitudes.items():
        partial: list[tuple[tuple[ModeLabel, ...], complex]] = [((), amp)]
        for label in labels:
            grown = []
            for prefix, value in partial:
                for image, factor in slot_image(label):
                    joint = value * factor
                    if abs(joint) > PRUNE_TOL:
                        grown.append((prefix + (image,), joint))
            partial = grown
        for joint_labels, value in partial:
            out[joint_labels] = out.get(joint_labels, 0j) + value

    kept: dict[tuple[ModeLabel, ...], complex] = {}
    for joint_labels, value in out.items():
        if len(set(joint_labels)) != len(joint_labels):
            if abs(value) > BUNCHING_TOL:
                raise BunchingError(
                    "operator drove two slots onto "
                    + str(_first_duplicate(joint_labels))
                    + f" with amplitude {abs(value):.3e}"
                )
            continue
        kept[joint_labels] = value
    return EnsembleState(space, state.slot_count, kept)


def path_probabilities(state: PhotonState) -> dict[int, float]:
    """Probability of finding the photon on each path (Born rule)."""
    probs: dict[int, float] = {}
    for label, amp in state.amplitudes.items():
        probs[label.path] = probs.get(label.path, 0.0) + abs(amp) ** 2
    return dict(sorted(probs.items()))


__all__ = [
    "BUNCHING_TOL",
    "EnsembleState",
    "H",
    "ModeLabel",
    "ModeOperator",
    "ModeSpace",
    "NORM_TOL",
    "PRUNE_TOL",
    "PhotonState",
    "Polarization",
    "QubitSpec",
    "V",
    "apply_mode_map",
    "compose_images",
    "fidelity",
    "label_key",
    "make_qubit_photon",
    "path_probabilities",
    "tensor",
]

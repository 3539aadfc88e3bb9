"""Network applications: OAM multiplexing and two self-routing topologies.

All three builders ride on the winding-routed beamsplitter from
:mod:`oamnet.multiport`:

* ``MuxNetwork`` merges ``D`` spatial channels into path 0 by tagging each
  photon with its sender's winding number, and splits them back apart with
  the reverse device.
* ``SimpleRoutingNetwork`` connects a left and a right user group through
  one device; the sender picks the winding number that lands on the desired
  output port, in either direction.
* ``StarNetwork`` adds a reflective hologram at every output port so any
  user can reach any other through a single central node: the photon crosses
  forward, bounces off the landing port's reflector, and returns through the
  reverse transit to the path equal to its injected winding number.

Winding bookkeeping: a photon delivered by the star carries the sender's
index modulo the path count (the "sender tag").  The physical winding is a
true integer, so it equals the sender index itself only when no modular
reduction happened along the way; reports therefore carry both the exact
delivered winding and its tag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .elements import Direction
from .errors import (
    BunchingError,
    DomainError,
    NormalizationError,
    RoutingDomainError,
)
from .multiport import (
    CompositeDevice,
    device_matrix,
    is_generalized_permutation,
    oambs,
    sbmao,
)
from .states import (
    NORM_TOL,
    EnsembleState,
    H,
    ModeLabel,
    ModeSpace,
    PhotonState,
    QubitSpec,
    V,
    apply_mode_map,
    fidelity,
    make_qubit_photon,
    tensor,
)

REPORT_DIMENSION_MAX = 8


def sender_tag(oam: int, dimension: int) -> int:
    """Sender index encoded in a delivered winding number (mod path count)."""
    return oam % dimension


@dataclass(frozen=True)
class HologramBank:
    """Independent OAM shift per port; ports with shift 0 are pass-through."""

    shifts: tuple[int, ...]

    def mode_images(self, label: ModeLabel):
        if not 0 <= label.path < len(self.shifts):
            raise DomainError(
                f"path {label.path} outside bank of {len(self.shifts)} ports"
            )
        shift = self.shifts[label.path]
        if shift == 0:
            return ((label, 1.0 + 0j),)
        return ((ModeLabel(label.path, label.oam + shift, label.pol), 1.0 + 0j),)


@dataclass(frozen=True)
class ReflectorBank:
    """Reflective hologram per port: ``|l> -> |-l-k_p>`` on port ``p``."""

    shifts: tuple[int, ...]

    def mode_images(self, label: ModeLabel):
        if not 0 <= label.path < len(self.shifts):
            raise DomainError(
                f"path {label.path} outside bank of {len(self.shifts)} ports"
            )
        shift = self.shifts[label.path]
        return (
            (ModeLabel(label.path, -label.oam - shift, label.pol), 1.0 + 0j),
        )


@lru_cache(maxsize=None)
def _ensure_slot_safe(device: CompositeDevice) -> None:
    # Slot-wise ensemble evolution is exact only for generalized
    # permutations; verify once per device before any ensemble crosses it.
    ok, _ = is_generalized_permutation(device_matrix(device))
    if not ok:
        raise BunchingError(
            "device is not a generalized permutation on mode labels; "
            "ensembles cannot cross it slot-wise"
        )


def _device_apply(
    state: PhotonState | EnsembleState, device: CompositeDevice
) -> PhotonState | EnsembleState:
    if isinstance(state, EnsembleState):
        _ensure_slot_safe(device)
    return apply_mode_map(state, device)


def _check_index(value: int, dimension: int, name: str) -> None:
    if not 0 <= value < dimension:
        raise DomainError(f"{name} {value} outside [0, {dimension - 1}]")


@dataclass(frozen=True)
class MuxNetwork:
    """D-into-1 multiplexer and its demultiplexer.

    Port ``n`` carries a ``-n`` hologram in front of the forward device, so
    user ``n``'s photon reaches path 0 wearing winding ``n`` as its channel
    tag; the reverse device undoes the merge, and an optional ``+n`` bank
    restores every winding to 0.
    """

    dimension: int
    oam_window: int | None = None

    @property
    def space(self) -> ModeSpace:
        return ModeSpace(self.dimension, self.oam_window)

    @property
    def input_holograms(self) -> HologramBank:
        return HologramBank(tuple(-n for n in range(self.dimension)))

    @property
    def core(self) -> CompositeDevice:
        return oambs(self.dimension)

    @property
    def demux_core(self) -> CompositeDevice:
        return sbmao(self.dimension)

    @property
    def output_holograms(self) -> HologramBank:
        return HologramBank(tuple(range(self.dimension)))

    def transmit(self, qubits: Sequence[QubitSpec]) -> EnsembleState:
        """Merge one photon per user onto path 0.

        Expects exactly ``dimension`` qubit specs; user ``n`` injects on
        path ``n`` with winding 0.
        """
        if len(qubits) != self.dimension:
            raise DomainError(
                f"expected {self.dimension} qubits, got {len(qubits)}"
            )
        space = self.space
        photons = [
            make_qubit_photon(spec, path, 0, space)
            for path, spec in enumerate(qubits)
        ]
        merged = apply_mode_map(tensor(photons), self.input_holograms)
        return _device_apply(merged, self.core)

    def receive(
        self,
        multiplexed: EnsembleState,
        restore_oam: bool = False,
    ) -> EnsembleState:
        """Split a multiplexed ensemble back onto its tagged paths.

        Photons must arrive on path 0 with windings in ``0..dimension-1``;
        anything else is not a merge product and is rejected.
        """
        if multiplexed.space.dimension != self.dimension:
            raise DomainError(
                f"state spans {multiplexed.space.dimension} paths, "
                f"demux has {self.dimension}"
            )
        for labels in multiplexed.amplitudes:
            for label in labels:
                if label.path != 0 or not 0 <= label.oam < self.dimension:
                    raise RoutingDomainError(
                        f"demux input must sit on path 0 with winding in "
                        f"[0, {self.dimension - 1}]; got {label}"
                    )
        separated = _device_apply(multiplexed, self.demux_core)
        if restore_oam:
            separated = apply_mode_map(separated, self.output_holograms)
        return separated


@dataclass(frozen=True)
class SimpleRoutingNetwork:
    """Two user groups facing one winding-routed device.

    The forward side injects on the left; the reverse side rides the same
    optics right to left and therefore sees the inverse transit.
    """

    dimension: int
    side: Direction = Direction.FORWARD
    oam_window: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "side", Direction.coerce(self.side))

    @property
    def space(self) -> ModeSpace:
        return ModeSpace(self.dimension, self.oam_window)

    @property
    def core(self) -> CompositeDevice:
        return oambs(self.dimension)

    @property
    def transit(self) -> CompositeDevice:
        if self.side is Direction.FORWARD:
            return self.core
        return self.core.reversed()

    def choose_winding(self, sender: int, destination: int) -> int:
        return choose_winding_simple(
            sender, destination, self.dimension, self.side
        )

    def send(
        self, sender: int, winding: int, payload: QubitSpec = QubitSpec(1, 0)
    ) -> PhotonState:
        """Inject ``|winding>`` on the sender's port and cross the device."""
        _check_index(sender, self.dimension, "sender")
        photon = make_qubit_photon(payload, sender, winding, self.space)
        return _device_apply(photon, self.transit)

    def deliver(
        self,
        sender: int,
        destination: int,
        payload: QubitSpec = QubitSpec(1, 0),
    ) -> PhotonState:
        _check_index(destination, self.dimension, "destination")
        return self.send(
            sender, self.choose_winding(sender, destination), payload
        )


@dataclass(frozen=True)
class StarNetwork:
    """All-to-all routing through one central node.

    The node is the forward device with a reflective hologram on each output
    port ``p`` whose shift is ``-p`` reduced into ``0..D-1`` (a hologram
    shift only matters modulo the path count for routing, and the reduced
    value is the one the bounce algebra singles out).  ``reflector_overrides``
    deliberately mis-shifts chosen ports, for fault-localization studies.
    """

    dimension: int
    oam_window: int | None = None
    reflector_overrides: tuple[tuple[int, int], ...] = ()

    @property
    def space(self) -> ModeSpace:
        return ModeSpace(self.dimension, self.oam_window)

    @property
    def core(self) -> CompositeDevice:
        return oambs(self.dimension)

    @property
    def return_core(self) -> CompositeDevice:
        return sbmao(self.dimension)

    @property
    def reflectors(self) -> ReflectorBank:
        shifts = [(-port) % self.dimension for port in range(self.dimension)]
        for port, shift in self.reflector_overrides:
            _check_index(port, self.dimension, "override port")
            shifts[port] = shift
        return ReflectorBank(tuple(shifts))

    def route_state(
        self, state: PhotonState | EnsembleState
    ) -> PhotonState | EnsembleState:
        """Forward transit, bounce at the landing ports, reverse transit."""
        outbound = _device_apply(state, self.core)
        bounced = apply_mode_map(outbound, self.reflectors)
        return _device_apply(bounced, self.return_core)

    def deliver(
        self,
        sender: int,
        destination: int,
        payload: QubitSpec = QubitSpec(1, 0),
    ) -> PhotonState:
        """Send a payload from ``sender`` to ``destination``.

        The sender only needs to give the photon a winding equal to the
        destination index; the delivered photon lands on that path carrying
        the sender's tag in its winding.
        """
        _check_index(sender, self.dimension, "sender")
        _check_index(destination, self.dimension, "destination")
        photon = make_qubit_photon(payload, sender, destination, self.space)
        return self.route_state(photon)


@dataclass(frozen=True)
class ReportRow:
    sender: int
    destination: int
    winding: int
    delivered_path: int
    delivered_oam: int
    sender_tag: int | None
    amplitude_error: float
    passed: bool


@dataclass(frozen=True)
class RoutingReport:
    """Exhaustive (sender, destination) delivery table for one network."""

    dimension: int
    kind: str
    side: str
    rows: tuple[ReportRow, ...]

    @property
    def all_pass(self) -> bool:
        return all(row.passed for row in self.rows)


def choose_winding_simple(
    sender: int,
    destination: int,
    dimension: int,
    side: Direction | str = Direction.FORWARD,
) -> int:
    """Winding number that delivers ``sender``'s photon to ``destination``."""
    _check_index(sender, dimension, "sender")
    _check_index(destination, dimension, "destination")
    if Direction.coerce(side) is Direction.FORWARD:
        return (-destination - sender) % dimension
    return (destination + sender) % dimension


def _dominant(state: PhotonState) -> tuple[ModeLabel, float]:
    label = max(state.amplitudes, key=lambda l: abs(state.amplitudes[l]))
    return label, abs(state.amplitudes[label])


def routing_report(
    network: SimpleRoutingNetwork | StarNetwork,
    max_dimension: int = REPORT_DIMENSION_MAX,
) -> RoutingReport:
    """One row per (sender, destination) pair, in deterministic order.

    A row passes when the photon lands on the requested path with amplitude
    modulus 1 within tolerance; the delivered winding is reported, never
    judged (for the star it identifies the sender modulo the path count).
    """
    dimension = network.dimension
    if dimension > max_dimension:
        raise DomainError(
            f"report capped at dimension {max_dimension}, got {dimension}"
        )
    if isinstance(network, SimpleRoutingNetwork):
        kind, side = "simple", network.side.value
    elif isinstance(network, StarNetwork):
        kind, side = "star", "star"
    else:
        raise DomainError(f"no report for {type(network).__name__}")

    rows = []
    for sender in range(dimension):
        for destination in range(dimension):
            if kind == "simple":
                winding = network.choose_winding(sender, destination)
            else:
                winding = destination
            state = network.deliver(sender, destination)
            label, modulus = _dominant(state)
            amplitude_error = abs(modulus - 1.0)
            rows.append(
                ReportRow(
                    sender=sender,
                    destination=destination,
                    winding=winding,
                    delivered_path=label.path,
                    delivered_oam=label.oam,
                    sender_tag=(
                        sender_tag(label.oam, dimension)
                        if kind == "star"
                        else None
                    ),
                    amplitude_error=amplitude_error,
                    passed=(
                        label.path == destination
                        and amplitude_error <= NORM_TOL
                    ),
                )
            )
    return RoutingReport(dimension, kind, side, tuple(rows))


def detect_collisions(
    assignments: Iterable[tuple[int, int]],
    dimension: int,
    side: Direction | str = Direction.FORWARD,
) -> list[tuple[int, tuple[int, ...]]]:
    """Output ports that multiple simultaneous senders would land on.

    ``assignments`` are (sender, winding) pairs.  Collisions are reported,
    not resolved: there is no arbitration mechanism in these networks.
    """
    forward = Direction.coerce(side) is Direction.FORWARD
    by_port: dict[int, list[int]] = {}
    for sender, winding in assignments:
        _check_index(sender, dimension, "sender")
        port = (
            (-winding - sender) % dimension
            if forward
            else (winding - sender) % dimension
        )
        by_port.setdefault(port, []).append(sender)
    return [
        (port, tuple(senders))
        for port, senders in sorted(by_port.items())
        if len(senders) > 1
    ]


def mux_transmit(qubits: Sequence[QubitSpec]) -> EnsembleState:
    """Merge ``len(qubits)`` users' photons onto path 0 (one per port)."""
    return MuxNetwork(len(qubits)).transmit(qubits)


def demux_receive(
    multiplexed: EnsembleState, restore_oam: bool = False
) -> EnsembleState:
    """Split a merged ensemble back onto per-user paths."""
    network = MuxNetwork(
        multiplexed.space.dimension, multiplexed.space.oam_window
    )
    return network.receive(multiplexed, restore_oam)


def star_deliver(
    sender: int,
    destination: int,
    dimension: int,
    payload: QubitSpec = QubitSpec(1, 0),
) -> PhotonState:
    """One-shot delivery through a freshly built star of ``dimension`` users."""
    return StarNetwork(dimension).deliver(sender, destination, payload)


def superposed_destination(
    sender: int,
    dimension: int,
    destinations: Sequence[tuple[int, complex]],
) -> PhotonState:
    """Send one photon toward a superposition of destinations.

    ``destinations`` holds (path, amplitude) pairs with distinct paths and
    unit total norm; by linearity each branch arrives on its own path with
    probability ``|amplitude|^2``.
    """
    star = StarNetwork(dimension)
    _check_index(sender, dimension, "sender")
    paths = [path for path, _ in destinations]
    if len(set(paths)) != len(paths):
        raise DomainError("destination paths must be distinct")
    norm_sq = sum(abs(amp) ** 2 for _, amp in destinations)
    if abs(norm_sq - 1.0) > NORM_TOL:
        raise NormalizationError(
            f"destination amplitudes norm^2 = {norm_sq!r}, expected 1"
        )
    for path, _ in destinations:
        _check_index(path, dimension, "destination")
    photon = PhotonState(
        star.space,
        {
            ModeLabel(sender, path, H): complex(amp)
            for path, amp in destinations
        },
    )
    return star.route_state(photon)


def distribute_bell_pair(
    x: int, y: int, n: int, m: int, dimension: int
) -> EnsembleState:
    """Route one polarization-entangled pair from input paths ``x, y`` to
    users ``n, m`` through the star.

    A ``+n`` hologram on path ``x`` and a ``+m`` hologram on path ``y`` give
    each photon the winding that steers it; entanglement rides along
    untouched because every element ignores polarization.
    """
    for name, value in (("x", x), ("y", y), ("n", n), ("m", m)):
        _check_index(value, dimension, name)
    if x == y:
        raise DomainError("both photons on one input path is out of scope")
    star = StarNetwork(dimension)
    space = star.space
    root_half = 1.0 / math.sqrt(2.0)
    pair = EnsembleState(
        space,
        2,
        {
            (ModeLabel(x, 0, H), ModeLabel(y, 0, V)): root_half,
            (ModeLabel(x, 0, V), ModeLabel(y, 0, H)): root_half,
        },
    )
    shifts = [0] * dimension
    shifts[x] = n
    shifts[y] = m
    addressed = apply_mode_map(pair, HologramBank(tuple(shifts)))
    return star.route_state(addressed)


def delivered_star_oam(sender: int, destination: int, dimension: int) -> int:
    """Exact winding the star delivers: congruent to ``sender`` mod ``D``."""
    bounce = (destination + sender) % dimension
    return bounce - destination


def bell_target(
    x: int, y: int, n: int, m: int, dimension: int
) -> EnsembleState:
    """Delivered-state template for :func:`distribute_bell_pair`."""
    space = ModeSpace(dimension)
    oam_x = delivered_star_oam(x, n, dimension)
    oam_y = delivered_star_oam(y, m, dimension)
    root_half = 1.0 / math.sqrt(2.0)
    return EnsembleState(
        space,
        2,
        {
            (ModeLabel(n, oam_x, H), ModeLabel(m, oam_y, V)): root_half,
            (ModeLabel(n, oam_x, V), ModeLabel(m, oam_y, H)): root_half,
        },
    )


def bell_distribution_fidelity(
    x: int, y: int, n: int, m: int, dimension: int
) -> float:
    """Fidelity of the routed pair against its delivered-state template."""
    return fidelity(
        distribute_bell_pair(x, y, n, m, dimension),
        bell_target(x, y, n, m, dimension),
    )


__all__ = [
    "HologramBank",
    "MuxNetwork",
    "REPORT_DIMENSION_MAX",
    "ReflectorBank",
    "ReportRow",
    "RoutingReport",
    "SimpleRoutingNetwork",
    "StarNetwork",
    "bell_distribution_fidelity",
    "bell_target",
    "choose_winding_simple",
    "delivered_star_oam",
    "demux_receive",
    "detect_collisions",
    "distribute_bell_pair",
    "mux_transmit",
    "routing_report",
    "sender_tag",
    "star_deliver",
    "superposed_destination",
]

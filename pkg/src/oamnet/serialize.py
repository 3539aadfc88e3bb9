"""Canonical JSON interchange for netlists, reports, and matrices.

The JSON output is deterministic byte for byte: objects serialize in
insertion order and every float is rendered with 17 significant digits,
enough to reconstruct the exact IEEE-754 double on any conforming parser.
Complex numbers are two-element ``[re, im]`` arrays; matrices are row-major
lists of those pairs in the fixed (path ascending, OAM ascending, H before
V) basis order.
"""

from __future__ import annotations

import json
import math
from typing import Any, Mapping

import numpy as np

from .elements import (
    BeamSplitter,
    DovePrism,
    Element,
    Hologram,
    Mirror,
    PhaseShifter,
    ReflectiveHologram,
)
from .errors import DomainError
from .netlist import Netlist


def _format_float(value: float) -> str:
    if math.isnan(value) or math.isinf(value):
        raise DomainError(f"non-finite float {value!r} is not serializable")
    return format(value, ".17g")


def dumps_canonical(value: Any) -> str:
    """Deterministic JSON text for plain dict/list/str/number/bool trees."""
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, Mapping):
        items = ", ".join(
            f"{json.dumps(str(key))}: {dumps_canonical(item)}"
            for key, item in value.items()
        )
        return "{" + items + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(dumps_canonical(item) for item in value) + "]"
    raise DomainError(f"cannot serialize {type(value).__name__}")


def complex_pair(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


def matrix_pairs(matrix: np.ndarray) -> list[list[list[float]]]:
    """Row-major ``[re, im]`` dump of a complex matrix."""
    array = np.asarray(matrix, dtype=complex)
    return [[complex_pair(entry) for entry in row] for row in array]


def element_to_dict(element: Element) -> dict[str, Any]:
    if isinstance(element, BeamSplitter):
        return {
            "type": "beamsplitter",
            "ports": [element.port_a, element.port_b],
            "theta": float(element.theta),
            "phi": float(element.phi),
        }
    if isinstance(element, PhaseShifter):
        return {"type": "phase", "port": element.port, "phi": float(element.phi)}
    if isinstance(element, DovePrism):
        return {"type": "dove", "port": element.port, "alpha": float(element.alpha)}
    if isinstance(element, Hologram):
        return {"type": "hologram", "port": element.port, "k": int(element.k)}
    if isinstance(element, ReflectiveHologram):
        return {
            "type": "reflective_hologram",
            "port": element.port,
            "k": int(element.k),
        }
    if isinstance(element, Mirror):
        return {"type": "mirror", "port": element.port}
    raise DomainError(f"unknown element {type(element).__name__}")


def element_from_dict(data: Mapping[str, Any]) -> Element:
    kind = data.get("type")
    try:
        if kind == "beamsplitter":
            port_a, port_b = data["ports"]
            return BeamSplitter(
                int(port_a), int(port_b), float(data["theta"]), float(data["phi"])
            )
        if kind == "phase":
            return PhaseShifter(int(data["port"]), float(data["phi"]))
        if kind == "dove":
            return DovePrism(int(data["port"]), float(data["alpha"]))
        if kind == "hologram":
            return Hologram(int(data["port"]), int(data["k"]))
        if kind == "reflective_hologram":
            return ReflectiveHologram(int(data["port"]), int(data["k"]))
        if kind == "mirror":
            return Mirror(int(data["port"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed element record: {data!r}") from exc
    raise DomainError(f"unknown element type {kind!r}")


def netlist_to_dict(
    netlist: Netlist, replay_error: float | None = None
) -> dict[str, Any]:
    data: dict[str, Any] = {
        "dimension": netlist.dimension,
        "parity_flip": netlist.parity_flip,
        "elements": [element_to_dict(element) for element in netlist.elements],
        "metadata": {},
    }
    if replay_error is not None:
        data["metadata"]["replay_error"] = float(replay_error)
    return data


def netlist_from_dict(data: Mapping[str, Any]) -> Netlist:
    try:
        dimension = int(data["dimension"])
        parity_flip = bool(data["parity_flip"])
        elements = tuple(
            element_from_dict(record) for record in data["elements"]
        )
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed netlist record: {exc}") from exc
    return Netlist(dimension, elements, parity_flip)


def netlist_dumps(netlist: Netlist, replay_error: float | None = None) -> str:
    return dumps_canonical(netlist_to_dict(netlist, replay_error)) + "\n"


def netlist_loads(text: str) -> Netlist:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DomainError("netlist document must be a JSON object")
    return netlist_from_dict(data)


__all__ = [
    "complex_pair",
    "dumps_canonical",
    "element_from_dict",
    "element_to_dict",
    "matrix_pairs",
    "netlist_dumps",
    "netlist_from_dict",
    "netlist_loads",
    "netlist_to_dict",
]

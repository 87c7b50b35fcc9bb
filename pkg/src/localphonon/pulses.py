"""Laser pulses as schedule segments.

A pulse of ground-state rotation angle ``theta`` on a transition driven with
half-Rabi frequency ``g`` lasts ``theta / (2 g)``. The sqrt(n+1) speed-up of
sideband transitions comes out of the Hamiltonian, never out of the duration
bookkeeping. Hopping stays on during pulses unless ``hopping=False``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Union

import numpy as np

from .chain import ChainGeometry
from .dynamics import Propagator, Segment, run_schedule
from .errors import ValidationError
from .hamiltonian import drive_term, hopping_hamiltonian
from .hilbert import HilbertSpec

_TRANSITION_ALIASES = {
    "carrier": "carrier",
    "carrier_dn_up": "carrier",
    "shelve": "shelve",
    "shelve_dn_e0": "shelve",
    "bsb": "bsb",
    "rsb": "rsb",
}


@dataclass(frozen=True)
class PulseEvent:
    ion: int
    transition: str
    theta: float
    phi: float = 0.0
    g: float = 1.0
    detuning: float = 0.0

    def __post_init__(self):
        try:
            object.__setattr__(self, "transition", _TRANSITION_ALIASES[self.transition.lower()])
        except KeyError:
            raise ValidationError(f"unknown transition {self.transition!r}") from None
        if self.theta < 0:
            raise ValidationError("pulse angle must be >= 0")
        if self.theta > 0 and not self.g > 0:
            raise ValidationError("a pulse with nonzero angle needs g > 0")

    @property
    def duration(self) -> float:
        return 0.0 if self.theta == 0 else self.theta / (2.0 * self.g)


@dataclass(frozen=True)
class Wait:
    duration: float

    def __post_init__(self):
        if self.duration < 0:
            raise ValidationError("wait duration must be >= 0")


@dataclass(frozen=True)
class Simultaneous:
    """Pulses on different ions driven at the same time; durations must agree."""

    events: tuple

    def __post_init__(self):
        events = tuple(self.events)
        object.__setattr__(self, "events", events)
        if not events:
            raise ValidationError("simultaneous block needs at least one pulse")
        ions = [e.ion for e in events]
        if len(set(ions)) != len(ions):
            raise ValidationError("simultaneous pulses must address distinct ions")
        d0 = events[0].duration
        if any(not math.isclose(e.duration, d0, rel_tol=1e-12, abs_tol=0.0) for e in events):
            raise ValidationError("simultaneous pulses must have equal durations")

    @property
    def duration(self) -> float:
        return self.events[0].duration


Item = Union[PulseEvent, Wait, Simultaneous]


@dataclass
class PulseSequence:
    items: list = field(default_factory=list)
    name: str = ""

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        name = "+".join(n for n in (self.name, other.name) if n)
        return PulseSequence(list(self.items) + list(other.items), name)

    @property
    def duration(self) -> float:
        return sum(item.duration for item in self.items)

    def pulses(self):
        for item in self.items:
            if isinstance(item, PulseEvent):
                yield item
            elif isinstance(item, Simultaneous):
                yield from item.events

    def to_dict(self) -> dict:
        out = []
        for item in self.items:
            if isinstance(item, PulseEvent):
                out.append({"type": "pulse", **asdict(item)})
            elif isinstance(item, Wait):
                out.append({"type": "wait", "duration": item.duration})
            else:
                out.append({"type": "simultaneous", "events": [asdict(e) for e in item.events]})
        return {"name": self.name, "items": out}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "PulseSequence":
        items = []
        for raw in data.get("items", []):
            raw = dict(raw)
            kind = raw.pop("type", "pulse")
            if kind == "pulse":
                items.append(PulseEvent(**raw))
            elif kind == "wait":
                items.append(Wait(raw["duration"]))
            elif kind == "simultaneous":
                items.append(Simultaneous(tuple(PulseEvent(**e) for e in raw["events"])))
            else:
                raise ValidationError(f"unknown sequence item type {kind!r}")
        return cls(items, data.get("name", ""))

    @classmethod
    def from_json(cls, text: str) -> "PulseSequence":
        return cls.from_dict(json.loads(text))


def _check_event(spec: HilbertSpec, event: PulseEvent):
    if not 0 <= event.ion < spec.ion_count:
        raise ValidationError(f"pulse addresses ion {event.ion} outside the chain")
    if event.transition == "shelve" and spec.internal_levels < 3:
        raise ValidationError("shelving pulse requires internal_levels = 3")


def pulse_segment(
    spec: HilbertSpec,
    geometry: ChainGeometry,
    event: PulseEvent | Simultaneous,
    hopping: bool = True,
    base: np.ndarray | None = None,
) -> Segment:
    """Segment for one pulse (or a block of simultaneous pulses).

    ``base`` overrides the background Hamiltonian (defaults to hopping, or
    zero when ``hopping`` is False).
    """
    events = event.events if isinstance(event, Simultaneous) else (event,)
    if base is None:
        base = hopping_hamiltonian(spec, geometry) if hopping else np.zeros((spec.dim, spec.dim), complex)
    h = np.array(base, dtype=complex)
    for e in events:
        _check_event(spec, e)
        h += drive_term(spec, e.ion, e.transition, e.g, e.phi, e.detuning)
    label = ",".join(f"{e.transition}[{e.ion}]" for e in events)
    return Segment(h, event.duration, label=label)


def sequence_segments(
    spec: HilbertSpec,
    geometry: ChainGeometry,
    sequence: PulseSequence,
    hopping: bool = True,
    channels_for: Callable[[str], tuple] | None = None,
) -> list[Segment]:
    """Translate a pulse sequence into schedule segments.

    ``channels_for(kind)`` supplies the noise channels of each segment, where
    kind is the driven transition (``"wait"`` for idle periods).
    """
    base = hopping_hamiltonian(spec, geometry) if hopping else np.zeros((spec.dim, spec.dim), complex)
    segments = []
    for item in sequence:
        if isinstance(item, Wait):
            seg = Segment(base, item.duration, label="wait")
            kind = "wait"
        else:
            seg = pulse_segment(spec, geometry, item, hopping, base=base)
            kind = (item.events[0] if isinstance(item, Simultaneous) else item).transition
        if channels_for is not None:
            seg = Segment(seg.hamiltonian, seg.duration, tuple(channels_for(kind)), seg.label)
        segments.append(seg)
    return segments


def apply_sequence(
    spec: HilbertSpec,
    geometry: ChainGeometry,
    sequence: PulseSequence,
    state,
    hopping: bool = True,
    channels_for=None,
):
    """Final state after running ``sequence`` on ``state``."""
    if len(sequence) == 0:
        return np.array(state, dtype=complex, copy=True)
    segments = sequence_segments(spec, geometry, sequence, hopping, channels_for)
    return run_schedule(segments, initial=state).final


def sequence_unitary(spec: HilbertSpec, geometry: ChainGeometry, sequence: PulseSequence, hopping=True):
    """Product of the segment propagators, rightmost = first applied."""
    u = np.eye(spec.dim, dtype=complex)
    for seg in sequence_segments(spec, geometry, sequence, hopping):
        u = Propagator(seg.hamiltonian).unitary(seg.duration) @ u
    return u


def bsb(ion, theta, g, phi=0.0, detuning=0.0) -> PulseEvent:
    return PulseEvent(ion, "bsb", theta, phi, g, detuning)


def carrier(ion, theta, g, phi=0.0) -> PulseEvent:
    return PulseEvent(ion, "carrier", theta, phi, g)


def shelve(ion, theta, g, phi=0.0) -> PulseEvent:
    return PulseEvent(ion, "shelve", theta, phi, g)


def composite_cp(ion: int, g: float) -> PulseSequence:
    """Three-pulse BSB composite that flips |down,0>-|up,1> and |down,1>-|up,2> together.

    Written as R(pi/2, 0) R(pi/sqrt2, pi/2) R(pi/2, 0); items are in
    application order (the rightmost factor first).
    """
    if not g > 0:
        raise ValidationError("g must be positive")
    return PulseSequence(
        [
            bsb(ion, math.pi / 2, g, 0.0),
            bsb(ion, math.pi / math.sqrt(2), g, math.pi / 2),
            bsb(ion, math.pi / 2, g, 0.0),
        ],
        name="composite_cp",
    )


def parallel(events) -> Simultaneous:
    return Simultaneous(tuple(events))


def prep_sequence(experiment: str, spec: HilbertSpec, geometry: ChainGeometry | None, g: float) -> PulseSequence:
    """State preparation from |down 0, down 0>.

    * ``fig2``: BSB pi on ion 0, carrier pi on both ions, then a BSB pulse on
      both ions whose angle pi/sqrt2 is a pi rotation on |down,1>-|up,2>;
      ion 1 sits in the dark state |up,0> during the last pulse. Target
      |up 2, up 0>.
    * ``fig3``: BSB pi on both ions. Target |up 1, up 1>.
    """
    if spec.ion_count != 2 or (geometry is not None and geometry.ion_count != 2):
        raise ValidationError("preparation sequences are defined for two ions")
    if not g > 0:
        raise ValidationError("g must be positive")
    experiment = experiment.lower()
    if experiment == "fig2":
        items = [
            bsb(0, math.pi, g),
            parallel([carrier(0, math.pi, g), carrier(1, math.pi, g)]),
            parallel([bsb(0, math.pi / math.sqrt(2), g), bsb(1, math.pi / math.sqrt(2), g)]),
        ]
    elif experiment == "fig3":
        items = [parallel([bsb(0, math.pi, g), bsb(1, math.pi, g)])]
    else:
        raise ValidationError(f"unknown preparation {experiment!r}")
    return PulseSequence(items, name=f"{experiment}_prep")

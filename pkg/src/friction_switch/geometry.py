"""Groove and pin layout of the adaptive pulley segment."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CapacityError, DomainError

__all__ = [
    "GrooveLayout",
    "PinConfiguration",
    "uniform_configuration",
    "spanned_angle",
    "estimate_weight",
    "reference_configurations",
]

# the stated segment angle is half a pitch off 15 * pitch; tolerate that
_SEGMENT_SLACK_DEG = 0.05 + 1e-9


@dataclass(frozen=True)
class GrooveLayout:
    """Circle-segment groove layout. Angles in degrees, lengths in millimetres.

    ``pin_diameter_tolerance`` is carried as metadata only.
    """

    groove_count: int = 15
    groove_pitch: float = 5.96
    segment_angle: float = 89.45
    groove_radius: float = 0.5
    pin_diameter: float = 0.94
    pin_diameter_tolerance: float = 0.01
    substrate_thickness: float = 2.0
    tendon_contact_angle: float = 63.89

    def __post_init__(self):
        if self.groove_count < 1:
            raise DomainError("groove_count must be >= 1")
        for name in ("groove_pitch", "segment_angle", "groove_radius", "pin_diameter", "substrate_thickness"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0")
        if self.pin_diameter_tolerance < 0:
            raise DomainError("pin_diameter_tolerance must be >= 0")
        if abs(self.groove_count * self.groove_pitch - self.segment_angle) > _SEGMENT_SLACK_DEG:
            raise DomainError(
                f"groove_count * groove_pitch = {self.groove_count * self.groove_pitch:.4f} deg "
                f"does not match segment_angle {self.segment_angle} deg"
            )
        if not self.pin_diameter < 2 * self.groove_radius + self.pin_diameter_tolerance:
            raise DomainError("pin_diameter does not seat in a groove of groove_radius")
        if not 0 < self.tendon_contact_angle <= self.segment_angle:
            raise DomainError("tendon_contact_angle must lie in (0, segment_angle]")

    @property
    def tendon_contact_angle_rad(self) -> float:
        return math.radians(self.tendon_contact_angle)


@dataclass(frozen=True)
class PinConfiguration:
    occupied_grooves: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        grooves = tuple(int(g) for g in self.occupied_grooves)
        if not grooves:
            raise DomainError("a pin configuration needs at least one pin")
        if len(set(grooves)) != len(grooves):
            raise DomainError(f"duplicate groove indices in {grooves}")
        if any(g < 0 for g in grooves):
            raise DomainError(f"groove indices must be >= 0, got {grooves}")
        object.__setattr__(self, "occupied_grooves", tuple(sorted(grooves)))

    @property
    def pin_count(self) -> int:
        return len(self.occupied_grooves)

    def check(self, layout: GrooveLayout) -> "PinConfiguration":
        if self.occupied_grooves[-1] >= layout.groove_count:
            raise CapacityError(
                f"groove index {self.occupied_grooves[-1]} exceeds layout with {layout.groove_count} grooves"
            )
        return self

    def canonical(self) -> "PinConfiguration":
        """Shift so the first pin sits in groove 0."""
        first = self.occupied_grooves[0]
        return PinConfiguration(tuple(g - first for g in self.occupied_grooves), self.label)


def uniform_configuration(pin_count: int, gap: int, layout: GrooveLayout, label: str = "") -> PinConfiguration:
    """``pin_count`` pins with ``gap`` empty grooves between neighbours, starting at groove 0."""
    if pin_count < 1:
        raise DomainError("pin_count must be >= 1")
    if gap < 0:
        raise DomainError("gap must be >= 0")
    pitch = gap + 1
    if (pin_count - 1) * pitch >= layout.groove_count:
        raise CapacityError(
            f"{pin_count} pins with gap {gap} need {(pin_count - 1) * pitch + 1} grooves, "
            f"layout has {layout.groove_count}"
        )
    return PinConfiguration(tuple(range(0, pin_count * pitch, pitch)), label)


def spanned_angle(config: PinConfiguration, layout: GrooveLayout) -> float:
    """Angle in degrees between the first and last occupied grooves."""
    config.check(layout)
    return (config.occupied_grooves[-1] - config.occupied_grooves[0]) * layout.groove_pitch


def estimate_weight(config: PinConfiguration, layout: GrooveLayout, pulley_radius: float = 22.0) -> float:
    """Arc fraction of the tendon contact covered by pins, clamped to 0.5.

    A coverage heuristic for the blend weight; ``pulley_radius`` in mm.
    """
    if not pulley_radius > 0:
        raise DomainError("pulley_radius must be > 0")
    config.check(layout)
    arc = pulley_radius * layout.tendon_contact_angle_rad
    return min(0.5, config.pin_count * layout.pin_diameter / arc)


def reference_configurations(layout: GrooveLayout | None = None) -> dict[str, PinConfiguration]:
    """The three tested pin arrangements keyed by short name."""
    layout = layout or GrooveLayout()
    return {
        "six-single": uniform_configuration(6, 1, layout, "six pins, single spacing"),
        "three-double": uniform_configuration(3, 2, layout, "three pins, double spacing"),
        "three-single": uniform_configuration(3, 1, layout, "three pins, single spacing"),
    }

"""Door-crossing detection and environment switching.

Arms when the track enters a door's crossing area, then watches two pieces
of evidence: a door-opening event from the accelerometer and a geometric
crossing of the door's zone segment by the per-step path segment. Only when
both land within a bounded number of steps of each other does the tracker
switch environments.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Mapping

from . import filters
from .errors import InvalidParameterError, StateInconsistencyError
from .geometry import CrossingZone, Door, Point2, Segment2, distance, segment_intersection, zone_for_door
from .pdr import Pose

IDLE = "IDLE"
ARMED = "ARMED"


@dataclass(frozen=True)
class CrossingConfig:
    zone_width: float = 5.0
    area_radius: float = 5.0
    coincidence_steps: int = 5

    def __post_init__(self):
        if self.zone_width <= 0 or self.area_radius <= 0 or self.coincidence_steps <= 0:
            raise InvalidParameterError("crossing parameters must be positive")


@dataclass(frozen=True)
class CrossingState:
    """Detector state; the pending evidence is the latest record of each kind."""

    environment: str
    phase: str = IDLE
    armed_door: str | None = None
    last_crossing: tuple[int, Point2] | None = None  # (step index, crossing point)
    last_door_open: int | None = None  # step index

    def __post_init__(self):
        if (self.phase == ARMED) != (self.armed_door is not None):
            raise StateInconsistencyError("armed_door present iff phase is ARMED")


@dataclass(frozen=True)
class SwitchEvent:
    step_index: int
    door_id: str
    crossing_point: Point2
    from_env: str
    to_env: str


def build_zone_lookup(doors: tuple[Door, ...] | list[Door], cfg: CrossingConfig) -> dict[str, tuple[Door, CrossingZone]]:
    """Door id -> (door, crossing zone of configured width)."""
    return {d.id: (d, zone_for_door(d, cfg.zone_width)) for d in doors}


def arm_check(state: CrossingState, pose_position: Point2, doors, cfg: CrossingConfig) -> CrossingState:
    """Arm near a door, disarm (and drop evidence) on leaving the armed area."""
    if state.phase == IDLE:
        best = None
        for door in doors:
            d = distance(pose_position, door.center)
            if d <= cfg.area_radius and (best is None or d < best[0]):
                best = (d, door)
        if best is not None:
            return CrossingState(environment=state.environment, phase=ARMED, armed_door=best[1].id)
        return state
    armed = next((d for d in doors if d.id == state.armed_door), None)
    if armed is None or distance(pose_position, armed.center) > cfg.area_radius:
        return CrossingState(environment=state.environment)
    return state


def observe_step(
    state: CrossingState,
    step_index: int,
    prev_pos: Point2,
    cur_pos: Point2,
    door_opened_now: bool,
    cfg: CrossingConfig,
    zones: Mapping[str, tuple[Door, CrossingZone]],
) -> tuple[CrossingState, SwitchEvent | None]:
    """Feed one step of evidence; emit a SwitchEvent on door-open/crossing coincidence.

    No-op while IDLE. Evidence older than coincidence_steps behind the
    current step is pruned; the coincidence test is order-independent and
    inclusive (|crossing step - door-open step| <= coincidence_steps).
    """
    if state.phase == IDLE:
        return state, None

    last_door_open = state.last_door_open
    last_crossing = state.last_crossing
    if last_door_open is not None and step_index - last_door_open > cfg.coincidence_steps:
        last_door_open = None
    if last_crossing is not None and step_index - last_crossing[0] > cfg.coincidence_steps:
        last_crossing = None

    if door_opened_now:
        last_door_open = step_index
    door, zone = zones[state.armed_door]
    if (prev_pos.x, prev_pos.y) != (cur_pos.x, cur_pos.y):
        point = segment_intersection(zone.segment, Segment2(prev_pos, cur_pos))
        if point is not None:
            last_crossing = (step_index, point)

    if (
        last_door_open is not None
        and last_crossing is not None
        and abs(last_crossing[0] - last_door_open) <= cfg.coincidence_steps
    ):
        to_env = door.other_side(state.environment)
        event = SwitchEvent(
            step_index=step_index,
            door_id=door.id,
            crossing_point=last_crossing[1],
            from_env=state.environment,
            to_env=to_env,
        )
        return CrossingState(environment=to_env), event

    return (
        dataclasses.replace(state, last_door_open=last_door_open, last_crossing=last_crossing),
        None,
    )


def on_switch(tracker, ev: SwitchEvent, pf_cfg: filters.PfConfig, kf_cfg: filters.KfConfig):
    """Apply a switch to the tracker: flip environment and swap the back-end.

    Indoor gets a fresh particle cloud at the crossing point; outdoor gets a
    Kalman heading filter seeded with the current heading.
    """
    if ev.from_env != tracker.environment:
        raise StateInconsistencyError(
            f"switch from {ev.from_env!r} but tracker is in {tracker.environment!r}"
        )
    if ev.to_env == tracker.indoor_label:
        pf = filters.pf_init(
            Pose(ev.crossing_point, tracker.pose.heading),
            pf_cfg,
            seed=tracker.seed + ev.step_index + 1,
        )
        return dataclasses.replace(tracker, environment=ev.to_env, active_filter="PF", pf=pf, kf=None)
    kf = filters.kf_init(tracker.pose.heading)
    return dataclasses.replace(tracker, environment=ev.to_env, active_filter="KF", pf=None, kf=kf)

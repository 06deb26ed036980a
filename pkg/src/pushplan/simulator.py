"""Quasi-static forward simulation of planned actions.

Motion is axis-aligned and translation-only: the pusher's leading face
carries whatever it meets, contact propagates transitively down the line,
and nothing ever moves against the push direction during the sweep itself.
Failures of unsafe maneuvers are reported as events, not exceptions, so the
planner's admissibility checks can be audited against what the physics
actually does.  Optional placement noise models imprecise dropping and the
slight wobble of pushed objects.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .geometry import Rect, Side, Vec2, axis_coord, axis_extent, contains, overlaps, perp_coord, rect_from_center
from .scene import (
    DEFAULT_CLEARANCE,
    Action,
    Arrangement,
    InfeasibleActionError,
    PickPlace,
    PushPlace,
    Scene,
    blockers_of,
    validate_action,
)

# Clamped objects come to rest this far inside the table edge.  Meters.
EDGE_REST_INSET = 0.001


class SimulationError(RuntimeError):
    """The simulated state could not be resolved into a valid scene."""


class SimEventKind(Enum):
    PUSHED = "pushed"
    SECONDARY_CONTACT = "secondary_contact"
    LEFT_TABLE = "left_table"


@dataclass(frozen=True, slots=True)
class SimEvent:
    kind: SimEventKind
    object: int
    detail: str = ""


@dataclass(frozen=True, slots=True)
class NoiseConfig:
    """Uniform placement disturbances.  Sigmas are half-widths in meters."""

    lateral_sigma: float = 0.003
    depth_sigma: float = 0.002
    enabled: bool = False


NO_NOISE = NoiseConfig(enabled=False)


def _lat_interval(r: Rect, side: Side) -> tuple[float, float]:
    return (r.lo.y, r.hi.y) if side.horizontal else (r.lo.x, r.hi.x)


@dataclass(slots=True)
class _Mover:
    obj: int
    lat_lo: float
    lat_hi: float
    start_front: float
    final_front: float
    layer: int


def push_forward(
    scene: Scene, target: int, side: Side, start: Vec2, end: Vec2
) -> tuple[Arrangement, list[SimEvent]]:
    """Sweep ``target`` from ``start`` to ``end`` and resolve the contact chain.

    Any object whose trailing face the advancing front passes rides along in
    face contact; a carried object in turn carries what it meets.  Objects
    contacted directly by the target yield Pushed events; contacts further
    down the chain yield SecondaryContact.  Positions are returned raw (no
    table-edge handling); the target itself ends at ``end``.

    ``start`` and ``end`` must differ only along the travel axis of ``side``
    and the travel must be non-negative.  The target's footprint at ``start``
    is assumed collision-free.
    """
    u = side.unit
    delta = end - start
    travel = delta.x * u.x + delta.y * u.y
    lateral = perp_coord(end, side) - perp_coord(start, side)
    if abs(lateral) > 1e-9:
        raise ValueError(f"push endpoints differ across the travel axis by {lateral}")
    if travel < 0.0:
        raise ValueError(f"push travel must be non-negative, got {travel}")

    start_rect = rect_from_center(start, scene.objects[target].half)
    lat_lo, lat_hi = _lat_interval(start_rect, side)
    front0 = axis_extent(start_rect, side)[1]
    movers = [_Mover(target, lat_lo, lat_hi, front0, front0 + travel, 0)]

    poses = list(scene.current)
    poses[target] = end
    events: list[SimEvent] = []

    order = sorted(
        (j for j in range(scene.n) if j != target),
        key=lambda j: (axis_extent(scene.footprint(j), side)[0], j),
    )
    for j in order:
        foot = scene.footprint(j)
        near, far = axis_extent(foot, side)
        jlo, jhi = _lat_interval(foot, side)
        best: Optional[_Mover] = None
        for m in movers:
            if m.lat_lo < jhi and jlo < m.lat_hi and m.start_front <= near and m.final_front > near:
                if best is None or m.final_front > best.final_front:
                    best = m
        if best is None:
            continue
        d = best.final_front - near
        poses[j] = poses[j] + u * d
        layer = best.layer + 1
        movers.append(_Mover(j, jlo, jhi, far, far + d, layer))
        if layer == 1:
            events.append(SimEvent(SimEventKind.PUSHED, j, f"pushed {d:.6f} m by the target"))
        else:
            events.append(
                SimEvent(
                    SimEventKind.SECONDARY_CONTACT,
                    j,
                    f"contact chain: pushed {d:.6f} m by object {best.obj}",
                )
            )
    return tuple(poses), events


def _clamp_box(scene: Scene) -> Rect:
    w = scene.workspace
    return Rect(
        Vec2(w.lo.x + EDGE_REST_INSET, w.lo.y + EDGE_REST_INSET),
        Vec2(w.hi.x - EDGE_REST_INSET, w.hi.y - EDGE_REST_INSET),
    )


def _clamp_pose(scene: Scene, obj: int, pose: Vec2, box: Rect) -> tuple[Vec2, bool]:
    """Clamp the footprint of ``obj`` at ``pose`` into ``box``; flag if moved."""
    half = scene.objects[obj].half
    x = min(max(pose.x, box.lo.x + half.a), box.hi.x - half.a)
    y = min(max(pose.y, box.lo.y + half.b), box.hi.y - half.b)
    clipped = (x != pose.x) or (y != pose.y)
    return Vec2(x, y), clipped


def _relax_off_table(
    scene: Scene, poses: list[Vec2], moved: list[int], side: Side, target: int
) -> list[SimEvent]:
    """Pull anything driven past the table edge back inside, propagating down
    the chain so no overlap is introduced.  Emits LeftTable per clamped object."""
    wall = axis_extent(scene.workspace, side)[1] - EDGE_REST_INSET
    clamped: set[int] = set()

    def rect_of(j: int) -> Rect:
        return rect_from_center(poses[j], scene.objects[j].half)

    for _ in range(4 * max(1, len(moved))):
        changed = False
        for j in sorted(moved, key=lambda j: -axis_extent(rect_of(j), side)[0]):
            r = rect_of(j)
            near, far = axis_extent(r, side)
            jlo, jhi = _lat_interval(r, side)
            limit = wall
            for k in range(scene.n):
                if k == j or k == target:
                    continue
                rk = rect_of(k)
                knear = axis_extent(rk, side)[0]
                klo, khi = _lat_interval(rk, side)
                if klo < jhi and jlo < khi and knear >= near:
                    limit = min(limit, knear)
            if far > limit + 1e-12:
                poses[j] = poses[j] + side.unit * (limit - far)
                clamped.add(j)
                changed = True
        if not changed:
            break
    return [
        SimEvent(SimEventKind.LEFT_TABLE, j, "driven past the table edge; clamped inside")
        for j in sorted(clamped)
    ]


def _resolve_residual_overlaps(scene: Scene, poses: list[Vec2], moved: list[int], side: Side) -> None:
    """Last-resort lateral slide for objects squeezed between the edge clamp
    and something immovable.  Unreachable for admissible pushes."""
    for _ in range(len(moved) + 1):
        conflict = None
        for j in moved:
            rj = rect_from_center(poses[j], scene.objects[j].half)
            for k in range(scene.n):
                if k != j and overlaps(rj, rect_from_center(poses[k], scene.objects[k].half)):
                    conflict = j
                    break
            if conflict is not None:
                break
        if conflict is None:
            return
        j = conflict
        half = scene.objects[j].half
        hw = half.b if side.horizontal else half.a
        cur = perp_coord(poses[j], side)
        candidates: list[float] = []
        for k in range(scene.n):
            if k == j:
                continue
            rk = rect_from_center(poses[k], scene.objects[k].half)
            klo, khi = _lat_interval(rk, side)
            candidates.extend((khi + hw, klo - hw))
        box = _clamp_box(scene)
        blo, bhi = _lat_interval(box, side)
        ok = []
        for c in sorted(candidates, key=lambda c: abs(c - cur)):
            if not (blo + hw <= c <= bhi - hw):
                continue
            pose = Vec2(poses[j].x, c) if side.horizontal else Vec2(c, poses[j].y)
            r = rect_from_center(pose, half)
            if not any(
                overlaps(r, rect_from_center(poses[k], scene.objects[k].half))
                for k in range(scene.n)
                if k != j
            ):
                ok.append(pose)
                break
        if not ok:
            raise SimulationError(f"object {j} is squeezed off the table with no free slot")
        poses[j] = ok[0]


def _settle_with_noise(
    scene: Scene,
    poses: list[Vec2],
    obj: int,
    drift: Vec2,
    box: Rect,
) -> bool:
    """Move ``obj`` by as much of ``drift`` as fits without creating overlap.

    Halves the drift until the clamped pose is free; zero drift (the already
    settled pose) always succeeds.  Returns True if the edge clamp engaged.
    """
    base = poses[obj]
    t = 1.0
    while True:
        cand, clipped = _clamp_pose(scene, obj, base + drift * t, box)
        r = rect_from_center(cand, scene.objects[obj].half)
        free = not any(
            overlaps(r, rect_from_center(poses[k], scene.objects[k].half))
            for k in range(scene.n)
            if k != obj
        )
        if free:
            poses[obj] = cand
            return clipped and t > 0.0
        if t < 1e-6:
            return False
        t /= 2.0


def simulate(
    scene: Scene,
    action: Action,
    noise: NoiseConfig = NO_NOISE,
    rng: Optional[random.Random] = None,
    clearance: float = DEFAULT_CLEARANCE,
) -> tuple[Scene, list[SimEvent]]:
    """Physics-level outcome of one action, plus what happened along the way.

    With noise disabled this agrees with ``scene.apply_action`` exactly (to
    float noise) for any admissible push.  Unsafe pushes are simulated, not
    rejected: extra contacts surface as SecondaryContact events and anything
    driven off the table is clamped just inside the edge with a LeftTable
    event.  The returned scene is always valid.

    Raises InfeasibleActionError for a pre-push pose whose footprint collides
    or hangs off the table, and for an occupied PickPlace destination.
    """
    if noise.enabled and rng is None:
        raise ValueError("noise is enabled but no rng was provided")
    if not (0 <= action.object < scene.n):
        raise InfeasibleActionError(f"action references unknown object {action.object}")
    box = _clamp_box(scene)

    if isinstance(action, PickPlace):
        validate_action(scene, action, clearance)
        poses = list(scene.current)
        poses[action.object] = action.destination
        if noise.enabled:
            drift = Vec2(
                rng.uniform(-noise.depth_sigma, noise.depth_sigma),
                rng.uniform(-noise.lateral_sigma, noise.lateral_sigma),
            )
            # Placement error stays on the table but may rest flush at the edge.
            _settle_with_noise(scene, poses, action.object, drift, scene.workspace)
        return replace(scene, current=tuple(poses)), []

    target = action.object
    side = action.side
    goal = scene.goal[target]
    p0 = action.pre_push
    if abs(perp_coord(p0, side) - perp_coord(goal, side)) > 1e-9:
        raise InfeasibleActionError(
            f"pre-push pose of object {target} is not aligned with its goal across side '{side.value}'"
        )
    if axis_coord(goal, side) < axis_coord(p0, side):
        raise InfeasibleActionError(
            f"pre-push pose of object {target} lies beyond its goal along side '{side.value}'"
        )
    p0_rect = rect_from_center(p0, scene.objects[target].half)
    if not contains(scene.workspace, p0_rect):
        raise InfeasibleActionError(f"pre-push footprint of object {target} leaves the workspace")
    for j in range(scene.n):
        if j != target and overlaps(p0_rect, scene.footprint(j)):
            raise InfeasibleActionError(f"pre-push footprint of object {target} overlaps object {j}")

    # Sweep one clearance past the goal so every carried object ends clear of
    # the goal region with a visible gap, then set the grasped target down on
    # the goal itself.
    sweep_end = goal + side.unit * clearance
    raw_poses, raw_events = push_forward(scene, target, side, p0, sweep_end)
    poses = list(raw_poses)
    poses[target] = goal

    blockers = blockers_of(scene, target)
    events: list[SimEvent] = []
    moved = []
    for ev in raw_events:
        moved.append(ev.object)
        if ev.object in blockers:
            events.append(SimEvent(SimEventKind.PUSHED, ev.object, ev.detail))
        else:
            events.append(SimEvent(SimEventKind.SECONDARY_CONTACT, ev.object, ev.detail))

    events.extend(_relax_off_table(scene, poses, moved, side, target))
    _resolve_residual_overlaps(scene, poses, moved, side)

    if noise.enabled:
        for j in sorted(moved):
            depth = rng.uniform(-noise.depth_sigma, noise.depth_sigma)
            lat = rng.uniform(-noise.lateral_sigma, noise.lateral_sigma)
            u = side.unit
            drift = u * depth + Vec2(-u.y, u.x) * lat
            if _settle_with_noise(scene, poses, j, drift, box):
                events.append(
                    SimEvent(SimEventKind.LEFT_TABLE, j, "noise drift reached the table edge; clamped")
                )

    return replace(scene, current=tuple(poses)), events

"""Push-assisted placement: side selection, admissibility, and buffer poses.

A push proposal sweeps the grasped target in a straight line through its goal
region, shoving every blocker ahead of its leading face until the region is
clear, then sets the target down on the goal.  A side is admissible only when
the maneuver provably touches nothing but the blockers and strands nothing
near a table edge:

* each blocker, shifted along the side, stays on the table with a margin;
* the corridor each blocker sweeps is empty, so no contact chains form;
* the target fits at the pre-push pose and its own approach corridor is
  empty of everything except the blockers it is about to push.

Sides are tried in a fixed order and the first admissible one wins, so at
most four sides are ever evaluated and each side does work linear in the
number of blockers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .geometry import (
    Side,
    Vec2,
    axis_coord,
    axis_extent,
    contains,
    overlaps,
    rect_from_center,
    sweep,
    translate,
)
from .scene import (
    DEFAULT_CLEARANCE,
    InfeasibleActionError,
    PushPlace,
    Scene,
    blockers_of,
    unsatisfied_ids,
)

DEFAULT_EDGE_MARGIN = 0.01
DEFAULT_SIDE_ORDER = (Side.LEFT, Side.RIGHT, Side.UP, Side.DOWN)


@dataclass(frozen=True, slots=True)
class PushConfig:
    """Tunables of the push maneuver.  Lengths are meters."""

    clearance: float = DEFAULT_CLEARANCE
    edge_margin: float = DEFAULT_EDGE_MARGIN
    side_order: tuple[Side, ...] = DEFAULT_SIDE_ORDER


@dataclass(slots=True)
class PushStats:
    """Work counters for the admissibility scan, for complexity assertions."""

    sides_evaluated: int = 0
    pair_checks: int = 0
    p0_checks: int = 0


@dataclass(frozen=True, slots=True)
class PushProposal:
    """An admissible push: where to start, which way to sweep, who moves how far."""

    target: int
    side: Side
    pre_push: Vec2
    blocker_moves: tuple[tuple[int, float], ...]
    goal_pose: Vec2

    def as_action(self) -> PushPlace:
        return PushPlace(self.target, self.side, self.pre_push)


def blocker_displacement(
    scene: Scene, blocker: int, target: int, side: Side, clearance: float = DEFAULT_CLEARANCE
) -> float:
    """Travel needed for ``blocker`` to clear ``target``'s goal region plus clearance.

    The blocker ends with its trailing face ``clearance`` past the goal
    region's far edge along the travel direction.  Strictly positive.
    """
    goal_rect = scene.goal_footprint(target)
    foot = scene.footprint(blocker)
    if not overlaps(foot, goal_rect):
        raise ValueError(f"object {blocker} does not block the goal region of object {target}")
    goal_far = axis_extent(goal_rect, side)[1]
    near = axis_extent(foot, side)[0]
    return goal_far - near + clearance


def corridor_clear(
    scene: Scene,
    blocker: int,
    side: Side,
    displacement: float,
    exclude: frozenset[int] = frozenset(),
) -> bool:
    """True iff the region ``blocker`` sweeps while displaced is empty.

    The blocker itself is always ignored; callers additionally pass the
    grasped target in ``exclude`` since it is held above the table.  Other
    blockers are *not* excluded: a blocker in another's path is exactly the
    contact chain this check exists to reject.
    """
    region = sweep(scene.footprint(blocker), side, displacement)
    for j in range(scene.n):
        if j == blocker or j in exclude:
            continue
        if overlaps(region, scene.footprint(j)):
            return False
    return True


def edge_safe(scene: Scene, blocker: int, side: Side, displacement: float, margin: float) -> bool:
    """True iff the blocker's post-push footprint keeps ``margin`` from every table edge."""
    r = translate(scene.footprint(blocker), side.unit * displacement)
    w = scene.workspace
    return (
        r.lo.x >= w.lo.x + margin
        and r.lo.y >= w.lo.y + margin
        and r.hi.x <= w.hi.x - margin
        and r.hi.y <= w.hi.y - margin
    )


def _half_along(scene: Scene, obj: int, side: Side) -> float:
    half = scene.objects[obj].half
    return half.a if side.horizontal else half.b


def _evaluate_side(
    scene: Scene,
    target: int,
    side: Side,
    cfg: PushConfig,
    stats: Optional[PushStats],
) -> tuple[Optional[PushProposal], str]:
    """Try one side; return (proposal, "") or (None, reason)."""
    blockers = sorted(blockers_of(scene, target))
    if stats is not None:
        stats.sides_evaluated += 1
    goal_pose = scene.goal[target]
    goal_far = axis_extent(scene.goal_footprint(target), side)[1]
    grasped = frozenset((target,))

    moves: list[tuple[int, float]] = []
    for b in blockers:
        near = axis_extent(scene.footprint(b), side)[0]
        d = goal_far - near + cfg.clearance
        if stats is not None:
            stats.pair_checks += 1
        if not edge_safe(scene, b, side, d, cfg.edge_margin):
            return None, f"blocker {b} would end within {cfg.edge_margin} m of a table edge"
        if not corridor_clear(scene, b, side, d, exclude=grasped):
            return None, f"push corridor of blocker {b} is not empty"
        moves.append((b, d))

    # Conservative: independent per-blocker displacements must not collide.
    u = side.unit
    post = [translate(scene.footprint(b), u * d) for b, d in moves]
    for i in range(len(post)):
        for j in range(i + 1, len(post)):
            if overlaps(post[i], post[j]):
                return None, f"post-push footprints of blockers {moves[i][0]} and {moves[j][0]} overlap"

    # Pre-push pose: leading face one clearance behind the outermost blocker,
    # i.e. the one protruding farthest toward the approach.  That puts the
    # target behind every blocker so a single sweep collects them all.
    min_near = min(axis_extent(scene.footprint(b), side)[0] for b, _ in moves)
    h = _half_along(scene, target, side)
    p0_axis = (min_near - cfg.clearance) - h
    goal_axis = axis_coord(goal_pose, side)
    p0 = goal_pose + u * (p0_axis - goal_axis)

    if stats is not None:
        stats.p0_checks += 1
    p0_rect = rect_from_center(p0, scene.objects[target].half)
    if not contains(scene.workspace, p0_rect):
        return None, "pre-push footprint leaves the workspace"
    for j in range(scene.n):
        if j != target and overlaps(p0_rect, scene.footprint(j)):
            return None, f"pre-push footprint overlaps object {j}"

    # The target's own sweep (through the goal plus the clearance overshoot)
    # may touch blockers only.
    travel = (goal_axis - p0_axis) + cfg.clearance
    approach = sweep(p0_rect, side, travel)
    blocker_set = frozenset(b for b, _ in moves)
    for j in range(scene.n):
        if j == target or j in blocker_set:
            continue
        if overlaps(approach, scene.footprint(j)):
            return None, f"approach corridor is blocked by non-blocker object {j}"

    return PushProposal(target, side, p0, tuple(moves), goal_pose), ""


def select_push(
    scene: Scene, target: int, cfg: PushConfig = PushConfig(), stats: Optional[PushStats] = None
) -> Optional[PushProposal]:
    """First admissible push for ``target``, trying sides in ``cfg.side_order``.

    Returns None when no side is admissible.  Raises ValueError when the
    target's goal region has no blockers (there is nothing to push).
    """
    if not blockers_of(scene, target):
        raise ValueError(f"object {target} has no blockers; a plain placement suffices")
    for side in cfg.side_order:
        proposal, _ = _evaluate_side(scene, target, side, cfg, stats)
        if proposal is not None:
            return proposal
    return None


def validate_push_action(scene: Scene, action: PushPlace, clearance: float = DEFAULT_CLEARANCE) -> PushProposal:
    """Re-derive the proposal for an action and check the action matches it.

    Validation uses a zero edge margin: the margin is a planning-time safety
    buffer, while feasibility only requires everything to stay on the table.
    Raises InfeasibleActionError naming the violated condition.
    """
    if not blockers_of(scene, action.object):
        raise InfeasibleActionError(
            f"push of object {action.object} with no blockers in its goal region"
        )
    cfg = PushConfig(clearance=clearance, edge_margin=0.0)
    proposal, reason = _evaluate_side(scene, action.object, action.side, cfg, None)
    if proposal is None:
        raise InfeasibleActionError(
            f"push of object {action.object} along side '{action.side.value}' is inadmissible: {reason}"
        )
    if (proposal.pre_push - action.pre_push).norm() > 1e-9:
        raise InfeasibleActionError(
            f"pre-push pose {action.pre_push} does not match the admissible pose "
            f"{proposal.pre_push} for side '{action.side.value}'"
        )
    return proposal


def sample_buffer_pose(
    scene: Scene, obj: int, rng: random.Random, max_attempts: int = 100
) -> Optional[Vec2]:
    """Uniformly sample a parking pose for ``obj`` by rejection.

    The pose must keep the footprint on the table, overlap no other object's
    current footprint, and overlap no goal footprint of an object that still
    has somewhere to be (parking on top of pending goals just creates new
    blockers).  Returns None after ``max_attempts`` rejections.
    """
    half = scene.objects[obj].half
    w = scene.workspace
    xlo, xhi = w.lo.x + half.a, w.hi.x - half.a
    ylo, yhi = w.lo.y + half.b, w.hi.y - half.b
    if xlo > xhi or ylo > yhi:
        return None
    pending = unsatisfied_ids(scene)
    for _ in range(max_attempts):
        pose = Vec2(rng.uniform(xlo, xhi), rng.uniform(ylo, yhi))
        r = rect_from_center(pose, half)
        if any(overlaps(r, scene.footprint(j)) for j in range(scene.n) if j != obj):
            continue
        if any(overlaps(r, scene.goal_footprint(j)) for j in pending):
            continue
        return pose
    return None

"""Exact interval geometry for thick Cantor sets.

A Cantor set is approximated at finite depth by a *stage*: a finite union of
pairwise disjoint closed intervals with exact rational endpoints.  All
geometry in this module is exact; there is no floating point anywhere.
Thickness comparisons such as ``tau >= 1`` must be decided exactly because
they gate the gap-lemma machinery downstream.

Vocabulary (all standard):

* a *gap* is a connected component of the complement of the stage; the two
  unbounded components count as gaps but carry no length;
* the *bridge* at an endpoint ``u`` of a bounded gap ``G`` is the maximal
  closed interval starting at ``u``, extending away from ``G``, in which
  every bounded gap is no longer than ``G``;
* the *local thickness* at ``u`` is ``|bridge| / |gap|``, and the Newhouse
  thickness of the stage is the minimum of the local thickness over all
  bounded-gap endpoints.

Rationals are ``fractions.Fraction`` throughout, which already guarantees
lowest terms and a positive denominator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Union

from .errors import DomainError

Rational = Fraction
RationalLike = Union[Fraction, int, str]

BOUNDED = "bounded"
LEFT_UNBOUNDED = "left_unbounded"
RIGHT_UNBOUNDED = "right_unbounded"

LEFT = "left"
RIGHT = "right"


def to_rational(value: RationalLike) -> Fraction:
    """Coerce ints and 'p/q' strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise DomainError(f"floats are not accepted as coordinates: {value!r}")
    return Fraction(value)


def rational_str(value: Fraction) -> str:
    """Lowest-terms string form, e.g. '2/3', '-1/2', '4'."""
    return str(value)


@dataclass(frozen=True)
class ClosedInterval:
    """A closed interval [lo, hi] with lo <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", to_rational(self.lo))
        object.__setattr__(self, "hi", to_rational(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains_point(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "ClosedInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersection(self, other: "ClosedInterval") -> Optional["ClosedInterval"]:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return ClosedInterval(lo, hi)

    def translate(self, shift: Fraction) -> "ClosedInterval":
        return ClosedInterval(self.lo + shift, self.hi + shift)

    def scale(self, factor: Fraction) -> "ClosedInterval":
        a, b = self.lo * factor, self.hi * factor
        return ClosedInterval(min(a, b), max(a, b))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class Gap:
    """A connected component of the complement of a stage.

    Bounded gaps carry both endpoints; the unbounded ones carry only the
    finite endpoint (``hi`` for the left-unbounded component, ``lo`` for the
    right-unbounded one).
    """

    lo: Optional[Fraction]
    hi: Optional[Fraction]
    kind: str = BOUNDED

    def __post_init__(self):
        if self.kind == BOUNDED:
            if self.lo is None or self.hi is None or self.lo >= self.hi:
                raise DomainError(f"invalid bounded gap ({self.lo}, {self.hi})")
        elif self.kind == LEFT_UNBOUNDED:
            if self.lo is not None or self.hi is None:
                raise DomainError("left-unbounded gap must have only a right endpoint")
        elif self.kind == RIGHT_UNBOUNDED:
            if self.lo is None or self.hi is not None:
                raise DomainError("right-unbounded gap must have only a left endpoint")
        else:
            raise DomainError(f"unknown gap kind {self.kind!r}")

    @property
    def length(self) -> Fraction:
        if self.kind != BOUNDED:
            raise DomainError("unbounded gaps have no finite length")
        return self.hi - self.lo  # type: ignore[operator]

    def contains_point(self, x: Fraction) -> bool:
        """Open-interval membership, with unbounded sides treated as infinite."""
        if self.lo is not None and x <= self.lo:
            return False
        if self.hi is not None and x >= self.hi:
            return False
        return True

    def strictly_contains(self, lo: Fraction, hi: Fraction) -> bool:
        """Whether the closed set [lo, hi] lies inside this open gap."""
        if self.lo is not None and lo <= self.lo:
            return False
        if self.hi is not None and hi >= self.hi:
            return False
        return True

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"({lo}, {hi})"


@dataclass(frozen=True)
class CantorStage:
    """A finite union of disjoint closed intervals, ordered left to right.

    ``depth`` records the refinement generation, ``parent`` the coarser stage
    this one refines (each interval must then be contained in a parent
    interval).  Zero-length intervals are rejected unless the stage is
    explicitly built with ``allow_degenerate=True`` (exact intersections may
    legitimately produce isolated points).
    """

    intervals: tuple[ClosedInterval, ...]
    depth: int = 0
    parent: Optional["CantorStage"] = field(default=None, compare=False, repr=False)
    allow_degenerate: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        ivs = tuple(self.intervals)
        object.__setattr__(self, "intervals", ivs)
        if not ivs:
            raise DomainError("a stage must contain at least one interval")
        for a, b in zip(ivs, ivs[1:]):
            if not a.hi < b.lo:
                raise DomainError(
                    f"stage intervals must be disjoint and increasing: {a} then {b}"
                )
        if not self.allow_degenerate:
            for iv in ivs:
                if iv.length == 0:
                    raise DomainError(f"zero-length interval {iv} in a non-degenerate stage")
        if self.depth < 0:
            raise DomainError("depth must be nonnegative")
        if self.parent is not None:
            self._check_nested_in(self.parent)

    def _check_nested_in(self, parent: "CantorStage") -> None:
        # Merge walk: every interval must land inside some parent interval.
        j = 0
        for iv in self.intervals:
            while j < len(parent.intervals) and parent.intervals[j].hi < iv.lo:
                j += 1
            if j >= len(parent.intervals) or not parent.intervals[j].contains_interval(iv):
                raise DomainError(f"interval {iv} is not contained in any parent interval")

    @property
    def count(self) -> int:
        return len(self.intervals)

    @property
    def min(self) -> Fraction:
        return self.intervals[0].lo

    @property
    def max(self) -> Fraction:
        return self.intervals[-1].hi

    def hull(self) -> ClosedInterval:
        return ClosedInterval(self.min, self.max)

    def total_length(self) -> Fraction:
        return sum((iv.length for iv in self.intervals), Fraction(0))

    def contains_point(self, x: Fraction) -> bool:
        return self.interval_containing_point(x) is not None

    def interval_containing_point(self, x: Fraction) -> Optional[ClosedInterval]:
        """Binary search for the interval containing x, if any."""
        ivs = self.intervals
        lo, hi = 0, len(ivs) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            if x < ivs[mid].lo:
                hi = mid - 1
            elif x > ivs[mid].hi:
                lo = mid + 1
            else:
                return ivs[mid]
        return None

    def interval_containing(self, piece: ClosedInterval) -> Optional[ClosedInterval]:
        """The stage interval containing ``piece`` entirely, if any."""
        host = self.interval_containing_point(piece.lo)
        if host is not None and host.contains_interval(piece):
            return host
        return None

    def __str__(self) -> str:
        return " ".join(str(iv) for iv in self.intervals)


def make_stage(
    endpoints: Iterable[tuple[RationalLike, RationalLike]],
    depth: int = 0,
    parent: Optional[CantorStage] = None,
) -> CantorStage:
    """Convenience constructor from (lo, hi) pairs."""
    ivs = tuple(ClosedInterval(to_rational(a), to_rational(b)) for a, b in endpoints)
    return CantorStage(ivs, depth=depth, parent=parent)


# ---------------------------------------------------------------------------
# Gaps and bridges
# ---------------------------------------------------------------------------

def gaps(stage: CantorStage) -> list[Gap]:
    """All gaps of the stage: the left-unbounded one, the bounded ones in
    increasing order, then the right-unbounded one.

    The number of bounded gaps is always ``stage.count - 1``.
    """
    result: list[Gap] = [Gap(None, stage.min, LEFT_UNBOUNDED)]
    result.extend(bounded_gaps(stage))
    result.append(Gap(stage.max, None, RIGHT_UNBOUNDED))
    return result


def bounded_gaps(stage: CantorStage) -> list[Gap]:
    """The bounded gaps in increasing order."""
    return [
        Gap(a.hi, b.lo, BOUNDED)
        for a, b in zip(stage.intervals, stage.intervals[1:])
    ]


@dataclass(frozen=True)
class GapBridgeReport:
    """The bridge and local thickness at one endpoint of a bounded gap.

    ``side`` names which endpoint of the gap is under consideration and
    therefore the direction the bridge extends: ``left`` means the gap's left
    endpoint with the bridge extending leftward, ``right`` the mirror image.
    """

    endpoint: Fraction
    side: str
    gap: Gap
    bridge: ClosedInterval
    local_thickness: Fraction

    def to_json(self) -> dict:
        return {
            "endpoint": rational_str(self.endpoint),
            "side": self.side,
            "gap": [rational_str(self.gap.lo), rational_str(self.gap.hi)],
            "bridge": [rational_str(self.bridge.lo), rational_str(self.bridge.hi)],
            "local_thickness": rational_str(self.local_thickness),
        }


def _gap_index_for_endpoint(stage: CantorStage, endpoint: Fraction, side: str) -> int:
    """Index i such that the bounded gap between interval i and i+1 has the
    given endpoint on the given side.  Binary search: interval endpoints are
    strictly increasing."""
    ivs = stage.intervals
    if side == RIGHT:
        # endpoint is the gap's right endpoint = lo of the interval right of it
        lo, hi = 1, len(ivs) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            if ivs[mid].lo < endpoint:
                lo = mid + 1
            elif ivs[mid].lo > endpoint:
                hi = mid - 1
            else:
                return mid - 1
    elif side == LEFT:
        lo, hi = 0, len(ivs) - 2
        while lo <= hi:
            mid = (lo + hi) // 2
            if ivs[mid].hi < endpoint:
                lo = mid + 1
            elif ivs[mid].hi > endpoint:
                hi = mid - 1
            else:
                return mid
    else:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    raise DomainError(
        f"{endpoint} is not the {side} endpoint of any bounded gap of the stage"
    )


def _bridge_report(stage: CantorStage, gap_index: int, side: str) -> GapBridgeReport:
    """Bridge scan from one side of the bounded gap at the given index."""
    ivs = stage.intervals
    gap = Gap(ivs[gap_index].hi, ivs[gap_index + 1].lo, BOUNDED)
    glen = gap.length
    if side == RIGHT:
        endpoint = gap.hi
        j = gap_index + 1
        while j + 1 < len(ivs) and ivs[j + 1].lo - ivs[j].hi <= glen:
            j += 1
        bridge = ClosedInterval(endpoint, ivs[j].hi)
    else:
        endpoint = gap.lo
        j = gap_index
        while j - 1 >= 0 and ivs[j].lo - ivs[j - 1].hi <= glen:
            j -= 1
        bridge = ClosedInterval(ivs[j].lo, endpoint)
    return GapBridgeReport(
        endpoint=endpoint,
        side=side,
        gap=gap,
        bridge=bridge,
        local_thickness=bridge.length / glen,
    )


def bridge_at(stage: CantorStage, endpoint: RationalLike, side: str) -> GapBridgeReport:
    """Bridge and local thickness at one bounded-gap endpoint.

    Linear scan away from the gap, crossing every bounded gap of length at
    most the reference gap's, stopping at the first strictly longer gap or at
    the extreme point of the stage.
    """
    endpoint = to_rational(endpoint)
    return _bridge_report(stage, _gap_index_for_endpoint(stage, endpoint, side), side)


def all_bridge_reports(stage: CantorStage) -> list[GapBridgeReport]:
    """Reports for both sides of every bounded gap, left to right."""
    reports: list[GapBridgeReport] = []
    for i in range(stage.count - 1):
        reports.append(_bridge_report(stage, i, LEFT))
        reports.append(_bridge_report(stage, i, RIGHT))
    return reports


class ThicknessResult(NamedTuple):
    value: Fraction
    argmin: GapBridgeReport


def thickness(stage: CantorStage) -> ThicknessResult:
    """Exact Newhouse thickness of the stage with the minimizing report.

    Ties are broken deterministically: leftmost endpoint first, then the left
    side before the right.
    """
    if stage.count < 2:
        raise DomainError("thickness undefined for a single interval")
    best: Optional[GapBridgeReport] = None
    for report in all_bridge_reports(stage):
        if best is None or report.local_thickness < best.local_thickness:
            best = report
        elif report.local_thickness == best.local_thickness:
            key = (report.endpoint, 0 if report.side == LEFT else 1)
            best_key = (best.endpoint, 0 if best.side == LEFT else 1)
            if key < best_key:
                best = report
    assert best is not None
    return ThicknessResult(best.local_thickness, best)


def thickness_value(stage: CantorStage) -> Fraction:
    return thickness(stage).value


# ---------------------------------------------------------------------------
# Set operations
# ---------------------------------------------------------------------------

def restrict(stage: CantorStage, window: ClosedInterval) -> CantorStage:
    """The stage intersected with a closed window.

    Intervals are clipped exactly; clips that vanish are dropped; a clip that
    degenerates to a point is kept (it is honest intersection content) and
    marks the result as degenerate-permitting.
    """
    clipped = [
        c for iv in stage.intervals if (c := iv.intersection(window)) is not None
    ]
    if not clipped:
        raise DomainError(f"window {window} does not intersect the stage")
    degenerate = any(c.length == 0 for c in clipped)
    return CantorStage(tuple(clipped), depth=stage.depth, allow_degenerate=degenerate)


def affine_image(stage: CantorStage, scale: RationalLike, shift: RationalLike) -> CantorStage:
    """Exact image of the stage under x -> scale*x + shift (scale nonzero)."""
    scale = to_rational(scale)
    shift = to_rational(shift)
    if scale == 0:
        raise DomainError("affine image requires a nonzero scale")
    ivs = [
        ClosedInterval(iv.lo * scale + shift, iv.hi * scale + shift)
        if scale > 0
        else ClosedInterval(iv.hi * scale + shift, iv.lo * scale + shift)
        for iv in stage.intervals
    ]
    if scale < 0:
        ivs.reverse()
    degenerate = any(iv.length == 0 for iv in stage.intervals)
    return CantorStage(tuple(ivs), depth=stage.depth, allow_degenerate=degenerate)


# ---------------------------------------------------------------------------
# Serialization: {"depth": n, "intervals": [["p/q", "r/s"], ...]}
# ---------------------------------------------------------------------------

def stage_to_json(stage: CantorStage) -> dict:
    return {
        "depth": stage.depth,
        "intervals": [[rational_str(iv.lo), rational_str(iv.hi)] for iv in stage.intervals],
    }


def stage_from_json(data: dict) -> CantorStage:
    try:
        depth = int(data["depth"])
        pairs = data["intervals"]
        ivs = tuple(ClosedInterval(Fraction(lo), Fraction(hi)) for lo, hi in pairs)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed stage object: {exc}") from exc
    degenerate = any(iv.length == 0 for iv in ivs)
    return CantorStage(ivs, depth=depth, allow_degenerate=degenerate)


def dumps_stage(stage: CantorStage, indent: int | None = None) -> str:
    return json.dumps(stage_to_json(stage), indent=indent)


def loads_stage(text: str) -> CantorStage:
    return stage_from_json(json.loads(text))

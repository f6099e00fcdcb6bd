"""Generators for Cantor stages and refinement families.

Three sources of sets:

* ``middle_alpha``: remove the central open proportion alpha from every
  interval at every level; stage thickness is (1 - alpha) / (2 * alpha) at
  every depth.
* ``random_thick``: seeded random refinement that provably keeps thickness
  at or above a target (each cut leaves both flanks at least tau times the
  new gap, which bounds every bridge from below).
* ``counterexample_set``: the explicit five-interval set of prescribed
  thickness that avoids configurations {x - t, x, x + t^2} anchored at the
  endpoints of its largest gap.

A ``StageFamily`` is a lazily refined chain K_0 superset K_1 superset ...;
restriction and affine views compose so search pipelines can localize work
to a small bridge without recomputing global stages.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .core import (
    CantorStage,
    ClosedInterval,
    Gap,
    RationalLike,
    affine_image,
    restrict,
    thickness,
    to_rational,
)
from .errors import CalibrationError, ConstructionError, DomainError

IntervalRefiner = Callable[[ClosedInterval, int], Sequence[ClosedInterval]]


# ---------------------------------------------------------------------------
# Refinement families
# ---------------------------------------------------------------------------

class StageFamily:
    """A refinement sequence of Cantor stages, indexed by depth from 0."""

    def stage(self, depth: int) -> CantorStage:
        raise NotImplementedError

    def stages(self, first: int, last: int) -> list[CantorStage]:
        return [self.stage(d) for d in range(first, last + 1)]

    def interval_chain(self, enclosure: ClosedInterval, max_depth: int) -> list[ClosedInterval]:
        """The unique stage interval containing ``enclosure``, per depth
        0..max_depth.  Raises DomainError where no interval contains it."""
        chain: list[ClosedInterval] = []
        for d in range(max_depth + 1):
            host = self.stage(d).interval_containing(enclosure)
            if host is None:
                raise DomainError(
                    f"enclosure {enclosure} is not inside any interval at depth {d}"
                )
            chain.append(host)
        return chain


class RefinableFamily(StageFamily):
    """A family generated by refining each interval independently.

    The refiner maps (interval, depth) to the child intervals it splits
    into; children must stay inside the interval and keep its endpoints so
    that gaps only ever get added, never moved.
    """

    def __init__(self, root: CantorStage, refine_interval: IntervalRefiner, name: str = ""):
        self._cache: list[CantorStage] = [root]
        self._refine = refine_interval
        self.name = name

    def stage(self, depth: int) -> CantorStage:
        if depth < 0:
            raise DomainError("family depth must be nonnegative")
        while len(self._cache) <= depth:
            parent = self._cache[-1]
            children: list[ClosedInterval] = []
            for iv in parent.intervals:
                children.extend(self._refine(iv, parent.depth))
            self._cache.append(
                CantorStage(tuple(children), depth=parent.depth + 1, parent=parent)
            )
        return self._cache[depth]

    def interval_chain(self, enclosure: ClosedInterval, max_depth: int) -> list[ClosedInterval]:
        """Walk down refining only the containing interval: avoids
        materializing exponentially large deep stages."""
        root_depth = self._cache[0].depth
        host = self._cache[0].interval_containing(enclosure)
        if host is None:
            raise DomainError(f"enclosure {enclosure} is outside the root stage")
        chain = [host]
        for d in range(max_depth):
            nxt = None
            for child in self._refine(host, root_depth + d):
                if child.contains_interval(enclosure):
                    nxt = child
                    break
            if nxt is None:
                raise DomainError(
                    f"enclosure {enclosure} is not inside any interval at depth {d + 1}"
                )
            host = nxt
            chain.append(host)
        return chain


class RestrictedFamily(StageFamily):
    """View of a family intersected with a fixed window, optionally
    re-indexed so depth 0 maps to a deeper base stage.

    When the base refines intervals independently and the window spans whole
    intervals of the offset stage, the restriction refines locally: deep
    levels cost only the window's own subtree, not the full base stage.
    """

    def __init__(self, base: StageFamily, window: ClosedInterval, depth_offset: int = 0):
        self.base = base
        self.window = window
        self.depth_offset = depth_offset
        self._cache: dict[int, CantorStage] = {}
        self._local: Optional[RefinableFamily] = None
        refiner = getattr(base, "_refine", None)
        if refiner is not None and depth_offset >= 0:
            offset_stage = base.stage(depth_offset)
            root = restrict(offset_stage, window)
            aligned = all(
                offset_stage.interval_containing_point(iv.lo) == iv
                for iv in root.intervals
            )
            if aligned:
                shift = depth_offset

                def local_refiner(iv: ClosedInterval, depth: int):
                    return refiner(iv, depth + shift)

                local_root = CantorStage(root.intervals, depth=0,
                                         allow_degenerate=root.allow_degenerate)
                self._local = RefinableFamily(local_root, local_refiner)

    def stage(self, depth: int) -> CantorStage:
        if self._local is not None:
            return self._local.stage(depth)
        if depth not in self._cache:
            raw = restrict(self.base.stage(depth + self.depth_offset), self.window)
            self._cache[depth] = CantorStage(
                raw.intervals, depth=depth, allow_degenerate=raw.allow_degenerate
            )
        return self._cache[depth]

    def interval_chain(self, enclosure: ClosedInterval, max_depth: int) -> list[ClosedInterval]:
        if self._local is not None:
            return self._local.interval_chain(enclosure, max_depth)
        return super().interval_chain(enclosure, max_depth)


class AffineFamily(StageFamily):
    """View of a family under an exact affine map."""

    def __init__(self, base: StageFamily, scale: Fraction, shift: Fraction):
        if scale == 0:
            raise DomainError("affine family requires a nonzero scale")
        self.base = base
        self.scale = to_rational(scale)
        self.shift = to_rational(shift)
        self._cache: dict[int, CantorStage] = {}

    def stage(self, depth: int) -> CantorStage:
        if depth not in self._cache:
            self._cache[depth] = affine_image(self.base.stage(depth), self.scale, self.shift)
        return self._cache[depth]


# ---------------------------------------------------------------------------
# middle-alpha sets
# ---------------------------------------------------------------------------

def _middle_alpha_refiner(alpha: Fraction) -> IntervalRefiner:
    beta = (1 - alpha) / 2

    def refine(iv: ClosedInterval, _depth: int) -> list[ClosedInterval]:
        width = iv.length
        return [
            ClosedInterval(iv.lo, iv.lo + beta * width),
            ClosedInterval(iv.hi - beta * width, iv.hi),
        ]

    return refine


def middle_alpha_family(
    alpha: RationalLike, base: Optional[ClosedInterval] = None
) -> RefinableFamily:
    """Family for the middle-alpha construction on ``base`` (default [0, 1])."""
    alpha = to_rational(alpha)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if base is None:
        base = ClosedInterval(Fraction(0), Fraction(1))
    root = CantorStage((base,), depth=0)
    return RefinableFamily(root, _middle_alpha_refiner(alpha), name=f"middle-alpha:{alpha}")


def middle_alpha(alpha: RationalLike, depth: int) -> CantorStage:
    """Stage of the middle-alpha set at the given depth.

    Starting from [0, 1], each level removes the central open proportion
    alpha of every interval; the stage thickness is (1 - alpha)/(2 * alpha)
    at every depth >= 1.
    """
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    return middle_alpha_family(alpha).stage(depth)


# ---------------------------------------------------------------------------
# seeded random thick sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RandomThickSpec:
    """Parameters for the seeded thick-set generator.

    ``gap_placement`` fixes where in the admissible middle region each new
    gap is cut (0 = leftmost, 1 = rightmost admissible); None draws the
    position from the seed.  The admissible region is exactly the set of
    positions leaving both flanks at least target_tau times the gap.
    """

    target_tau: Fraction
    depth: int
    seed: int
    gap_placement: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "target_tau", to_rational(self.target_tau))
        if self.gap_placement is not None:
            gp = to_rational(self.gap_placement)
            if not 0 <= gp <= 1:
                raise DomainError("gap_placement must lie in [0, 1]")
            object.__setattr__(self, "gap_placement", gp)
        if self.target_tau <= 0:
            raise DomainError("target_tau must be positive")
        if self.depth < 0:
            raise DomainError("depth must be nonnegative")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be a 64-bit unsigned integer")


def _seeded_unit_fraction(tag: str, bits: int = 16) -> Fraction:
    """Deterministic pseudo-random fraction in [0, 1) from a string tag."""
    digest = hashlib.sha256(tag.encode()).digest()
    return Fraction(int.from_bytes(digest[:bits // 8], "big"), 2 ** bits)


def _random_thick_refiner(spec: RandomThickSpec) -> IntervalRefiner:
    tau = spec.target_tau
    alpha = Fraction(1, 1) / (2 * tau + 1)

    def refine(iv: ClosedInterval, depth: int) -> list[ClosedInterval]:
        width = iv.length
        tag = f"{spec.seed}:{depth}:{iv.lo}:{iv.hi}"
        # Gap strictly below the critical proportion so the admissible
        # placement region is nondegenerate: gap = s*alpha*width, s in
        # [1/2, 1), leaves slack width*(1 - s) for the position.
        shrink = Fraction(1, 2) + _seeded_unit_fraction(tag + ":len") / 2
        gap = shrink * alpha * width
        slack = width - (2 * tau + 1) * gap
        placement = (
            spec.gap_placement
            if spec.gap_placement is not None
            else _seeded_unit_fraction(tag + ":pos")
        )
        left = tau * gap + placement * slack
        return [
            ClosedInterval(iv.lo, iv.lo + left),
            ClosedInterval(iv.lo + left + gap, iv.hi),
        ]

    return refine


def random_thick_family(
    spec: RandomThickSpec, base: Optional[ClosedInterval] = None
) -> RefinableFamily:
    if base is None:
        base = ClosedInterval(Fraction(0), Fraction(1))
    root = CantorStage((base,), depth=0)
    return RefinableFamily(
        root, _random_thick_refiner(spec), name=f"random-thick:{spec.target_tau}:{spec.seed}"
    )


def random_thick(spec: RandomThickSpec, base: Optional[ClosedInterval] = None) -> CantorStage:
    """Deterministic-in-seed random stage with thickness >= target_tau.

    Every cut leaves both flanks at least target_tau times the new gap, so
    every bridge is at least target_tau times its gap; the resulting stage
    thickness is provably >= target_tau at every depth (and verified exactly
    by the test suite).
    """
    return random_thick_family(spec, base).stage(spec.depth)


# ---------------------------------------------------------------------------
# The square-configuration counterexample set
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CounterexampleParams:
    """Parameters of the five-interval avoidance set.

    alpha and beta are the gap and flank proportions producing thickness
    tau: alpha = 1/(2 tau + 1), beta = tau/(2 tau + 1), so 2 beta + alpha = 1
    and beta/alpha = tau.  tau = 1 is accepted for the construction itself
    (it is the reference point of the length table); calibration requires
    tau > 1 strictly.
    """

    tau: Fraction
    eps: Fraction
    c: Fraction
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        for name in ("tau", "eps", "c", "alpha", "beta"):
            object.__setattr__(self, name, to_rational(getattr(self, name)))
        if self.tau < 1:
            raise DomainError(f"tau must be at least 1, got {self.tau}")
        if self.eps <= 0:
            raise DomainError(f"eps must be positive, got {self.eps}")
        if not 0 < self.c < 1:
            raise DomainError(f"c must lie in (0, 1), got {self.c}")
        if self.alpha != 1 / (2 * self.tau + 1):
            raise DomainError("alpha must equal 1/(2*tau + 1)")
        if self.beta != self.tau / (2 * self.tau + 1):
            raise DomainError("beta must equal tau/(2*tau + 1)")


def make_counterexample_params(
    tau: RationalLike, eps: RationalLike, c: RationalLike
) -> CounterexampleParams:
    tau = to_rational(tau)
    return CounterexampleParams(
        tau=tau,
        eps=to_rational(eps),
        c=to_rational(c),
        alpha=Fraction(1, 1) / (2 * tau + 1),
        beta=tau / (2 * tau + 1),
    )


def counterexample_parts(params: CounterexampleParams) -> dict:
    """Named pieces of the counterexample set: intervals I1..I5, gaps G1..G4,
    and the proportions alpha, beta."""
    tau, eps, c = params.tau, params.eps, params.c
    bt = params.beta * tau
    at = params.alpha * tau
    e2 = eps * eps
    i1 = ClosedInterval(-(1 + tau) * eps, -(1 + bt + at) * eps)
    i2 = ClosedInterval(-(1 + bt) * eps, -eps)
    i3 = ClosedInterval(Fraction(0), c * e2)
    i4_lo = (1 + bt) ** 2 / c * e2
    i4_hi = (1 + bt + at) ** 2 * c * e2
    i5_lo = (1 + tau) ** 2 / c * e2
    i5_hi = tau * eps
    if not i4_lo < i4_hi:
        raise ConstructionError(
            f"interval order violated: I4 is empty (requires c > {(1 + bt) / (1 + bt + at)}, got {c})"
        )
    if not i4_hi < i5_lo:
        raise ConstructionError("interval order violated: I4 must end before I5 begins")
    if not i5_lo < i5_hi:
        raise ConstructionError(
            f"interval order violated: I5 is empty (requires eps < {tau * c / (1 + tau) ** 2}, got {eps})"
        )
    if not i3.hi < i4_lo:
        raise ConstructionError("interval order violated: I3 must end before I4 begins")
    i4 = ClosedInterval(i4_lo, i4_hi)
    i5 = ClosedInterval(i5_lo, i5_hi)
    return {
        "I1": i1,
        "I2": i2,
        "I3": i3,
        "I4": i4,
        "I5": i5,
        "G1": Gap(i1.hi, i2.lo),
        "G2": Gap(i2.hi, i3.lo),
        "G3": Gap(i3.hi, i4.lo),
        "G4": Gap(i4.hi, i5.lo),
        "alpha": params.alpha,
        "beta": params.beta,
    }


def counterexample_set(params: CounterexampleParams) -> CantorStage:
    """The five-interval set, exact and in increasing order.

    Its largest bounded gap is G2 = (-eps, 0); the pieces right of zero are
    arranged so that squaring the reflection of I1 lands inside G4 and
    squaring the reflection of I2 lands inside G3.
    """
    parts = counterexample_parts(params)
    return CantorStage(
        tuple(parts[k] for k in ("I1", "I2", "I3", "I4", "I5")), depth=0
    )


def counterexample_limit_ratio(tau: RationalLike) -> Fraction:
    """Minimum, over the c-dependent gap endpoints, of the bridge/gap ratio
    in the c -> 1 limit.  Calibration to thickness tau is possible only if
    this exceeds tau; it decays quickly, which is why only tau close to 1 is
    reachable."""
    tau = to_rational(tau)
    alpha = Fraction(1, 1) / (2 * tau + 1)
    beta = tau / (2 * tau + 1)
    bt, at = beta * tau, alpha * tau
    r3_left = Fraction(1, 1) / ((1 + bt) ** 2 - 1)
    r3_right = ((1 + bt + at) ** 2 - (1 + bt) ** 2) / ((1 + bt) ** 2 - 1)
    r4_left = (1 + bt + at) ** 2 / ((1 + tau) ** 2 - (1 + bt + at) ** 2)
    return min(r3_left, r3_right, r4_left)


def counterexample_calibrate(
    tau: RationalLike,
    eps: RationalLike,
    tol: RationalLike,
    max_probes: int = 64,
) -> CounterexampleParams:
    """Search c in (0, 1) so the set's exact thickness lands in
    [tau - tol, tau].

    The thickness is nondecreasing in c and capped at tau (several bridge
    ratios equal tau for every c), so probing c = 1 - (1 - floor)/2**k and
    stopping at the first success is a binary search toward 1.  Failure
    after ``max_probes`` probes, or a limiting ratio below the target, means
    the requested tau is out of the construction's reach.
    """
    tau = to_rational(tau)
    eps = to_rational(eps)
    tol = to_rational(tol)
    if tau <= 1:
        raise DomainError(f"calibration requires tau > 1, got {tau}")
    if tol < 0:
        raise DomainError("tol must be nonnegative")
    limit = counterexample_limit_ratio(tau)
    if limit <= tau - tol:
        raise CalibrationError(
            f"no c in (0, 1) reaches thickness {tau}: the limiting bridge ratio "
            f"as c -> 1 is {limit} (~ {float(limit):.6g}); the construction only "
            f"calibrates for tau below that ratio"
        )
    # c must keep I4 and I5 nonempty.
    bt = tau * tau / (2 * tau + 1)
    at = tau / (2 * tau + 1)
    c_floor = max((1 + bt) / (1 + bt + at), eps * (1 + tau) ** 2 / tau, Fraction(1, 2))
    if c_floor >= 1:
        raise CalibrationError(
            f"eps = {eps} is too large: the rightmost piece is empty for every c < 1"
        )
    for k in range(1, max_probes + 1):
        c = 1 - (1 - c_floor) / 2 ** k
        try:
            params = make_counterexample_params(tau, eps, c)
            value = thickness(counterexample_set(params)).value
        except ConstructionError:
            continue
        if tau - tol <= value <= tau:
            return params
    raise CalibrationError(
        f"no probed c reached thickness within {tol} of {tau} "
        f"after {max_probes} probes toward c = 1"
    )

"""Constructive configuration search in thick Cantor stages.

Three finders, all exact or certified:

* ``find_3ap``: three-term arithmetic progressions {x - t, x, x + t} in a
  family of thickness at least 1.  The middle point is a largest-gap
  endpoint; the offset t is located by intersecting the reflected left
  bridge piece with the right bridge piece across every depth.
* ``find_config``: nonlinear configurations {x - t, x, x + f(t)} for
  thickness above 1 and f'(0) strictly inside the admissible slope window.
  The pipeline localizes to a small bridge, orients so the left bridge
  dominates, maps the right piece through a certified monotone inverse, and
  intersects persistently.  Soundness comes from outward enclosures plus an
  inward tightening step, and the smooth-image thickness hypothesis is
  checked a posteriori and exactly on the certified image stages.
* ``verify_counterexample``: exact endpoint-inequality verification that the
  five-interval construction avoids {x - t, x, x + t^2} at its largest-gap
  endpoints.

Every witness carries nested membership chains and replays independently via
``verify_witness``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .constructions import (
    CounterexampleParams,
    RestrictedFamily,
    StageFamily,
    counterexample_parts,
    counterexample_set,
)
from .core import (
    LEFT,
    RIGHT,
    CantorStage,
    ClosedInterval,
    Gap,
    RationalLike,
    affine_image,
    bounded_gaps,
    bridge_at,
    rational_str,
    restrict,
    thickness,
    to_rational,
)
from .errors import (
    DomainError,
    HypothesisError,
    InsufficientDepthError,
    InternalContradictionError,
    PrecisionError,
)
from .functions import (
    CertifiedValue,
    FunctionSpec,
    derivative_ratio_bound,
    derivative_window,
    eval_function,
    monotone_inverse,
    range_bounds,
)
from .gaplemma import persistent_intersect

DEFAULT_PRECISION = Fraction(1, 2 ** 64)
WITNESS_WIDTH = Fraction(1, 2 ** 48)


# ---------------------------------------------------------------------------
# Largest-gap frame
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GapFrame:
    """The largest bounded gap of a stage with both of its bridges.

    ``left_at_least_right`` is the orientation flag: True when the left
    bridge is at least as long as the right one (ties included), in which
    case no reflection is needed downstream.
    """

    gap: Gap
    left_bridge: ClosedInterval
    right_bridge: ClosedInterval
    left_at_least_right: bool


def largest_gap_frame(stage: CantorStage) -> GapFrame:
    """Largest bounded gap (leftmost on ties) with its two bridges."""
    gs = bounded_gaps(stage)
    if not gs:
        raise DomainError("no bounded gap: cannot frame a single interval")
    best = gs[0]
    for g in gs[1:]:
        if g.length > best.length:
            best = g
    left = bridge_at(stage, best.lo, LEFT).bridge
    right = bridge_at(stage, best.hi, RIGHT).bridge
    return GapFrame(
        gap=best,
        left_bridge=left,
        right_bridge=right,
        left_at_least_right=left.length >= right.length,
    )


# ---------------------------------------------------------------------------
# Small-diameter subset extraction
# ---------------------------------------------------------------------------

def subset_extract(
    family: StageFamily,
    delta: RationalLike,
    max_scan_depth: int = 48,
    verify_levels: int = 4,
) -> RestrictedFamily:
    """Restrict a family to a bridge of hull width below delta, keeping
    thickness.

    Follows the constructive recipe: take the largest gap, look right of its
    right endpoint ``u`` for the first strictly shorter gap starting within
    min(|largest gap|, delta) of ``u``, and restrict to the left bridge of
    that gap.  The returned family is re-indexed to start at the first depth
    where both window endpoints are interval endpoints, so that every
    returned stage is a genuine bridge restriction; per-level thickness
    preservation is asserted exactly for the first ``verify_levels`` levels.
    """
    delta = to_rational(delta)
    if delta <= 0:
        raise DomainError("delta must be positive")

    found = None
    for depth in range(1, max_scan_depth + 1):
        stage = family.stage(depth)
        if stage.count < 2:
            continue
        frame = largest_gap_frame(stage)
        u = frame.gap.hi
        reach = min(frame.gap.length, delta)
        for g in bounded_gaps(stage):
            if g.lo <= u:
                continue
            if g.lo - u >= reach:
                break
            if g.length < frame.gap.length:
                found = (depth, stage, g)
                break
        if found:
            break
    if not found:
        raise InsufficientDepthError(
            f"no gap suitable for extraction within {delta} of the largest gap "
            f"up to depth {max_scan_depth}",
            required_depth=max_scan_depth + 1,
        )

    depth, stage, g = found
    window = bridge_at(stage, g.lo, LEFT).bridge
    if window.length >= delta:
        raise InternalContradictionError(
            f"extracted bridge {window} is not shorter than delta = {delta}"
        )

    # First depth at which both window endpoints are interval endpoints of
    # the stage; from there on the window spans whole intervals.
    base = None
    for d in range(1, depth + 1):
        s = family.stage(d)
        has_lo = any(iv.lo == window.lo for iv in s.intervals)
        has_hi = any(iv.hi == window.hi for iv in s.intervals)
        if has_lo and has_hi:
            base = d
            break
    if base is None:
        raise InternalContradictionError("bridge endpoints never align with stage intervals")

    sub = RestrictedFamily(family, window, depth_offset=base)
    for level in range(verify_levels + 1):
        piece = sub.stage(level)
        if piece.count < 2:
            continue
        inner = thickness(piece).value
        outer = thickness(family.stage(base + level)).value
        if inner < outer:
            raise InternalContradictionError(
                f"bridge restriction lost thickness at level {level}: {inner} < {outer}"
            )
    return sub


# ---------------------------------------------------------------------------
# Witnesses
# ---------------------------------------------------------------------------

Chain = tuple[ClosedInterval, ...]


@dataclass(frozen=True)
class ConfigWitness:
    """A certified configuration {x - t, x, x + f(t)}.

    ``t`` and ``ft`` are rational enclosures with ``t.lo > 0``; ``chains``
    holds one nested interval chain per configuration point (left, middle,
    right), each entry an interval of the stage at that depth containing the
    corresponding enclosure.  The certificate reads: for every s in the
    ``ft`` enclosure there is a matching offset t* in the ``t`` enclosure
    with f(t*) = s, and the three points x - t*, x, x + s lie in every stage
    down to ``depth``.
    """

    x: Fraction
    t: CertifiedValue
    ft: CertifiedValue
    depth: int
    chains: tuple[Chain, Chain, Chain]

    def __post_init__(self):
        if self.t.lo <= 0:
            raise DomainError(f"nondegeneracy requires t > 0, got enclosure {self.t.lo}")
        if len(self.chains) != 3:
            raise DomainError("a witness carries exactly three chains")
        for chain in self.chains:
            for deeper, coarser in zip(chain[1:], chain):
                if not coarser.contains_interval(deeper):
                    raise DomainError("witness chains must be nested")
        for chain, enc in zip(self.chains, self.point_enclosures()):
            if chain and not chain[-1].contains_interval(enc):
                raise DomainError("deepest chain entry must contain its point enclosure")

    def point_enclosures(self) -> tuple[ClosedInterval, ClosedInterval, ClosedInterval]:
        left = ClosedInterval(self.x - self.t.hi, self.x - self.t.lo)
        mid = ClosedInterval(self.x, self.x)
        right = ClosedInterval(self.x + self.ft.lo, self.x + self.ft.hi)
        return left, mid, right

    def to_json(self) -> dict:
        return {
            "x": rational_str(self.x),
            "t": self.t.to_json(),
            "ft": self.ft.to_json(),
            "depth": self.depth,
            "chains": [
                [[rational_str(iv.lo), rational_str(iv.hi)] for iv in chain]
                for chain in self.chains
            ],
        }


def _membership_chain(
    family: StageFamily, enclosure: ClosedInterval, max_depth: int
) -> Chain:
    try:
        return tuple(family.interval_chain(enclosure, max_depth))
    except DomainError as exc:
        raise PrecisionError(
            str(exc), retry_hint="tighten inverse precision or reduce max depth"
        ) from exc


def _build_witness(
    family: StageFamily,
    max_depth: int,
    x: Fraction,
    t: CertifiedValue,
    ft: CertifiedValue,
) -> ConfigWitness:
    left = ClosedInterval(x - t.hi, x - t.lo)
    mid = ClosedInterval(x, x)
    right = ClosedInterval(x + ft.lo, x + ft.hi)
    chains = (
        _membership_chain(family, left, max_depth),
        _membership_chain(family, mid, max_depth),
        _membership_chain(family, right, max_depth),
    )
    return ConfigWitness(x=x, t=t, ft=ft, depth=max_depth, chains=chains)


def verify_witness(
    family: StageFamily,
    witness: ConfigWitness,
    f: Optional[FunctionSpec] = None,
) -> dict:
    """Replay a witness against its family; returns {'ok': bool, 'failures': [...]}.

    Checks: positivity of t, the coupling ft within f(t-enclosure), chain
    entries matching the family's stage intervals verbatim, nesting, and
    containment of each point enclosure at every depth.
    """
    failures: list[str] = []
    if witness.t.lo <= 0:
        failures.append("t.lo <= 0")
    if f is not None:
        flo = eval_function(f, witness.t.lo)
        fhi = eval_function(f, witness.t.hi)
        if not (min(flo, fhi) <= witness.ft.lo and witness.ft.hi <= max(flo, fhi)):
            failures.append("ft enclosure is not within f(t enclosure)")
    enclosures = witness.point_enclosures()
    for name, chain, enc in zip(("left", "middle", "right"), witness.chains, enclosures):
        if len(chain) != witness.depth + 1:
            failures.append(
                f"{name} chain has {len(chain)} entries, expected {witness.depth + 1}"
            )
            continue
        try:
            expected = family.interval_chain(enc, witness.depth)
        except DomainError as exc:
            failures.append(f"{name} enclosure escapes the family: {exc}")
            continue
        if list(chain) != expected:
            failures.append(f"{name} chain does not match the family's stage intervals")
        for d, link in enumerate(chain):
            if not link.contains_interval(enc):
                failures.append(f"{name} chain entry at depth {d} misses the enclosure")
                break
        for deeper, coarser in zip(chain[1:], chain):
            if not coarser.contains_interval(deeper):
                failures.append(f"{name} chain is not nested")
                break
    return {"ok": not failures, "failures": failures}


# ---------------------------------------------------------------------------
# 3-AP search
# ---------------------------------------------------------------------------

def _family_thickness_floor(family: StageFamily, probe_depth: int) -> Fraction:
    values = []
    for d in range(1, probe_depth + 1):
        stage = family.stage(d)
        if stage.count < 2:
            raise HypothesisError(
                f"stage at depth {d} has no bounded gap; thickness is undefined"
            )
        values.append(thickness(stage).value)
    return min(values)


def find_3ap(family: StageFamily, max_depth: int = 12) -> ConfigWitness:
    """A certified 3-AP {x - t, x, x + t} in a family of thickness >= 1.

    The middle point is an endpoint of the largest gap, on the side opposite
    the longer bridge.  Every point of the returned t-enclosure gives a
    genuine progression through all certified depths: both offsets live in
    exact stage intersections, with no rounding anywhere.
    """
    if max_depth < 1:
        raise DomainError("max_depth must be at least 1")
    tau = _family_thickness_floor(family, min(4, max_depth))
    if tau < 1:
        raise HypothesisError(f"3-AP search requires thickness >= 1, got {tau}")

    stages = family.stages(0, max_depth)
    frame = largest_gap_frame(stages[-1])
    reflected = not frame.left_at_least_right
    if reflected:
        oriented = [affine_image(s, Fraction(-1), Fraction(0)) for s in stages]
        frame = largest_gap_frame(oriented[-1])
        if not frame.left_at_least_right:
            raise InternalContradictionError("reflection did not flip bridge dominance")
    else:
        oriented = stages

    x0 = frame.gap.hi
    gap_len = frame.gap.length
    left_reach = x0 - frame.left_bridge.lo
    right_reach = frame.right_bridge.length
    if not (0 < gap_len <= right_reach <= left_reach):
        raise InternalContradictionError(
            f"bridge inequalities failed: gap {gap_len}, right {right_reach}, "
            f"left reach {left_reach}; with thickness >= 1 this cannot happen"
        )

    left_window = ClosedInterval(x0 - left_reach, x0 - gap_len)
    right_window = ClosedInterval(x0, x0 + right_reach)
    reflected_left = [
        affine_image(restrict(s, left_window), Fraction(-1), x0) for s in oriented
    ]
    shifted_right = [
        affine_image(restrict(s, right_window), Fraction(1), -x0) for s in oriented
    ]
    chain = persistent_intersect(reflected_left, shifted_right, check=False).chain

    t_enc = CertifiedValue(chain[-1].lo, chain[-1].hi)
    x = -x0 if reflected else x0
    witness = _build_witness(family, max_depth, x, t_enc, t_enc)
    report = verify_witness(family, witness)
    if not report["ok"]:
        raise InternalContradictionError(
            "3-AP witness failed self-verification: " + "; ".join(report["failures"])
        )
    return witness


# ---------------------------------------------------------------------------
# Nonlinear configuration search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    """Tunables for the nonlinear search.

    ``rho`` must satisfy 0 < rho < 1 and rho * tau >= 1 (default: midpoint
    of [1/tau, 1]).  ``epsilon`` is the target bound on the derivative ratio
    deviation used when validating delta; the decisive check is a
    posteriori: the exact thickness of every certified image stage must
    exceed rho * tau.  ``delta`` seeds the hull-shrinking loop and is halved
    until every validation passes.  ``max_depth`` is the number of certified
    refinement levels below the extracted bridge.
    """

    rho: Optional[Fraction] = None
    epsilon: Optional[Fraction] = None
    delta: Optional[Fraction] = None
    max_depth: int = 12
    inverse_precision: Fraction = DEFAULT_PRECISION
    max_delta_halvings: int = 40

    def __post_init__(self):
        for name in ("rho", "epsilon", "delta"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, to_rational(v))
        object.__setattr__(self, "inverse_precision", to_rational(self.inverse_precision))
        if self.max_depth < 1:
            raise DomainError("max_depth must be at least 1")
        if self.inverse_precision <= 0:
            raise DomainError("inverse_precision must be positive")


@dataclass
class FindConfigResult:
    """Witness plus the diagnostics the acceptance checks re-verify."""

    witness: ConfigWitness
    tau: Fraction
    rho: Fraction
    epsilon: Fraction
    delta: Fraction
    reflected: bool
    extraction_offset: int
    image_thickness_min: Fraction
    rho_tau: Fraction = field(init=False)

    def __post_init__(self):
        self.rho_tau = self.rho * self.tau


class _RetryDelta(Exception):
    """Internal: the a-posteriori image-thickness check failed; shrink delta."""


class _InverseMap:
    """Memoized certified inverse of f on a fixed bracket."""

    def __init__(self, f: FunctionSpec, bracket: ClosedInterval, precision: Fraction):
        self.f = f
        self.bracket = bracket
        self.precision = precision
        self._cache: dict[Fraction, CertifiedValue] = {}

    def point(self, y: Fraction) -> CertifiedValue:
        if y not in self._cache:
            self._cache[y] = monotone_inverse(self.f, y, self.bracket, self.precision)
        return self._cache[y]

    def outward(self, piece: ClosedInterval) -> ClosedInterval:
        return ClosedInterval(self.point(piece.lo).lo, self.point(piece.hi).hi)

    def inward(self, piece: ClosedInterval) -> Optional[ClosedInterval]:
        lo = self.point(piece.lo).hi
        hi = self.point(piece.hi).lo
        if lo > hi:
            return None
        return ClosedInterval(lo, hi)

    def enclosure_image(self, enc: CertifiedValue) -> CertifiedValue:
        return CertifiedValue(self.point(enc.lo).lo, self.point(enc.hi).hi)


class _ExactMap:
    """Exact polynomial image of f, increasing on its bracket."""

    def __init__(self, f: FunctionSpec):
        self.poly = f.polynomial()

    def point(self, y: Fraction) -> CertifiedValue:
        return CertifiedValue.exact(self.poly(y))

    def outward(self, piece: ClosedInterval) -> ClosedInterval:
        return ClosedInterval(self.poly(piece.lo), self.poly(piece.hi))

    def inward(self, piece: ClosedInterval) -> Optional[ClosedInterval]:
        return self.outward(piece)

    def enclosure_image(self, enc: CertifiedValue) -> CertifiedValue:
        return CertifiedValue(self.poly(enc.lo), self.poly(enc.hi))


def _validate_delta(f: FunctionSpec, tau: Fraction, delta: Fraction, eps: Fraction) -> bool:
    """Derivative conditions on the symmetric box of radius tau*delta:

    the range of f' (and hence of its reciprocal, the inverse derivative)
    must sit strictly inside the slope window, both derivative deviations
    from their values at zero must stay below eps/(2*tau), and the overall
    derivative ratio deviation must stay below eps."""
    box = ClosedInterval(-tau * delta, tau * delta)
    bounds = range_bounds(f.polynomial().derivative(), box)
    m, M = bounds.lo, bounds.hi
    window = derivative_window(tau)
    if not (window.lower < m and M < window.upper):
        return False
    slope = f.slope_at_zero
    budget = eps / (2 * tau)
    if max(M - slope, slope - m) >= budget:
        return False
    if max(1 / m - 1 / slope, 1 / slope - 1 / M) >= budget:
        return False
    try:
        if derivative_ratio_bound(f, box) >= eps:
            return False
    except DomainError:
        return False
    return True


def _shrink_centered(piece: ClosedInterval, width: Fraction) -> ClosedInterval:
    if piece.length <= width:
        return piece
    mid = piece.midpoint
    half = width / 2
    return ClosedInterval(mid - half, mid + half)


def find_config(
    family: StageFamily,
    f: FunctionSpec,
    cfg: Optional[SearchConfig] = None,
    enforce_window: bool = True,
) -> FindConfigResult:
    """Find a certified configuration {x - t, x, x + f(t)} in the family.

    Requires family thickness strictly above 1 and f'(0) strictly inside the
    slope window (the latter check can be disabled for the experimental
    sweep mode, in which case failures downstream are expected and
    reported).  See the module docstring for the pipeline; every accepted
    run has verified, exact image-stage thickness above rho * tau at every
    certified level.
    """
    cfg = cfg or SearchConfig()
    tau = _family_thickness_floor(family, 4)
    if tau <= 1:
        raise HypothesisError(
            f"nonlinear search requires thickness > 1, got {tau}"
        )
    window = derivative_window(tau)
    slope = f.slope_at_zero
    if enforce_window and not window.contains(slope):
        raise HypothesisError(
            f"f'(0) = {slope} violates the slope window {window} for thickness {tau}"
        )
    if slope <= 0:
        raise HypothesisError(
            f"f'(0) = {slope} must be positive for the search to set up an inverse"
        )

    rho = cfg.rho if cfg.rho is not None else (1 / tau + 1) / 2
    if not (0 < rho < 1 and rho * tau >= 1):
        raise DomainError(f"rho = {rho} must satisfy 0 < rho < 1 and rho*tau >= 1")
    eps = cfg.epsilon if cfg.epsilon is not None else (1 - rho) / (2 * rho)
    if eps <= 0:
        raise DomainError("epsilon must be positive")

    hull = family.stage(0).hull().length
    delta = cfg.delta if cfg.delta is not None else hull / 8
    last_error: Optional[Exception] = None
    for _ in range(cfg.max_delta_halvings):
        if not _validate_delta(f, tau, delta, eps):
            delta = delta / 2
            continue
        try:
            return _attempt_config(family, f, cfg, tau, rho, eps, delta)
        except _RetryDelta as exc:
            last_error = exc
            delta = delta / 2
    raise PrecisionError(
        f"no delta down to {delta} satisfied the derivative and image-thickness "
        f"conditions" + (f"; last failure: {last_error}" if last_error else ""),
        retry_hint="supply a smaller cfg.delta or a tamer function",
    )


def _attempt_config(
    family: StageFamily,
    f: FunctionSpec,
    cfg: SearchConfig,
    tau: Fraction,
    rho: Fraction,
    eps: Fraction,
    delta: Fraction,
) -> FindConfigResult:
    sub = subset_extract(family, delta)
    levels = cfg.max_depth
    sub_stages = sub.stages(0, levels)

    # Thickness must survive both the extraction and each refinement level.
    for piece in sub_stages:
        if piece.count >= 2 and thickness(piece).value < tau:
            raise InternalContradictionError(
                f"extracted family lost thickness at level {piece.depth}"
            )

    frame = largest_gap_frame(sub_stages[-1])
    reflected = not frame.left_at_least_right
    if reflected:
        oriented = [affine_image(s, Fraction(-1), Fraction(0)) for s in sub_stages]
        frame = largest_gap_frame(oriented[-1])
    else:
        oriented = sub_stages

    x0 = frame.gap.hi
    gap_len = frame.gap.length
    left_reach = x0 - frame.left_bridge.lo
    right_reach = frame.right_bridge.length
    if not (tau * gap_len <= right_reach and tau * gap_len <= left_reach - gap_len):
        raise InternalContradictionError(
            "bridge-ratio facts failed although thickness was verified"
        )

    # The map sending the left offset (the intersection variable) to the
    # right offset: the certified inverse when no reflection happened, the
    # exact polynomial after reflecting (the roles of f and its inverse swap).
    bracket = ClosedInterval(Fraction(0), tau * right_reach)
    inverse = _InverseMap(f, bracket, cfg.inverse_precision)
    image_map = inverse if not reflected else _ExactMap(f)

    # Mean-value bound: the image of the right reach must fall strictly
    # inside (gap length, left reach); guaranteed by the validated window.
    reach_enc = image_map.point(right_reach)
    if reach_enc.hi <= gap_len or reach_enc.lo >= left_reach:
        raise InternalContradictionError(
            f"image of the right reach {reach_enc.lo}..{reach_enc.hi} left the "
            f"open interval ({gap_len}, {left_reach}) despite validated bounds"
        )
    if not (gap_len < reach_enc.lo and reach_enc.hi < left_reach):
        raise PrecisionError(
            "enclosure of the mapped right reach straddles a frame bound",
            retry_hint="tighten inverse_precision",
        )

    left_window = ClosedInterval(x0 - left_reach, x0 - gap_len)
    right_window = ClosedInterval(x0, x0 + right_reach)
    reflected_left = [
        affine_image(restrict(s, left_window), Fraction(-1), x0) for s in oriented
    ]
    right_rel = [
        affine_image(restrict(s, right_window), Fraction(1), -x0) for s in oriented
    ]

    image_stages: list[CantorStage] = []
    image_thickness_min: Optional[Fraction] = None
    for stage in right_rel:
        pieces = []
        for iv in stage.intervals:
            img = image_map.outward(iv)
            if pieces and not pieces[-1].hi < img.lo:
                raise PrecisionError(
                    "outward-rounded image intervals collide",
                    retry_hint="tighten inverse_precision",
                )
            pieces.append(img)
        image_stage = CantorStage(tuple(pieces), depth=stage.depth, allow_degenerate=True)
        image_stages.append(image_stage)
        if image_stage.count >= 2:
            tv = thickness(image_stage).value
            if tv <= rho * tau:
                raise _RetryDelta(
                    f"image stage thickness {tv} at level {stage.depth} "
                    f"is not above rho*tau = {rho * tau}"
                )
            if image_thickness_min is None or tv < image_thickness_min:
                image_thickness_min = tv
    if image_thickness_min is None:
        raise _RetryDelta("image stages never developed a bounded gap")

    chain = persistent_intersect(reflected_left, image_stages, check=False).chain
    deepest = chain[-1]

    # Tighten inward so the mapped offset provably lands inside its source
    # interval, then shrink to the witness width.
    host_img = image_stages[-1].interval_containing(deepest)
    if host_img is None:
        raise InternalContradictionError("deepest common interval left the image stage")
    source = right_rel[-1].intervals[image_stages[-1].intervals.index(host_img)]
    inner = image_map.inward(source)
    tight = None if inner is None else deepest.intersection(inner)
    if tight is None:
        raise PrecisionError(
            "intersection survives only in the outward-rounding fringe",
            retry_hint="tighten inverse_precision or add depth",
        )
    u = _shrink_centered(tight, WITNESS_WIDTH)
    u_enc = CertifiedValue(u.lo, u.hi)

    if not reflected:
        # u is the t offset; the right offset is the exact polynomial image.
        t_enc = u_enc
        ft_enc = _ExactMap(f).enclosure_image(u_enc)
        x = x0
    else:
        # u is the right offset s = f(t); t needs the certified inverse,
        # clamped into its (exactly known) source interval.
        ft_enc = u_enc
        raw = inverse.enclosure_image(u_enc)
        lo = max(raw.lo, source.lo)
        hi = min(raw.hi, source.hi)
        if lo > hi:
            raise PrecisionError(
                "inverse enclosure of the witness offset collapsed",
                retry_hint="tighten inverse_precision",
            )
        t_enc = CertifiedValue(lo, hi)
        x = -x0

    witness = _build_witness(family, sub.depth_offset + levels, x, t_enc, ft_enc)
    report = verify_witness(family, witness, f)
    if not report["ok"]:
        raise InternalContradictionError(
            "configuration witness failed self-verification: "
            + "; ".join(report["failures"])
        )
    return FindConfigResult(
        witness=witness,
        tau=tau,
        rho=rho,
        epsilon=eps,
        delta=delta,
        reflected=reflected,
        extraction_offset=sub.depth_offset,
        image_thickness_min=image_thickness_min,
    )


# ---------------------------------------------------------------------------
# Mean-value bound verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MvtBoundsReport:
    """Per-inequality report for the mean-value frame bound.

    Geometry: a gap of width ``gap_width`` with its right endpoint at the
    origin, the left bridge reaching ``left_reach`` left of the origin, the
    right bridge reaching ``right_reach`` right of it.  The claim: a map g
    with g(0) = 0 and derivative strictly inside (1/tau, 1 + 1/tau) on the
    right bridge sends its far end strictly between the gap width and the
    left reach.
    """

    gap_width: Fraction
    left_reach: Fraction
    right_reach: Fraction
    tau: Fraction
    hypotheses: dict
    value: Optional[Fraction]
    lower_ok: bool
    upper_ok: bool

    @property
    def hypotheses_ok(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def conclusion_ok(self) -> bool:
        return self.lower_ok and self.upper_ok

    @property
    def all_ok(self) -> bool:
        return self.hypotheses_ok and self.conclusion_ok

    def to_json(self) -> dict:
        return {
            "gap_width": rational_str(self.gap_width),
            "left_reach": rational_str(self.left_reach),
            "right_reach": rational_str(self.right_reach),
            "tau": rational_str(self.tau),
            "hypotheses": dict(self.hypotheses),
            "value": None if self.value is None else rational_str(self.value),
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
            "all_ok": self.all_ok,
        }


def verify_mvt_bounds(
    gap_width: RationalLike,
    left_reach: RationalLike,
    right_reach: RationalLike,
    tau: RationalLike,
    g: FunctionSpec,
    bracket: Optional[ClosedInterval] = None,
) -> MvtBoundsReport:
    """Check 0 < gap_width < g(right_reach) < left_reach, reporting every
    hypothesis and both conclusion inequalities separately (violations are
    reported, never thrown)."""
    a = to_rational(gap_width)
    b = to_rational(left_reach)
    c = to_rational(right_reach)
    tau = to_rational(tau)
    window = bracket if bracket is not None else ClosedInterval(Fraction(0), max(c, Fraction(0)))

    hypotheses = {
        "positive_lengths": a > 0 and b > 0 and c > 0,
        "tau_above_one": tau > 1,
        "left_at_least_right": b - a >= c,
        "right_bridge_ratio": tau * a <= c,
        "left_bridge_ratio": tau * a <= b - a,
        "derivative_window_lower": False,
        "derivative_window_upper": False,
    }
    if tau > 1 and window.length >= 0:
        bounds = range_bounds(g.polynomial().derivative(), window)
        hypotheses["derivative_window_lower"] = bounds.lo > 1 / tau
        hypotheses["derivative_window_upper"] = bounds.hi < 1 + 1 / tau

    value = eval_function(g, c) if c > 0 else None
    lower_ok = value is not None and a < value
    upper_ok = value is not None and value < b
    return MvtBoundsReport(
        gap_width=a,
        left_reach=b,
        right_reach=c,
        tau=tau,
        hypotheses=hypotheses,
        value=value,
        lower_ok=lower_ok,
        upper_ok=upper_ok,
    )


# ---------------------------------------------------------------------------
# Counterexample verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AvoidanceReport:
    """Exact verification that the five-interval set avoids its target
    configurations; every check is an endpoint inequality over rationals."""

    checks: tuple[tuple[str, bool, str], ...]
    thickness: Fraction
    tau: Fraction
    eps: Fraction
    c: Fraction

    @property
    def all_passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def to_json(self) -> dict:
        return {
            "checks": [
                {"name": name, "passed": ok, "detail": detail}
                for name, ok, detail in self.checks
            ],
            "thickness": rational_str(self.thickness),
            "tau": rational_str(self.tau),
            "eps": rational_str(self.eps),
            "c": rational_str(self.c),
            "all_passed": self.all_passed,
        }


def avoidance_checks(parts: dict, tau: Fraction, eps: Fraction) -> list[tuple[str, bool, str]]:
    """Endpoint-inequality checks on a named-parts dictionary.

    Exposed separately so deliberate tampering (shifting a piece into the
    squared image of another) is detectable in isolation.
    """
    checks: list[tuple[str, bool, str]] = []

    i1, i2 = parts["I1"], parts["I2"]
    g3, g4 = parts["G3"], parts["G4"]
    # Squaring is monotone on positive reals, so interval containment of the
    # squared reflections reduces to endpoint inequalities.
    r1 = ClosedInterval(-i1.hi, -i1.lo)
    r2 = ClosedInterval(-i2.hi, -i2.lo)
    sq1 = ClosedInterval(r1.lo ** 2, r1.hi ** 2)
    sq2 = ClosedInterval(r2.lo ** 2, r2.hi ** 2)
    ok1 = g4.lo < sq1.lo and sq1.hi < g4.hi
    checks.append(
        (
            "squares_of_I1_reflection_inside_G4",
            ok1,
            f"{g4.lo} < {sq1.lo} and {sq1.hi} < {g4.hi}",
        )
    )
    ok2 = g3.lo < sq2.lo and sq2.hi < g3.hi
    checks.append(
        (
            "squares_of_I2_reflection_inside_G3",
            ok2,
            f"{g3.lo} < {sq2.lo} and {sq2.hi} < {g3.hi}",
        )
    )
    top = parts["I5"].hi
    ok3 = top ** 2 < eps
    checks.append(
        (
            "max_point_square_below_largest_gap",
            ok3,
            f"max(conv K)^2 = {top ** 2} vs eps = {eps}",
        )
    )
    return checks


def verify_counterexample(
    params: CounterexampleParams,
    thickness_tol: RationalLike = Fraction(1, 10 ** 6),
) -> AvoidanceReport:
    """Full avoidance report for a (preferably calibrated) parameter set."""
    tol = to_rational(thickness_tol)
    parts = counterexample_parts(params)
    stage = counterexample_set(params)
    value = thickness(stage).value
    checks = avoidance_checks(parts, params.tau, params.eps)
    ok_t = abs(value - params.tau) <= tol
    checks.append(
        (
            "thickness_matches_target",
            ok_t,
            f"exact thickness {value} vs target {params.tau} (tol {tol})",
        )
    )
    return AvoidanceReport(
        checks=tuple(checks),
        thickness=value,
        tau=params.tau,
        eps=params.eps,
        c=params.c,
    )

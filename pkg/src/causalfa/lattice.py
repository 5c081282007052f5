"""Finite 1+1 dimensional causal lattices.

Points are integer pairs (t, x).  The causal order is

    (t', x') in J+((t, x))  iff  t' - t >= d(x, x')

with d the spatial distance of the topology (cyclic for the cylinder,
absolute difference for the strip); the chronological order I+ uses the
strict inequality.  A region is a causally convex finite point set inside
one ambient lattice; regions model both spacetimes and the embeddings
between them (inclusions).

Cauchy surfaces are integer graphs sigma : x -> t with |Δsigma| <= 1 on
adjacent columns.  Because sigma is then 1-Lipschitz for d, the sign
s(p) = t - sigma(x) is strictly increasing along chronological steps, so a
maximal chronological chain meets the graph at most once, where "meets"
counts both landing on the graph and jumping across it (the lattice
surrogate of curve continuity).  A chain certainly meets it iff its first
point has s <= 0 and its last has s >= 0; for a causally convex region
this happens for every inclusion-maximal chain iff sigma passes through
every column interval of the region.  That per-column threading criterion
is the fast implementation used here; the chain-enumeration oracle is kept
alongside for cross-checking.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional

Point = tuple[int, int]

CYLINDER = "cylinder"
STRIP = "strip"

DEFAULT_BUDGET = 200_000


class LatticeError(ValueError):
    pass


class NotCausallyConvexError(LatticeError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(sorted(violations))


class BudgetExceededError(LatticeError):
    pass


def enumeration_budget() -> int:
    """Oracle enumeration cap, overridable via CAUSAL_FA_BUDGET."""
    raw = os.environ.get("CAUSAL_FA_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError as exc:
        raise LatticeError(f"CAUSAL_FA_BUDGET must be an integer, got {raw!r}") from exc


@dataclass(frozen=True)
class LatticeSpacetime:
    """Ambient lattice: periodic space (cylinder) or a bounded global diamond (strip)."""

    topology: str
    t_extent: int
    x_extent: int

    def __post_init__(self):
        if self.topology not in (CYLINDER, STRIP):
            raise LatticeError(f"unknown topology {self.topology!r}")
        if self.t_extent < 1 or self.x_extent < 1:
            raise LatticeError("extents must be positive")

    def spatial_distance(self, x0: int, x1: int) -> int:
        delta = abs(x0 - x1)
        if self.topology == CYLINDER:
            return min(delta, self.x_extent - delta)
        return delta

    @property
    def strip_center(self) -> int:
        return (self.x_extent - 1) // 2

    def in_window(self, p: Point) -> bool:
        t, x = p
        return 0 <= t < self.t_extent and 0 <= x < self.x_extent

    def contains(self, p: Point) -> bool:
        if not self.in_window(p):
            return False
        if self.topology == STRIP:
            # Points restricted to the global diamond between (0, c) and (T-1, c)
            # so that the bounded strip behaves like a causally convex slice.
            t, x = p
            c = self.strip_center
            return t >= abs(x - c) and (self.t_extent - 1 - t) >= abs(x - c)
        return True

    @cached_property
    def points(self) -> frozenset[Point]:
        return frozenset(
            (t, x)
            for t in range(self.t_extent)
            for x in range(self.x_extent)
            if self.contains((t, x))
        )

    def spatial_neighbors(self, x: int) -> tuple[int, ...]:
        if self.topology == CYLINDER:
            if self.x_extent == 1:
                return ()
            if self.x_extent == 2:
                return ((x + 1) % 2,)
            return ((x - 1) % self.x_extent, (x + 1) % self.x_extent)
        out = []
        if x > 0:
            out.append(x - 1)
        if x + 1 < self.x_extent:
            out.append(x + 1)
        return tuple(out)

    def causally_precedes(self, p: Point, q: Point) -> bool:
        """q in J+(p); reflexive."""
        return q[0] - p[0] >= self.spatial_distance(p[1], q[1])

    def chronologically_precedes(self, p: Point, q: Point) -> bool:
        """q in I+(p); irreflexive."""
        return q[0] - p[0] > self.spatial_distance(p[1], q[1])


def cone_points(
    ambient: LatticeSpacetime,
    seeds: Iterable[Point],
    future: bool = True,
    strict: bool = False,
) -> frozenset[Point]:
    seeds = list(seeds)
    if not seeds:
        return frozenset()
    rel = ambient.chronologically_precedes if strict else ambient.causally_precedes
    if future:
        return frozenset(q for q in ambient.points if any(rel(p, q) for p in seeds))
    return frozenset(q for q in ambient.points if any(rel(q, p) for p in seeds))


def convexity_violations(ambient: LatticeSpacetime, pts: Iterable[Point]) -> frozenset[Point]:
    pts = frozenset(pts)
    if not pts:
        return frozenset()
    fut = cone_points(ambient, pts, future=True)
    past = cone_points(ambient, pts, future=False)
    return frozenset((fut & past) - pts)


def is_causally_convex(ambient: LatticeSpacetime, pts: Iterable[Point]) -> bool:
    return not convexity_violations(ambient, pts)


def causal_hull(ambient: LatticeSpacetime, pts: Iterable[Point]) -> frozenset[Point]:
    """Least causally convex superset."""
    current = frozenset(pts)
    while True:
        extra = convexity_violations(ambient, current)
        if not extra:
            return current
        current |= extra


@dataclass(frozen=True)
class Region:
    """A causally convex finite point set inside one ambient lattice."""

    ambient: LatticeSpacetime
    points: frozenset[Point]
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "points", frozenset(self.points))
        stray = [p for p in self.points if not self.ambient.contains(p)]
        if stray:
            raise LatticeError(f"points outside the ambient lattice: {sorted(stray)[:4]}")
        bad = convexity_violations(self.ambient, self.points)
        if bad:
            raise NotCausallyConvexError(
                f"region {self.name or ''} is not causally convex; "
                f"missing points include {sorted(bad)[:6]}",
                violations=bad,
            )

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_points(cls, ambient, pts, name=None) -> "Region":
        return cls(ambient, frozenset(pts), name)

    @classmethod
    def slab(cls, ambient, t_min: int, t_max: int, name=None) -> "Region":
        pts = frozenset(p for p in ambient.points if t_min <= p[0] <= t_max)
        if not pts:
            raise LatticeError(f"slab [{t_min}, {t_max}] is empty")
        return cls(ambient, pts, name)

    @classmethod
    def window(cls, ambient, name=None) -> "Region":
        return cls(ambient, ambient.points, name)

    @classmethod
    def diamond(cls, ambient, apex_past: Point, apex_future: Point, name=None) -> "Region":
        apex_past = tuple(apex_past)
        apex_future = tuple(apex_future)
        for apex in (apex_past, apex_future):
            if not ambient.contains(apex):
                raise LatticeError(f"diamond apex {apex} outside the ambient lattice")
        pts = cone_points(ambient, [apex_past], future=True) & cone_points(
            ambient, [apex_future], future=False
        )
        if not pts:
            raise LatticeError(f"diamond {apex_past} -> {apex_future} is empty")
        return cls(ambient, pts, name)

    # -- basic geometry ----------------------------------------------------

    def __len__(self):
        return len(self.points)

    def labelled(self, name: str) -> "Region":
        return Region(self.ambient, self.points, name)

    @cached_property
    def t_min(self) -> int:
        return min(t for t, _ in self.points)

    @cached_property
    def t_max(self) -> int:
        return max(t for t, _ in self.points)

    @cached_property
    def columns(self) -> dict[int, tuple[int, int]]:
        """Per-column time interval (lo, hi); convexity makes columns contiguous."""
        cols: dict[int, tuple[int, int]] = {}
        for t, x in self.points:
            lo, hi = cols.get(x, (t, t))
            cols[x] = (min(lo, t), max(hi, t))
        return cols

    @cached_property
    def footprint(self) -> frozenset[int]:
        return frozenset(self.columns)

    @cached_property
    def full_footprint(self) -> bool:
        return self.footprint == frozenset(x for _, x in self.ambient.points)

    def column_interval(self, x: int) -> Optional[tuple[int, int]]:
        return self.columns.get(x)

    def contains_region(self, other: "Region") -> bool:
        return other.points <= self.points


def region_cone(region: Region, direction: str = "future", mode: str = "causal") -> frozenset[Point]:
    """J or I cone of a region's point set inside its ambient lattice."""
    if direction not in ("future", "past"):
        raise LatticeError(f"direction must be future/past, got {direction!r}")
    if mode not in ("causal", "chronological"):
        raise LatticeError(f"mode must be causal/chronological, got {mode!r}")
    return cone_points(
        region.ambient,
        region.points,
        future=(direction == "future"),
        strict=(mode == "chronological"),
    )


def are_causally_disjoint(first: Region, second: Region) -> bool:
    if first.ambient != second.ambient:
        raise LatticeError("regions live in different ambient lattices")
    amb = first.ambient
    for p in first.points:
        for q in second.points:
            if amb.causally_precedes(p, q) or amb.causally_precedes(q, p):
                return False
    return True


# ---------------------------------------------------------------------------
# Cauchy surfaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CauchySurfaceGraph:
    """Integer surface graph over all spatial columns, |slope| <= max_slope."""

    ambient: LatticeSpacetime
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        amb = self.ambient
        if len(self.values) != amb.x_extent:
            raise LatticeError("surface graph needs one value per spatial column")
        for t in self.values:
            if not 0 <= t < amb.t_extent:
                raise LatticeError(f"surface value {t} outside the time window")
        self.validate_slope(1)

    def validate_slope(self, max_slope: int = 1) -> None:
        amb = self.ambient
        for x in range(amb.x_extent):
            for y in amb.spatial_neighbors(x):
                if abs(self.values[x] - self.values[y]) > max_slope:
                    raise LatticeError(
                        f"surface slope bound {max_slope} violated between columns {x} and {y}"
                    )

    def sign(self, p: Point) -> int:
        """Surface-relative time: <0 below, 0 on, >0 above the graph."""
        return p[0] - self.values[p[1]]

    @cached_property
    def graph_points(self) -> frozenset[Point]:
        return frozenset(
            (self.values[x], x)
            for x in range(self.ambient.x_extent)
            if self.ambient.contains((self.values[x], x))
        )

    def is_achronal(self) -> bool:
        amb = self.ambient
        pts = sorted(self.graph_points)
        return not any(
            amb.chronologically_precedes(p, q) for p in pts for q in pts if p != q
        )


def _lipschitz_upper_envelope(
    ambient: LatticeSpacetime, bounds: dict[int, int], default: int
) -> list[int]:
    env = []
    for x in range(ambient.x_extent):
        best = default
        for y, b in bounds.items():
            best = min(best, b + ambient.spatial_distance(x, y))
        env.append(best)
    return env


def _lipschitz_lower_envelope(
    ambient: LatticeSpacetime, bounds: dict[int, int], default: int
) -> list[int]:
    env = []
    for x in range(ambient.x_extent):
        best = default
        for y, b in bounds.items():
            best = max(best, b - ambient.spatial_distance(x, y))
        env.append(best)
    return env


def lipschitz_surface_between(
    ambient: LatticeSpacetime,
    lower: dict[int, int],
    upper: dict[int, int],
    prefer: Optional[int] = None,
) -> Optional[CauchySurfaceGraph]:
    """A slope-1 graph with lower[x] <= sigma(x) <= upper[x] on the given columns.

    Returns None when the constraints admit no 1-Lipschitz selection.  With
    prefer set, the selection clamps that flat height into the feasible
    envelope (used for deterministic mid-window choices).
    """
    top = _lipschitz_upper_envelope(ambient, upper, ambient.t_extent - 1)
    bot = _lipschitz_lower_envelope(ambient, lower, 0)
    if any(b > t for b, t in zip(bot, top)):
        return None
    if prefer is None:
        values = top
    else:
        values = [max(b, min(prefer, t)) for b, t in zip(bot, top)]
    return CauchySurfaceGraph(ambient, tuple(values))


def is_cauchy_surface_of(sigma: CauchySurfaceGraph, M: Region) -> bool:
    """Every inclusion-maximal chronological chain in M crosses sigma exactly once.

    Pointwise form: a point of M strictly above the graph must have its
    one-step past neighbour in M, and dually below.  For a causally convex M
    this is equivalent to the graph threading every column interval.
    """
    pts = M.points
    for (t, x) in pts:
        s = t - sigma.values[x]
        if s > 0 and (t - 1, x) not in pts:
            return False
        if s < 0 and (t + 1, x) not in pts:
            return False
    return True


def find_cauchy_surface_in(U: Region, M: Region) -> Optional[CauchySurfaceGraph]:
    """A surface graph whose restriction to M lies in U and is Cauchy for M."""
    if not M.contains_region(U):
        raise LatticeError("U must be a subregion of M")
    if not M.points:
        raise LatticeError("M must be nonempty")
    if not M.footprint <= U.footprint:
        return None
    lower = {}
    upper = {}
    for x in M.footprint:
        lo, hi = U.columns[x]
        lower[x] = lo
        upper[x] = hi
    return lipschitz_surface_between(U.ambient, lower, upper)


def is_cauchy_subregion(U: Region, M: Region) -> bool:
    return find_cauchy_surface_in(U, M) is not None


def surface_slabs(sigma: CauchySurfaceGraph, M: Region) -> tuple[Region, Region]:
    """Strict future/past slabs I±(graph sigma) ∩ M of a surface inside M."""
    missing = [p for p in sigma.graph_points if p[1] in M.footprint and p not in M.points]
    if missing or not M.footprint:
        raise LatticeError(
            f"surface graph leaves the region at columns {sorted(x for _, x in missing)[:6]}"
        )
    touches = [
        x
        for x in sorted(M.footprint)
        if sigma.values[x] >= M.columns[x][1] or sigma.values[x] <= M.columns[x][0]
    ]
    if touches:
        raise LatticeError(
            f"surface touches the region's time boundary at columns {touches[:6]}"
        )
    plus = frozenset(p for p in M.points if sigma.sign(p) > 0)
    minus = frozenset(p for p in M.points if sigma.sign(p) < 0)
    name = M.name or "M"
    return (
        Region(M.ambient, plus, f"{name}+"),
        Region(M.ambient, minus, f"{name}-"),
    )


def extend_to_cauchy_surface(anchor: Iterable[Point], M: Region) -> CauchySurfaceGraph:
    """Slope-1 graph through the achronal anchor points, clamped toward mid-window."""
    amb = M.ambient
    anchor = sorted(set(anchor))
    seen_cols: dict[int, int] = {}
    for t, x in anchor:
        if (t, x) not in M.points:
            raise LatticeError(f"anchor point {(t, x)} is not in the region")
        if x in seen_cols:
            raise LatticeError(f"two anchor points share column {x}")
        seen_cols[x] = t
    for p, q in itertools.combinations(anchor, 2):
        if amb.chronologically_precedes(p, q) or amb.chronologically_precedes(q, p):
            raise LatticeError(f"anchor points {p} and {q} are chronologically related")
    mid = (M.t_min + M.t_max) // 2
    bounds = dict(seen_cols)
    sigma = lipschitz_surface_between(amb, bounds, bounds, prefer=mid)
    if sigma is None:
        raise LatticeError("anchor admits no slope-1 surface")
    clamped = tuple(max(M.t_min, min(M.t_max, v)) for v in sigma.values)
    sigma = CauchySurfaceGraph(amb, clamped)
    if any(sigma.values[x] != t for x, t in seen_cols.items()):
        raise LatticeError("region time window too tight around the anchor")
    return sigma


def rc_join(U1: Region, U2: Region, M: Region) -> Region:
    """A causally convex region of M containing U1 and U2.

    Construction: put a surface strictly above K = U1 ∪ U2, cut the causal
    future of K below it, then take the chronological diamond over a one-step
    past thickening of K (the thickening compensates the strict cones on a
    discrete grid).
    """
    amb = M.ambient
    for U in (U1, U2):
        if not M.contains_region(U):
            raise LatticeError("rc_join inputs must be subregions of M")
    K = U1.points | U2.points
    if not K:
        raise LatticeError("rc_join of empty regions")
    over = {}
    for x in range(amb.x_extent):
        best = None
        for (t, y) in K:
            cand = t - amb.spatial_distance(x, y)
            best = cand if best is None else max(best, cand)
        over[x] = best + 1
    lower = dict(over)
    upper = {}
    for x in sorted(M.footprint):
        lo, hi = M.columns[x]
        lower[x] = max(lower.get(x, lo), lo)
        upper[x] = hi
    sigma = lipschitz_surface_between(amb, lower, upper)
    if sigma is None:
        raise LatticeError("no surface strictly above the union fits inside M")
    future_k = cone_points(amb, K, future=True)
    past_sigma = cone_points(amb, sigma.graph_points, future=False)
    S = future_k & past_sigma & M.points
    thickened = set(K)
    for (t, x) in K:
        if (t - 1, x) in M.points:
            thickened.add((t - 1, x))
    joined = (
        cone_points(amb, thickened, future=True, strict=True)
        & cone_points(amb, S, future=False, strict=True)
        & M.points
    )
    if not K <= joined:
        raise LatticeError("rc_join could not absorb the inputs; region too tight")
    return Region(amb, joined, "join")


# ---------------------------------------------------------------------------
# Chronological-path oracle
# ---------------------------------------------------------------------------


def _immediate_successors(M: Region) -> dict[Point, tuple[Point, ...]]:
    amb = M.ambient
    pts = sorted(M.points)
    future: dict[Point, list[Point]] = {p: [] for p in pts}
    for p in pts:
        for q in pts:
            if amb.chronologically_precedes(p, q):
                future[p].append(q)
    succ: dict[Point, tuple[Point, ...]] = {}
    for p in pts:
        out = []
        for q in future[p]:
            if not any(amb.chronologically_precedes(r, q) for r in future[p]):
                out.append(q)
        succ[p] = tuple(sorted(out))
    return succ


def enumerate_chronological_paths(
    M: Region, budget: Optional[int] = None
) -> list[tuple[Point, ...]]:
    """All inclusion-maximal chronological chains in M.

    Consecutive chain points are immediate chronological successors (no
    strictly-between point).  Raises BudgetExceededError past the cap.
    """
    if budget is None:
        budget = enumeration_budget()
    succ = _immediate_successors(M)
    amb = M.ambient
    starts = [
        p
        for p in sorted(M.points)
        if not any(amb.chronologically_precedes(q, p) for q in M.points)
    ]
    paths: list[tuple[Point, ...]] = []
    stack: list[tuple[Point, ...]] = [(p,) for p in reversed(starts)]
    while stack:
        chain = stack.pop()
        nxt = succ[chain[-1]]
        if not nxt:
            paths.append(chain)
            if len(paths) > budget:
                raise BudgetExceededError(
                    f"more than {budget} maximal chains; raise CAUSAL_FA_BUDGET"
                )
            continue
        for q in reversed(nxt):
            stack.append(chain + (q,))
    return paths


def path_meet_count(sigma: CauchySurfaceGraph, path: tuple[Point, ...]) -> int:
    """Number of times a chronological chain meets the surface (point or crossing)."""
    signs = [sigma.sign(p) for p in path]
    for a, b in zip(signs, signs[1:]):
        if b <= a:
            raise LatticeError("chain is not chronological against a slope-1 surface")
    meets = sum(1 for s in signs if s == 0)
    meets += sum(1 for a, b in zip(signs, signs[1:]) if a < 0 < b)
    return meets


def is_cauchy_surface_by_paths(
    sigma: CauchySurfaceGraph, M: Region, paths=None, budget: Optional[int] = None
) -> bool:
    if paths is None:
        paths = enumerate_chronological_paths(M, budget=budget)
    return all(path_meet_count(sigma, path) == 1 for path in paths)


def iter_surface_graphs(
    ambient: LatticeSpacetime, budget: Optional[int] = None
) -> Iterator[CauchySurfaceGraph]:
    """All slope-valid surface graphs over the window (oracle use, tiny lattices)."""
    if budget is None:
        budget = enumeration_budget()
    T, X = ambient.t_extent, ambient.x_extent
    produced = 0
    partial: list[int] = []

    def ok(x: int, value: int) -> bool:
        for y in ambient.spatial_neighbors(x):
            if y < len(partial) and abs(partial[y] - value) > 1:
                return False
        return True

    def rec(x: int):
        nonlocal produced
        if x == X:
            values = tuple(partial)
            # cylinder closure between the last and first column is enforced by ok()
            produced += 1
            if produced > budget:
                raise BudgetExceededError("surface enumeration budget exceeded")
            yield CauchySurfaceGraph(ambient, values)
            return
        for v in range(T):
            if ok(x, v):
                partial.append(v)
                yield from rec(x + 1)
                partial.pop()

    yield from rec(0)


def is_cauchy_subregion_by_paths(
    U: Region, M: Region, budget: Optional[int] = None
) -> bool:
    """Oracle twin of is_cauchy_subregion: brute force over surfaces and chains."""
    if not M.contains_region(U):
        raise LatticeError("U must be a subregion of M")
    paths = enumerate_chronological_paths(M, budget=budget)
    for sigma in iter_surface_graphs(M.ambient, budget=budget):
        restricted = [p for p in sigma.graph_points if p in M.points]
        if not all(p in U.points for p in restricted):
            continue
        if all(path_meet_count(sigma, path) == 1 for path in paths):
            return True
    return False


# ---------------------------------------------------------------------------
# Bitmask helpers (exhaustive desk-scale sweeps)
# ---------------------------------------------------------------------------


class CausalMasks:
    """Causal/chronological relations of an ambient lattice packed into bitmasks."""

    def __init__(self, ambient: LatticeSpacetime):
        self.ambient = ambient
        self.index = {p: i for i, p in enumerate(sorted(ambient.points))}
        self.points = sorted(ambient.points)
        n = len(self.points)
        self.n = n
        self.fut = [0] * n
        self.past = [0] * n
        self.ifut = [0] * n
        self.ipast = [0] * n
        for i, p in enumerate(self.points):
            for j, q in enumerate(self.points):
                if ambient.causally_precedes(p, q):
                    self.fut[i] |= 1 << j
                    self.past[j] |= 1 << i
                if ambient.chronologically_precedes(p, q):
                    self.ifut[i] |= 1 << j
                    self.ipast[j] |= 1 << i

    def mask_of(self, pts: Iterable[Point]) -> int:
        m = 0
        for p in pts:
            m |= 1 << self.index[p]
        return m

    def points_of(self, mask: int) -> frozenset[Point]:
        return frozenset(p for p, i in self.index.items() if mask >> i & 1)

    def bits(self, mask: int) -> Iterator[int]:
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def future_of(self, mask: int) -> int:
        out = 0
        for i in self.bits(mask):
            out |= self.fut[i]
        return out

    def past_of(self, mask: int) -> int:
        out = 0
        for i in self.bits(mask):
            out |= self.past[i]
        return out

    def hull(self, mask: int) -> int:
        while True:
            extra = self.future_of(mask) & self.past_of(mask) & ~mask
            if not extra:
                return mask
            mask |= extra

    def is_convex(self, mask: int) -> bool:
        return not (self.future_of(mask) & self.past_of(mask) & ~mask)


def enumerate_causally_convex_masks(
    masks: CausalMasks, budget: Optional[int] = None
) -> set[int]:
    """All nonempty causally convex subsets, as bitmasks.

    Causal convexity is order convexity, a convex geometry: dropping a maximal
    element of a convex set keeps it convex, so breadth-first hull expansion
    from singletons reaches every convex set.
    """
    if budget is None:
        budget = enumeration_budget()
    seen: set[int] = set()
    frontier = [1 << i for i in range(masks.n)]
    seen.update(frontier)
    while frontier:
        nxt = []
        for mask in frontier:
            for i in range(masks.n):
                bit = 1 << i
                if mask & bit:
                    continue
                grown = masks.hull(mask | bit)
                if grown not in seen:
                    seen.add(grown)
                    if len(seen) > budget:
                        raise BudgetExceededError(
                            f"more than {budget} causally convex regions"
                        )
                    nxt.append(grown)
        frontier = nxt
    return seen

"""Zero location and counting in axis-aligned rectangles.

Winding numbers come from boundary phase tracking: walk the contour
counter-clockwise, accumulate principal-branch phase increments of F, and
bisect any segment whose increment exceeds max_phase_step.  The closed-loop
total is 2*pi*(zeros - poles) counted with multiplicity.  Zero localization
quadrisects until each cell holds winding 1, then polishes with Newton using
a central-difference derivative.

Near-zero boundary samples trigger a deterministic outward jitter; the
near-zero threshold is 10 * zero_tol, scaled down by the magnitude of the
neighbouring samples when those sit below 1, so that exponentially small
functions (completed-zeta combinations at height t) remain scannable.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .config import ComplexValue, EvalConfig, DEFAULT_CONFIG
from .errors import (
    ContourError,
    DepthExceeded,
    NearZeroOnContour,
    PoleProximity,
    ZetaError,
)
from .expr import eval_expr, pole_set

TWO_PI = 2.0 * math.pi
_SAMPLES_PER_UNIT = 8.0      # extra boundary samples per unit of edge length
_TILE_HEIGHT = 25.0          # density-scan strip height
_NEWTON_MAX_STEPS = 60
_JITTER_RETRIES = 8
_CELL_EVAL_BUDGET = 4_000_000
_FRONTIER_TARGET = 16        # fixed fan-out so results do not depend on threads


@dataclass(frozen=True)
class Rectangle:
    sigma_lo: float
    sigma_hi: float
    t_lo: float
    t_hi: float

    def __post_init__(self):
        if not (self.sigma_lo < self.sigma_hi and self.t_lo < self.t_hi):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def width(self) -> float:
        return self.sigma_hi - self.sigma_lo

    @property
    def height(self) -> float:
        return self.t_hi - self.t_lo

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.sigma_lo + self.sigma_hi),
                       0.5 * (self.t_lo + self.t_hi))

    def corners(self) -> list[complex]:
        return [
            complex(self.sigma_lo, self.t_lo),
            complex(self.sigma_hi, self.t_lo),
            complex(self.sigma_hi, self.t_hi),
            complex(self.sigma_lo, self.t_hi),
        ]

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (self.sigma_lo - margin <= z.real <= self.sigma_hi + margin
                and self.t_lo - margin <= z.imag <= self.t_hi + margin)

    def strictly_contains(self, z: complex) -> bool:
        return (self.sigma_lo < z.real < self.sigma_hi
                and self.t_lo < z.imag < self.t_hi)

    def expand(self, d: float) -> "Rectangle":
        return Rectangle(self.sigma_lo - d, self.sigma_hi + d,
                         self.t_lo - d, self.t_hi + d)

    def boundary_distance(self, z: complex) -> float:
        dx = max(self.sigma_lo - z.real, 0.0, z.real - self.sigma_hi)
        dy = max(self.t_lo - z.imag, 0.0, z.imag - self.t_hi)
        if dx > 0.0 or dy > 0.0:
            return math.hypot(dx, dy)
        return min(z.real - self.sigma_lo, self.sigma_hi - z.real,
                   z.imag - self.t_lo, self.t_hi - z.imag)

    def as_list(self) -> list[float]:
        return [self.sigma_lo, self.sigma_hi, self.t_lo, self.t_hi]


@dataclass(frozen=True)
class ContourConfig:
    init_samples_per_edge: int = 64
    max_phase_step: float = math.pi / 2
    max_depth: int = 40
    min_cell: float = 1e-9
    jitter: float = 1e-7
    zero_tol: float = 1e-8

    def __post_init__(self):
        if not 0.0 < self.max_phase_step < math.pi:
            raise ValueError("max_phase_step must be in (0, pi)")
        if self.init_samples_per_edge < 4:
            raise ValueError("init_samples_per_edge must be >= 4")


DEFAULT_CONTOUR = ContourConfig()


@dataclass(frozen=True)
class ZeroRecord:
    location: ComplexValue
    residual: float
    winding_mult: int
    rect: Rectangle
    refine_steps: int


@dataclass(frozen=True)
class UnresolvedCell:
    rect: Rectangle
    winding: int
    reason: str


@dataclass(frozen=True)
class LocalizeResult:
    records: tuple[ZeroRecord, ...]
    unresolved: tuple[UnresolvedCell, ...]

    @property
    def complete(self) -> bool:
        return not self.unresolved


@dataclass(frozen=True)
class DensityScan:
    sigma0: float
    sigma_cap: float
    t_floor: float
    T_values: tuple[float, ...]
    counts: tuple[int, ...]
    fit_slope: float
    complete: bool


@dataclass(frozen=True)
class CriticalLineReport:
    records: tuple[ZeroRecord, ...]
    unresolved: tuple[UnresolvedCell, ...]
    max_offline: float
    tol: float
    passed: bool


# ---------------------------------------------------------------------------
# Phase tracking
# ---------------------------------------------------------------------------

class _Walker:
    """Boundary phase tracker for one function; counts evaluations."""

    def __init__(self, fn, cc: ContourConfig):
        self.fn = fn
        self.cc = cc
        self.evals = 0

    def __call__(self, z: complex) -> complex:
        self.evals += 1
        if self.evals > _CELL_EVAL_BUDGET:
            raise DepthExceeded("per-cell evaluation budget exhausted")
        return self.fn(z)

    def boundary_points(self, rect: Rectangle) -> list[complex]:
        pts: list[complex] = []
        corners = rect.corners()
        for i in range(4):
            z0, z1 = corners[i], corners[(i + 1) % 4]
            length = abs(z1 - z0)
            n = max(self.cc.init_samples_per_edge,
                    int(math.ceil(length * _SAMPLES_PER_UNIT)))
            for k in range(n):
                pts.append(z0 + (z1 - z0) * (k / n))
        pts.append(corners[0])
        return pts

    def _near_zero_floor(self, neighbour_mag: float) -> float:
        # Relative to the local magnitude so that exponentially small but
        # smooth stretches of |F| (completed-zeta combinations) do not trip.
        return 10.0 * self.cc.zero_tol * min(1.0, neighbour_mag)

    def winding(self, rect: Rectangle) -> int:
        pts = self.boundary_points(rect)
        vals = [self(z) for z in pts]
        m = len(pts) - 1          # pts[m] == pts[0]
        for i in range(m):
            local = max(abs(vals[(i - 1) % m]), abs(vals[(i + 1) % m]))
            if abs(vals[i]) <= self._near_zero_floor(local):
                raise NearZeroOnContour(
                    f"|F|={abs(vals[i]):.3g} at {pts[i]:.8g}", point=pts[i]
                )

        step = self.cc.max_phase_step
        for attempt in range(3):
            total = 0.0
            for i in range(len(pts) - 1):
                total += self._segment_phase(
                    pts[i], vals[i], pts[i + 1], vals[i + 1], step, 0
                )
            n = round(total / TWO_PI)
            if abs(total - TWO_PI * n) <= 0.01:
                return int(n)
            step *= 0.5     # refine instead of rounding silently
        raise ContourError(
            f"phase accumulator {total:.6f} not near a multiple of 2*pi on {rect}"
        )

    def _segment_phase(self, z0, v0, z1, v1, step, depth) -> float:
        dphi = cmath.phase(v1 / v0)
        if abs(dphi) <= step:
            return dphi
        if depth >= self.cc.max_depth:
            raise DepthExceeded(f"phase bisection depth > {self.cc.max_depth} at {z0:.8g}")
        zm = 0.5 * (z0 + z1)
        vm = self(zm)
        if abs(vm) <= self._near_zero_floor(max(abs(v0), abs(v1))):
            raise NearZeroOnContour(f"|F|={abs(vm):.3g} at {zm:.8g}", point=zm)
        return (self._segment_phase(z0, v0, zm, vm, step, depth + 1)
                + self._segment_phase(zm, vm, z1, v1, step, depth + 1))


def expression_fn(e, cfg: EvalConfig):
    def fn(z: complex) -> complex:
        return eval_expr(e, z, cfg).z
    return fn


def _stable_winding(fn, rect: Rectangle, cc: ContourConfig) -> int:
    """Winding accepted only once two consecutive sampling densities agree.

    Guards against phase aliasing from zeros hugging the contour from either
    side; each densification doubles the samples and halves the phase step.
    """
    prev = None
    for round_ in range(4):
        w = _Walker(fn, _tightened(cc, 2**round_)).winding(rect)
        if prev is not None and w == prev:
            return w
        prev = w
    raise ContourError(f"winding did not stabilize under refinement on {rect}")


def winding_number(e, rect: Rectangle, cc: ContourConfig = DEFAULT_CONTOUR,
                   cfg: EvalConfig = DEFAULT_CONFIG) -> int:
    """(#zeros - #poles) inside rect, counted with multiplicity.

    Poles strictly inside are permitted (they count -1 each per order); a pole
    candidate within jitter of the boundary is rejected up front.
    """
    for cand in pole_set(e):
        if rect.boundary_distance(cand.location) < cc.jitter:
            raise PoleProximity(
                f"pole candidate {cand.location:.6g} within jitter of the contour",
                location=cand.location, source=cand.source,
            )
    return _stable_winding(expression_fn(e, cfg), rect, cc)


# ---------------------------------------------------------------------------
# Zero localization
# ---------------------------------------------------------------------------

def _effective_jitter(rect: Rectangle, cc: ContourConfig) -> float:
    return min(cc.jitter, min(rect.width, rect.height) / 100.0)


def _winding_with_expansion(fn, rect: Rectangle, cc: ContourConfig):
    """Stable winding with the outer boundary pushed outward on near-zero hits."""
    jit = _effective_jitter(rect, cc)
    cur = rect
    for attempt in range(_JITTER_RETRIES + 1):
        try:
            return _stable_winding(fn, cur, cc), cur
        except NearZeroOnContour:
            if attempt == _JITTER_RETRIES:
                raise
            cur = rect.expand(jit * (attempt + 1))
    raise AssertionError("unreachable")


_SPLIT_FRAC = (math.sqrt(5.0) - 1.0) / 2.0   # avoids cuts along symmetry lines


def _tightened(cc: ContourConfig, factor: int) -> ContourConfig:
    if factor == 1:
        return cc
    return ContourConfig(
        init_samples_per_edge=cc.init_samples_per_edge * factor,
        max_phase_step=cc.max_phase_step / factor,
        max_depth=cc.max_depth,
        min_cell=cc.min_cell,
        jitter=cc.jitter,
        zero_tol=cc.zero_tol,
    )


def _split_cell(walker: _Walker, rect: Rectangle, w_parent: int, cc: ContourConfig):
    """Quadrisect with a deterministically jittered, asymmetric split point.

    The split sits at the golden-ratio point rather than the center so that
    zeros on natural symmetry lines (e.g. Re = 1/2) stay strictly inside one
    child.  Children windings must conserve the parent's; near-zero hits shift
    the split point, and a conservation failure (a zero close enough to an
    edge to alias the phase samples) re-measures parent and children with
    progressively denser sampling before giving up.
    """
    jit = max(_effective_jitter(rect, cc), 1e-12 * max(rect.width, rect.height))
    cx = rect.sigma_lo + _SPLIT_FRAC * rect.width
    cy = rect.t_lo + _SPLIT_FRAC * rect.height
    last_exc: Exception | None = None
    for round_ in range(3):
        wk = _Walker(walker.fn, _tightened(cc, 2**round_))
        try:
            w_par = w_parent if round_ == 0 else wk.winding(rect)
        except (NearZeroOnContour, ContourError, DepthExceeded) as exc:
            last_exc = exc
            continue
        for attempt in range(_JITTER_RETRIES + 1):
            sx = cx + jit * attempt
            sy = cy + jit * attempt
            if not (rect.sigma_lo < sx < rect.sigma_hi and rect.t_lo < sy < rect.t_hi):
                break
            children = [
                Rectangle(rect.sigma_lo, sx, rect.t_lo, sy),
                Rectangle(sx, rect.sigma_hi, rect.t_lo, sy),
                Rectangle(sx, rect.sigma_hi, sy, rect.t_hi),
                Rectangle(rect.sigma_lo, sx, sy, rect.t_hi),
            ]
            try:
                windings = [wk.winding(c) for c in children]
            except (NearZeroOnContour, ContourError) as exc:
                last_exc = exc
                continue
            if sum(windings) != w_par:
                last_exc = ContourError(
                    f"child windings {windings} do not conserve parent {w_par}"
                )
                continue
            return list(zip(children, windings))
    if last_exc is None:
        last_exc = ContourError("split point exhausted the cell")
    raise last_exc


def _newton_refine(walker: _Walker, rect: Rectangle, cc: ContourConfig, scale: float):
    size = max(rect.width, rect.height)
    h = 1e-6 * size
    z = rect.center
    tol_resid = cc.zero_tol * min(1.0, max(scale, 1e-300))
    steps = 0
    try:
        for steps in range(1, _NEWTON_MAX_STEPS + 1):
            fz = walker(z)
            d = (walker(z + h) - walker(z - h)) / (2.0 * h)
            if d == 0:
                return None
            dz = fz / d
            if abs(dz) > 2.0 * size:        # derivative too flat; bail out
                return None
            z = z - dz
            if not rect.expand(size).contains(z):
                return None
            if abs(dz) <= 5e-16 * max(1.0, abs(z)):
                break
        resid = abs(walker(z))
    except ZetaError:
        return None
    if resid > max(tol_resid, 1e-13 * scale) or not rect.contains(z):
        return None
    return z, resid, steps


def _boundary_scale(walker: _Walker, rect: Rectangle) -> float:
    pts = walker.boundary_points(rect)
    mags = sorted(abs(walker(z)) for z in pts[:-1])
    return mags[len(mags) // 2]


def _resolve_cell(fn, rect: Rectangle, w: int, cc: ContourConfig):
    """Fully resolve one pole-free cell of known winding; sequential."""
    walker = _Walker(fn, cc)
    records: list[ZeroRecord] = []
    unresolved: list[UnresolvedCell] = []
    stack = [(rect, w)]
    while stack:
        cell, wc = stack.pop()
        if wc == 0:
            continue
        if wc < 0:
            unresolved.append(UnresolvedCell(cell, wc, "negative winding in pole-free cell"))
            continue
        size = max(cell.width, cell.height)
        if wc == 1:
            scale = _boundary_scale(walker, cell)
            hit = _newton_refine(walker, cell, cc, scale)
            if hit is not None:
                z, resid, steps = hit
                records.append(ZeroRecord(
                    location=ComplexValue.of(z, 10.0 * abs(z) * 1e-16 + resid),
                    residual=resid, winding_mult=1, rect=cell, refine_steps=steps,
                ))
                continue
        if size <= cc.min_cell:
            center = cell.center
            resid = abs(walker(center))
            records.append(ZeroRecord(
                location=ComplexValue.of(center, size),
                residual=resid, winding_mult=wc, rect=cell, refine_steps=0,
            ))
            continue
        try:
            for child, w_child in _split_cell(walker, cell, wc, cc):
                if w_child != 0:
                    stack.append((child, w_child))
        except (NearZeroOnContour, ContourError, DepthExceeded) as exc:
            unresolved.append(UnresolvedCell(cell, wc, f"{type(exc).__name__}: {exc}"))
    return records, unresolved


def _assert_pole_free(e, rect: Rectangle):
    inside = [c for c in pole_set(e) if rect.strictly_contains(c.location)]
    if inside:
        raise PoleProximity(
            "rect contains pole candidates (pre-split required): "
            + ", ".join(f"{c.location:.6g} from {c.source}" for c in inside),
            location=inside[0].location, source=inside[0].source,
        )


def localize_zeros(e, rect: Rectangle, cc: ContourConfig = DEFAULT_CONTOUR,
                   cfg: EvalConfig = DEFAULT_CONFIG, threads: int = 1) -> LocalizeResult:
    """Locate every zero of the expression inside a pole-free rectangle.

    Records are sorted by (Im, Re); unresolved cells are surfaced rather than
    silently dropped.  Results are identical for any thread count.
    """
    _assert_pole_free(e, rect)
    fn = expression_fn(e, cfg)
    walker = _Walker(fn, cc)
    w_root, root = _winding_with_expansion(fn, rect, cc)

    # Fixed fan-out plan, independent of the thread count, so that results
    # (including isolating cells and refine paths) are identical for any
    # parallelism level.
    frontier: list[tuple[Rectangle, int]] = [(root, w_root)]
    for _ in range(2):
        if len(frontier) >= _FRONTIER_TARGET:
            break
        nxt: list[tuple[Rectangle, int]] = []
        for cell, wc in frontier:
            if wc > 1 or (wc == 1 and max(cell.width, cell.height) > 1.0):
                try:
                    nxt.extend(kid for kid in _split_cell(walker, cell, wc, cc)
                               if kid[1] != 0)
                    continue
                except (NearZeroOnContour, ContourError, DepthExceeded):
                    pass
            nxt.append((cell, wc))
        if len(nxt) == len(frontier):
            frontier = nxt
            break
        frontier = nxt

    records: list[ZeroRecord] = []
    unresolved: list[UnresolvedCell] = []
    if threads > 1 and len(frontier) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outs = list(pool.map(
                lambda cw: _resolve_cell(fn, cw[0], cw[1], cc), frontier
            ))
    else:
        outs = [_resolve_cell(fn, cell, wc, cc) for cell, wc in frontier]
    for recs, unres in outs:
        records.extend(recs)
        unresolved.extend(unres)

    records.sort(key=lambda r: (r.location.im, r.location.re, r.winding_mult))
    unresolved.sort(key=lambda u: (u.rect.t_lo, u.rect.sigma_lo))
    return LocalizeResult(tuple(records), tuple(unresolved))


# ---------------------------------------------------------------------------
# Density scans and the critical-line contrast check
# ---------------------------------------------------------------------------

def _fit_slope(ts, counts) -> float:
    pairs = [(t, c) for t, c in zip(ts, counts) if t > 0]
    if len(pairs) == 1:
        t, c = pairs[0]
        return c / t
    if not pairs:
        return 0.0
    tm = sum(t for t, _ in pairs) / len(pairs)
    cm = sum(c for _, c in pairs) / len(pairs)
    den = sum((t - tm) ** 2 for t, _ in pairs)
    if den == 0:
        return 0.0
    return sum((t - tm) * (c - cm) for t, c in pairs) / den


def density_scan(e, sigma0: float, T_values, cc: ContourConfig = DEFAULT_CONTOUR,
                 cfg: EvalConfig = DEFAULT_CONFIG, sigma_cap: float = 2.0,
                 threads: int = 1, t_floor: float = 1e-3) -> DensityScan:
    """Count zeros of the expression in (sigma0, sigma_cap) x (t_floor, T] per T.

    Every implemented atom has only real pole candidates, so a positive
    t_floor keeps all scan tiles pole-free; tiles are counted by winding
    alone.  Counts are non-decreasing by construction.
    """
    if not sigma0 > 0.5:
        raise ValueError("density_scan requires sigma0 > 1/2")
    if not sigma_cap > sigma0:
        raise ValueError("sigma_cap must exceed sigma0")
    ts = [float(t) for t in T_values]
    if sorted(ts) != ts:
        raise ValueError("T_values must be increasing")
    active = [t for t in ts if t > t_floor]

    for cand in pole_set(e):
        if abs(cand.location.imag) > 1e-12:
            raise ValueError(
                f"non-real pole candidate {cand.location:.6g}; pre-split not supported"
            )

    fn = expression_fn(e, cfg)
    counts_at: dict[float, int] = {}
    complete = True
    if active:
        jit = cc.jitter
        for attempt in range(_JITTER_RETRIES + 1):
            lo = sigma0 - jit * attempt
            hi = sigma_cap + jit * attempt
            shift = jit * attempt
            cuts = [t_floor + shift]
            for t in active:
                lo_t = cuts[-1]
                span = t + shift - lo_t
                n = max(1, int(math.ceil(span / _TILE_HEIGHT)))
                cuts.extend(lo_t + span * (k + 1) / n for k in range(n))
                cuts[-1] = t + shift           # land exactly on the cut
            tiles = [Rectangle(lo, hi, cuts[i], cuts[i + 1])
                     for i in range(len(cuts) - 1)]
            try:
                if threads > 1:
                    with ThreadPoolExecutor(max_workers=threads) as pool:
                        tile_w = list(pool.map(
                            lambda r: _stable_winding(fn, r, cc), tiles
                        ))
                else:
                    tile_w = [_stable_winding(fn, r, cc) for r in tiles]
            except NearZeroOnContour:
                if attempt == _JITTER_RETRIES:
                    complete = False
                    break
                continue
            acc = 0
            k = 0
            for t in active:
                while k < len(tiles) and tiles[k].t_hi <= t + shift + 1e-15:
                    acc += tile_w[k]
                    k += 1
                counts_at[t] = acc
            break
        else:
            complete = False
    counts = tuple(counts_at.get(t, 0) for t in ts)
    if any(c < 0 for c in counts):
        raise ContourError("negative zero count: pole leaked into a scan tile")
    return DensityScan(
        sigma0=sigma0, sigma_cap=sigma_cap, t_floor=t_floor,
        T_values=tuple(ts), counts=counts,
        fit_slope=_fit_slope(ts, counts), complete=complete,
    )


def critical_line_check(e, t_max: float, tol: float,
                        cc: ContourConfig = DEFAULT_CONTOUR,
                        cfg: EvalConfig = DEFAULT_CONFIG, threads: int = 1,
                        t_floor: float = 1e-3) -> CriticalLineReport:
    """Localize zeros with 0 < Im <= t_max, 0.1 < Re < 0.9 and measure the
    largest |Re - 1/2|; PASS means every zero sits within tol of the line."""
    rect = Rectangle(0.1, 0.9, t_floor, t_max)
    result = localize_zeros(e, rect, cc, cfg, threads=threads)
    offsets = [abs(r.location.re - 0.5) for r in result.records]
    max_off = max(offsets) if offsets else 0.0
    return CriticalLineReport(
        records=result.records, unresolved=result.unresolved,
        max_offline=max_off, tol=tol,
        passed=(max_off < tol and not result.unresolved),
    )

"""Smallest parameter value at which the comparison graph loses all its
negative cycles, found in strongly polynomial time with exact arithmetic.

The engine maintains a hop matrix D: entry (u, v) is the minimum weight of
any walk from u to v using at most 2**hop_exponent edges, as a function of
the parameter.  Min-plus squaring doubles the hop bound.  After each
squaring, the breakpoints of the new entries are binary-searched against a
negative-cycle probe, narrowing a bracket that always contains the answer;
inside the narrowed bracket every entry is a single line, so the matrix is
restricted and squared again.  After ceil(log2(|V|)) squarings the entries
dominate all walks of length |V|, hence all simple cycles; the answer is
then the largest zero among the negative-sloped diagonal lines that are
still negative at the bracket's left end (or the left end itself).

Exactness and speed coexist by clearing denominators once: the metric is
scaled to integers, so every slope and intercept stays a Python int and
every breakpoint is a ratio of ints.  The parameter stays a Fraction.
The inner squaring runs on numpy matrices: values at the two bracket ends
are screened first, and only entries whose minimizing line differs between
the two ends get a full envelope build (the envelope is concave, so a line
minimal at both ends is minimal throughout).  A per-call bound on every
intermediate value picks int64 when provably safe and exact big-integer
object arrays otherwise; both paths are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .errors import DomainError, InternalInvariantError
from .lgraph import LambdaGraph, has_negative_cycle
from .linfun import (
    Interval,
    LinearFn,
    PLUS_INFINITY,
    PiecewiseLinearFn,
    Rational,
    _clip_hull,
    _hull_of_lines,
    breakpoints as fn_breakpoints,
    restrict_to_line,
)
from .metric import MetricSpace, dilation_bounds, scaled_int_rows

SearchInterval = Interval


@dataclass(frozen=True)
class HopMatrix:
    """Parametric min-plus walk-weight matrix.

    entries[u][v] is PLUS_INFINITY, a LinearFn, or a PiecewiseLinearFn on
    valid_interval: the minimum weight over walks from u to v of at most
    2**hop_exponent edges, for parameter values in valid_interval.
    """

    order: int
    entries: Tuple[Tuple[object, ...], ...]
    hop_exponent: int
    valid_interval: Interval

    def entry_value(self, u: int, v: int, x: Rational):
        e = self.entries[u][v]
        if e is PLUS_INFINITY:
            return PLUS_INFINITY
        if isinstance(e, PiecewiseLinearFn):
            from .linfun import evaluate

            return evaluate(e, x)
        return Fraction(e(x))


def initial_interval(g: LambdaGraph, m: MetricSpace) -> Interval:
    """Bracket [1, 2*max_d/min_d] guaranteed to contain the answer."""
    lo, hi = dilation_bounds(m)
    return Interval(lo, hi)


def initialize_d0(g: LambdaGraph, r: Interval) -> HopMatrix:
    """Hop matrix for walks of at most one edge: zero diagonal, edge
    weight functions where edges exist, PLUS_INFINITY elsewhere."""
    nv = 2 * g.site_count
    rows: List[List[object]] = [[PLUS_INFINITY] * nv for _ in range(nv)]
    for v in range(nv):
        rows[v][v] = LinearFn(0, 0)
    for u, v, w in g.edges:
        rows[u][v] = w
    return HopMatrix(nv, tuple(map(tuple, rows)), 0, r)


_INT64_VALUE_LIMIT = 1 << 58


def _plan_dtype(value_bound: int):
    """Pick (dtype, sentinel, threshold) so that sums of two values plus a
    sentinel can never collide or overflow."""
    if value_bound < _INT64_VALUE_LIMIT:
        return np.int64, 1 << 61, 1 << 60
    sent = 1 << max(64, value_bound.bit_length() + 3)
    return object, sent, sent >> 1


def _square_int(
    mrows: List[List[int]],
    brows: List[List[int]],
    fin: np.ndarray,
    interval: Interval,
):
    """One exact min-plus squaring of integer-coefficient line entries.

    Entry (u, v) minimizes slope*lam + intercept over all two-entry
    chains u -> w -> v.  An entry whose minimizing chain is the same at
    both interval endpoints is emitted as that single line (the envelope
    is concave, so a line minimal at both ends is minimal throughout).
    Every other finite entry gets its exact lower envelope.

    Returns (mrows2, brows2, fin2, env, max_breaks) where env maps
    (u, v) -> (pieces, cuts): pieces are (slope, intercept) int pairs in
    force left to right across the interval, cuts the breakpoints
    strictly inside it (len(cuts) == len(pieces) - 1 >= 1).  mrows2 and
    brows2 hold garbage at env and infinite positions; callers resolve
    env entries after narrowing the interval.
    """
    order = len(mrows)
    p1, q1 = interval.lo.numerator, interval.lo.denominator
    p2, q2 = interval.hi.numerator, interval.hi.denominator
    max_m = max((abs(v) for row in mrows for v in row), default=0)
    max_b = max((abs(v) for row in brows for v in row), default=0)
    max_p = max(abs(p1), abs(p2))
    max_q = max(q1, q2)
    # the trailing max_p + max_q keeps the endpoint numerators themselves
    # inside the certified range even when a coefficient side is all zero
    bound = 2 * (max_m * max_p + max_b * max_q) + max_p + max_q + 1
    dtype, sent, thresh = _plan_dtype(bound)
    mat_m = np.array(mrows, dtype=dtype)
    mat_b = np.array(brows, dtype=dtype)
    v1 = mat_m * p1 + mat_b * q1
    v2 = mat_m * p2 + mat_b * q2
    v1[~fin] = sent
    v2[~fin] = sent
    cols = np.arange(order)
    point = interval.is_point
    out_m: List[List[int]] = []
    out_b: List[List[int]] = []
    out_fin = np.zeros((order, order), dtype=bool)
    env: Dict[Tuple[int, int], Tuple[List[Tuple[int, int]], List[Fraction]]] = {}
    max_breaks = 0
    for u in range(order):
        s1 = v1[u][:, None] + v1
        w1 = s1.min(axis=0)
        fin_v = w1 < thresh
        if point:
            wsel = s1.argmin(axis=0)
            covered = fin_v
        else:
            s2 = v2[u][:, None] + v2
            w2 = s2.min(axis=0)
            both = (s1 == w1[None, :]) & (s2 == w2[None, :])
            covered = both.any(axis=0) & fin_v
            wsel = both.argmax(axis=0)
        mm = np.where(fin_v, mat_m[u, wsel] + mat_m[wsel, cols], 0)
        bb = np.where(fin_v, mat_b[u, wsel] + mat_b[wsel, cols], 0)
        out_m.append([int(x) for x in mm])
        out_b.append([int(x) for x in bb])
        out_fin[u] = fin_v
        for v in np.nonzero(fin_v & ~covered)[0]:
            v = int(v)
            mask = fin[u, :] & fin[:, v]
            cand_m = (mat_m[u, :] + mat_m[:, v])[mask]
            cand_b = (mat_b[u, :] + mat_b[:, v])[mask]
            lines = list(zip([int(x) for x in cand_m], [int(x) for x in cand_b]))
            hull, cuts = _hull_of_lines(lines)
            if len(hull) > order:
                raise InternalInvariantError("envelope has more pieces than lines")
            pieces, inner = _clip_hull(hull, cuts, interval.lo, interval.hi)
            if len(inner) < 1:
                raise InternalInvariantError(
                    "uncovered entry clipped to a single line"
                )
            max_breaks = max(max_breaks, len(inner))
            env[(u, v)] = (pieces, inner)
    return out_m, out_b, out_fin, env, max_breaks


def _pack_fraction_matrix(d: HopMatrix):
    """Clear denominators across all line coefficients: (mrows, brows,
    fin, scale) with slope = m/scale, intercept = b/scale."""
    order = d.order
    scale = 1
    for row in d.entries:
        for e in row:
            if e is PLUS_INFINITY:
                continue
            if isinstance(e, PiecewiseLinearFn):
                raise DomainError(
                    "entries must be single lines; restrict the matrix first"
                )
            scale = math.lcm(
                scale, Fraction(e.slope).denominator, Fraction(e.intercept).denominator
            )
    mrows = [[0] * order for _ in range(order)]
    brows = [[0] * order for _ in range(order)]
    fin = np.zeros((order, order), dtype=bool)
    for u in range(order):
        for v in range(order):
            e = d.entries[u][v]
            if e is PLUS_INFINITY:
                continue
            fin[u, v] = True
            mrows[u][v] = int(Fraction(e.slope) * scale)
            brows[u][v] = int(Fraction(e.intercept) * scale)
    return mrows, brows, fin, scale


def _coeff(x: int, scale: int) -> Rational:
    return x if scale == 1 else Fraction(x, scale)


def square(d: HopMatrix) -> HopMatrix:
    """Min-plus square: entry (u, v) becomes the lower envelope over w of
    entries (u, w) + (w, v), doubling the hop exponent.

    Requires every entry to be a single LinearFn or PLUS_INFINITY (true
    for the initial matrix and after restriction).
    """
    mrows, brows, fin, scale = _pack_fraction_matrix(d)
    out_m, out_b, out_fin, env, _ = _square_int(mrows, brows, fin, d.valid_interval)
    r = d.valid_interval
    rows: List[List[object]] = []
    for u in range(d.order):
        row: List[object] = []
        for v in range(d.order):
            if not out_fin[u][v]:
                row.append(PLUS_INFINITY)
            elif (u, v) in env:
                pieces, inner = env[(u, v)]
                parts = [
                    (LinearFn(_coeff(m, scale), _coeff(b, scale)), Fraction(x))
                    for (m, b), x in zip(pieces, inner)
                ]
                last_m, last_b = pieces[-1]
                parts.append((LinearFn(_coeff(last_m, scale), _coeff(last_b, scale)), r.hi))
                row.append(PiecewiseLinearFn(r, tuple(parts)))
            else:
                row.append(LinearFn(_coeff(out_m[u][v], scale), _coeff(out_b[u][v], scale)))
        rows.append(row)
    return HopMatrix(d.order, tuple(map(tuple, rows)), d.hop_exponent + 1, r)


def _binary_search_interval(
    bps: List[Fraction], interval: Interval, probe: Callable[[Fraction], bool]
) -> Interval:
    """Narrow interval to consecutive members of bps (or its own ends).

    probe(t) must mean "the answer is strictly above t".  The result
    keeps the answer inside and strictly excludes every bps member from
    its interior.
    """
    lo, hi = interval.lo, interval.hi
    lo_i, hi_i = 0, len(bps) - 1
    while lo_i <= hi_i:
        mid = (lo_i + hi_i) // 2
        t = bps[mid]
        if probe(t):
            lo, lo_i = t, mid + 1
        else:
            hi, hi_i = t, mid - 1
    return Interval(lo, hi)


def narrow_interval(
    g: LambdaGraph,
    d: HopMatrix,
    probe: Optional[Callable[[Fraction], bool]] = None,
) -> Interval:
    """Shrink d's interval so no entry has a breakpoint strictly inside.

    Collects every interior breakpoint of d's piecewise entries and
    binary-searches them with a negative-cycle probe (negative cycle at
    t means the answer exceeds t).  The answer never leaves the bracket.
    """
    if probe is None:
        probe = lambda t: has_negative_cycle(g, t) is not None
    bps_set = set()
    for row in d.entries:
        for e in row:
            if isinstance(e, PiecewiseLinearFn):
                bps_set.update(fn_breakpoints(e))
    if not bps_set:
        return d.valid_interval
    return _binary_search_interval(sorted(bps_set), d.valid_interval, probe)


def restrict_hop(d: HopMatrix, r: Interval) -> HopMatrix:
    """Replace each piecewise entry by its single line on r; the hop
    exponent is unchanged and the valid interval becomes r."""
    rows: List[List[object]] = []
    for row in d.entries:
        out: List[object] = []
        for e in row:
            if isinstance(e, PiecewiseLinearFn):
                out.append(restrict_to_line(e, r))
            else:
                out.append(e)
        rows.append(out)
    return HopMatrix(d.order, tuple(map(tuple, rows)), d.hop_exponent, r)


def _probe_negative_cycle(rows: List[List[int]], t: Fraction) -> bool:
    """Exact negative-cycle test on the comparison graph of an integer
    distance matrix at parameter t, vectorized over numpy rows.

    Relaxes over/under distance vectors simultaneously from an all-zero
    start (a free super-source).  No change in a sweep means clean; a
    change in every one of the |V| sweeps means a negative cycle.
    """
    n = len(rows)
    p, q = t.numerator, t.denominator
    maxd = max(max(row) for row in rows)
    bound = (2 * n + 2) * maxd * max(abs(p), q) + 1
    dtype, sent, _ = _plan_dtype(bound)
    mat = np.array(rows, dtype=dtype)
    w_uo = -(mat * q)
    w_ou = mat * p
    np.fill_diagonal(w_ou, sent)
    d_over = np.zeros(n, dtype=dtype) if dtype is not object else np.full(n, 0, dtype=object)
    d_under = d_over.copy()
    for _ in range(2 * n):
        n_over = np.minimum(d_over, (d_under[:, None] + w_uo).min(axis=0))
        n_under = np.minimum(d_under, (d_over[:, None] + w_ou).min(axis=0))
        if np.array_equal(n_over, d_over) and np.array_equal(n_under, d_under):
            return False
        d_over, d_under = n_over, n_under
    return True


def _d0_int(rows: List[List[int]]):
    """Packed integer hop matrix for at-most-one-edge walks."""
    n = len(rows)
    nv = 2 * n
    mrows = [[0] * nv for _ in range(nv)]
    brows = [[0] * nv for _ in range(nv)]
    fin = np.zeros((nv, nv), dtype=bool)
    for v in range(nv):
        fin[v, v] = True
    for s in range(n):
        for t in range(n):
            fin[n + s, t] = True
            brows[n + s][t] = -rows[s][t]
            if s != t:
                fin[s, n + t] = True
                mrows[s][n + t] = rows[s][t]
    return mrows, brows, fin


@dataclass(frozen=True)
class RunStats:
    """Instrumentation from one optimal-dilation computation."""

    iterations: int
    max_breakpoints: int
    probe_count: int
    final_interval: Interval


def lambda_star_detailed(g: LambdaGraph, m: MetricSpace) -> Tuple[Fraction, RunStats]:
    """Exact optimal dilation plus run statistics.

    Runs exactly ceil(log2(2n)) squarings.  Internally the metric is
    scaled to integers once; the answer is a ratio of hop-matrix
    coefficients, which scaling leaves unchanged, so the returned value
    is in the original units.
    """
    n = g.site_count
    nv = 2 * n
    interval = initial_interval(g, m)
    rows, _ = scaled_int_rows(m.dist)
    mrows, brows, fin = _d0_int(rows)
    iterations = (nv - 1).bit_length()
    probes = 0
    max_breaks = 0

    def probe(t: Fraction) -> bool:
        nonlocal probes
        probes += 1
        return _probe_negative_cycle(rows, t)

    for _ in range(iterations):
        mrows, brows, fin, env, mb = _square_int(mrows, brows, fin, interval)
        max_breaks = max(max_breaks, mb)
        if mb > nv - 1:
            raise InternalInvariantError("entry envelope exceeded |V| - 1 breakpoints")
        all_cuts = sorted({c for _, cuts in env.values() for c in cuts})
        if all_cuts:
            interval = _binary_search_interval(all_cuts, interval, probe)
        for (u, v), (pieces, cuts) in env.items():
            k = 0
            while k < len(cuts) and cuts[k] <= interval.lo:
                k += 1
            if k < len(cuts) and cuts[k] < interval.hi:
                raise InternalInvariantError("breakpoint survived narrowing")
            mrows[u][v], brows[u][v] = pieces[k]
    lam = interval.lo
    p1, q1 = interval.lo.numerator, interval.lo.denominator
    for v in range(nv):
        if not fin[v][v]:
            raise InternalInvariantError("diagonal entry still infinite at the end")
        mv, bv = mrows[v][v], brows[v][v]
        if mv * p1 + bv * q1 < 0:
            if mv == 0:
                raise InternalInvariantError("flat diagonal entry is negative")
            root = Fraction(-bv, mv)
            if root > lam:
                lam = root
    if lam > interval.hi:
        raise InternalInvariantError("diagonal root escaped the bracket")
    if _probe_negative_cycle(rows, lam):
        raise InternalInvariantError("negative cycle remains at the computed answer")
    return lam, RunStats(iterations, max_breaks, probes, interval)


def lambda_star(g: LambdaGraph, m: MetricSpace) -> Fraction:
    """Exact optimal star dilation of the metric space."""
    return lambda_star_detailed(g, m)[0]

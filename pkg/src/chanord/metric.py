"""Lower-bound estimation of the game-payoff metric between channels.

The metric between two channels is the supremum, over all finite game
shapes and all normalized positive payoff matrices l, of the absolute
difference of the two optimal average payoffs. The supremum itself is not
computed (no finite algorithm is available); this module reports a
certified lower bound: the best exactly-evaluated difference found by a
seeded search, together with the payoff matrix witnessing it. Since the
supremum dominates every candidate, the bound is sound by construction.

The search samples normalized payoffs and refines each by
difference-of-convex ascent. Both optimal payoffs are pointwise maxima of
linear functions of l, so fixing the active deterministic pair of the
first channel and keeping the second channel's full piecewise description
gives a concave subproblem over the payoff simplex; its exact optimum is
read off the dual prices of a small rational program, and each accepted
step strictly increases the true difference.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .brm import BrmGame, optimal_average_payoff
from .channel_core import Channel, tv_distance
from .errors import DimensionMismatchError, InternalCheckError
from .lp_solver import DEFAULT_MAX_PIVOTS, StandardLp, maximize
from .prng import counter_int
from .rational import ONE, ZERO, Rat, rat_str

DEFAULT_DIM_CAP = 3
DEFAULT_BUDGET = 24
_MAX_REFINE_STEPS = 8
_SAMPLE_BOUND = 15


@dataclass(frozen=True)
class MetricEstimate:
    """A certified lower bound together with the payoff achieving it."""

    lower_bound: object
    witness_payoff: tuple
    game_dims: tuple
    search_budget: int
    seed: int


def metric_estimate_to_json(est: MetricEstimate) -> dict:
    return {
        "lower_bound": rat_str(est.lower_bound),
        "witness_payoff": [[rat_str(v) for v in row] for row in est.witness_payoff],
        "game_dims": list(est.game_dims),
        "search_budget": est.search_budget,
        "seed": est.seed,
    }


def _game(w: Channel, n: int, m: int, payoff) -> BrmGame:
    return BrmGame(n, w.input_size, w.output_size, m, payoff, w)


def _opt(w: Channel, n: int, m: int, payoff, max_encoders):
    value, pair = optimal_average_payoff(_game(w, n, m, payoff), max_encoders)
    return value, pair


def _pair_coefficients(w: Channel, n: int, m: int, f_img, g_img) -> tuple:
    """Coefficient matrix of one deterministic pair: the pair's average
    payoff is the entrywise product of this matrix with the payoff l."""
    inv_n = Rat(1, n)
    rows = []
    for u in range(n):
        row = [ZERO] * m
        wrow = w.rows[f_img[u] - 1]
        for y, p in enumerate(wrow):
            if p != 0:
                row[g_img[y] - 1] += p
        rows.append(tuple(inv_n * v for v in row))
    return tuple(rows)


def _piece_matrices(w: Channel, n: int, m: int):
    """Distinct coefficient matrices over all deterministic pairs.

    Encoders only act through the rows they select and decoders only
    through outputs carrying mass, which keeps the list small.
    """
    row_choices = {}
    for f_img in product(range(1, w.input_size + 1), repeat=n):
        key = tuple(w.rows[i - 1] for i in f_img)
        if key not in row_choices:
            row_choices[key] = f_img
    live = [any(row[y] != 0 for row in w.rows) for y in range(w.output_size)]
    merge_choices = {}
    for g_img in product(range(1, m + 1), repeat=w.output_size):
        key = tuple(v for v, lv in zip(g_img, live) if lv)
        if key not in merge_choices:
            merge_choices[key] = g_img
    pieces = {}
    for f_img in row_choices.values():
        for g_img in merge_choices.values():
            piece = _pair_coefficients(w, n, m, f_img, g_img)
            if piece not in pieces:
                pieces[piece] = True
    return list(pieces)


def _ascent_step(active, pieces, n, m, max_pivots):
    """Exact maximizer of ⟨active, l⟩ − max_j ⟨piece_j, l⟩ over the simplex.

    Solved in the orientation whose row count is the payoff dimension; the
    optimal payoff is the vector of dual prices on those rows.
    """
    dim = n * m
    flat_active = [v for row in active for v in row]
    flat_pieces = [[v for row in piece for v in row] for piece in pieces]
    k = len(flat_pieces)
    ncols = k + dim + 2  # piece mixture, slacks, z+ and z-
    rows = []
    rhs = []
    for coord in range(dim):
        row = [ZERO] * ncols
        for j in range(k):
            row[j] = flat_active[coord] - flat_pieces[j][coord]
        row[k + coord] = ONE
        row[k + dim] = -ONE
        row[k + dim + 1] = ONE
        rows.append(tuple(row))
        rhs.append(ZERO)
    convexity = [ZERO] * ncols
    for j in range(k):
        convexity[j] = ONE
    rows.append(tuple(convexity))
    rhs.append(ONE)
    objective = [ZERO] * ncols
    objective[k + dim] = -ONE
    objective[k + dim + 1] = ONE
    lp = StandardLp(tuple(rows), tuple(rhs), tuple(objective))
    outcome = maximize(lp, max_pivots=max_pivots)
    duals = outcome.dual_certificate
    candidate = duals[:dim]
    total = sum(candidate, start=ZERO)
    if any(v < 0 for v in candidate) or total != ONE:
        raise InternalCheckError("ascent subproblem produced an invalid payoff")
    return tuple(tuple(candidate[u * m + v] for v in range(m)) for u in range(n))


def _sample_payoff(seed: int, trial: int, n: int, m: int) -> tuple:
    draws = [
        [
            counter_int(seed, trial, u, v, bound=_SAMPLE_BOUND) + 1
            for v in range(m)
        ]
        for u in range(n)
    ]
    total = sum(sum(row) for row in draws)
    return tuple(tuple(Rat(k, total) for k in row) for row in draws)


def brm_distance_lower_bound(
    w1: Channel,
    w2: Channel,
    n_max: int = DEFAULT_DIM_CAP,
    m_max: int = DEFAULT_DIM_CAP,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    max_encoders: int = 1 << 20,
    max_pivots: int = DEFAULT_MAX_PIVOTS,
) -> MetricEstimate:
    """Seeded search for a payoff separating the two channels.

    Deterministic in the seed; the reported bound is the running maximum of
    exactly evaluated differences, so a larger budget never lowers it, and
    swapping the channels leaves it unchanged.
    """
    if n_max < 1 or m_max < 1 or budget < 1:
        raise ValueError("n_max, m_max, and budget must be >= 1")
    dims = sorted(
        ((n, m) for n in range(1, n_max + 1) for m in range(1, m_max + 1)),
        key=lambda nm: (nm[0] * nm[1], nm),
    )
    pieces_cache = {}

    def pieces_for(which: int, w: Channel, n: int, m: int):
        key = (which, n, m)
        if key not in pieces_cache:
            pieces_cache[key] = _piece_matrices(w, n, m)
        return pieces_cache[key]

    def diff(n, m, payoff):
        v1, pair1 = _opt(w1, n, m, payoff, max_encoders)
        v2, pair2 = _opt(w2, n, m, payoff, max_encoders)
        return v1 - v2, pair1, pair2

    best = None  # (abs difference, payoff, dims)
    for trial in range(budget):
        n, m = dims[trial % len(dims)]
        payoff = _sample_payoff(seed, trial, n, m)
        signed, pair1, pair2 = diff(n, m, payoff)
        score = abs(signed)
        for _step in range(_MAX_REFINE_STEPS):
            candidates = []
            for first, pair in ((1, pair1), (2, pair2)):
                own = w1 if first == 1 else w2
                other = w2 if first == 1 else w1
                active = _pair_coefficients(
                    own, n, m, pair[0].image, pair[1].image
                )
                other_pieces = pieces_for(2 if first == 1 else 1, other, n, m)
                try:
                    candidate = _ascent_step(
                        active, other_pieces, n, m, max_pivots
                    )
                except InternalCheckError:
                    continue
                cand_signed, cand_pair1, cand_pair2 = diff(n, m, candidate)
                candidates.append(
                    (abs(cand_signed), candidate, cand_pair1, cand_pair2)
                )
            candidates.sort(key=lambda c: (-c[0], c[1]))
            if not candidates or candidates[0][0] <= score:
                break
            score, payoff, pair1, pair2 = candidates[0]
        if best is None or score > best[0]:
            best = (score, payoff, (n, m))
    lower, witness, game_dims = best
    check, _p1 = _opt(w1, game_dims[0], game_dims[1], witness, max_encoders)
    check2, _p2 = _opt(w2, game_dims[0], game_dims[1], witness, max_encoders)
    if abs(check - check2) != lower:
        raise InternalCheckError("metric witness failed exact recomputation")
    return MetricEstimate(
        lower_bound=lower,
        witness_payoff=witness,
        game_dims=game_dims,
        search_budget=budget,
        seed=seed,
    )


def brm_vs_tv(
    w1: Channel,
    w2: Channel,
    n_max: int = DEFAULT_DIM_CAP,
    m_max: int = DEFAULT_DIM_CAP,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    max_encoders: int = 1 << 20,
    max_pivots: int = DEFAULT_MAX_PIVOTS,
):
    """(estimated lower bound, exact channel distance) for same-shape channels.

    The channel distance dominates the game-payoff metric, so the returned
    pair must satisfy lower <= upper; a violation would contradict that
    bound and raises an internal error.
    """
    if (w1.input_size, w1.output_size) != (w2.input_size, w2.output_size):
        raise DimensionMismatchError("brm_vs_tv requires same-shape channels")
    estimate = brm_distance_lower_bound(
        w1,
        w2,
        n_max=n_max,
        m_max=m_max,
        budget=budget,
        seed=seed,
        max_encoders=max_encoders,
        max_pivots=max_pivots,
    )
    upper = tv_distance(w1, w2)
    if estimate.lower_bound > upper:
        raise InternalCheckError(
            "estimated lower bound exceeded the channel distance"
        )
    return estimate.lower_bound, upper

"""Blind-randomized-in-the-middle games: payoffs, regions, inclusion.

A game fixes four alphabets (U, X, Y, V), a payoff matrix l over U×V, and
a randomizer channel W: X -> Y. One player commits to a randomized choice
of encoder/decoder pairs (f: U -> X, g: Y -> V) around the fixed W; the
payoff for a secret u is the expectation of l(u, g(y)). Everything here
is exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .channel_core import (
    Channel,
    DeterministicMap,
    channel_from_json,
    channel_to_json,
    deterministic,
)
from .cpc import DEFAULT_MAX_PAIRS, CpcChannel, CpcTerm, enumerate_det_pairs
from .errors import DimensionMismatchError, ResourceLimitError
from .lp_solver import DEFAULT_MAX_PIVOTS, FEASIBLE, StandardLp, solve_feasibility
from .rational import ONE, ZERO, Rat, parse_rat, rat_str


@dataclass(frozen=True)
class BrmGame:
    u_size: int
    x_size: int
    y_size: int
    v_size: int
    payoff_matrix: tuple  # u_size × v_size, exact rationals (any sign)
    randomizer: Channel

    def __post_init__(self):
        if min(self.u_size, self.x_size, self.y_size, self.v_size) < 1:
            raise ValueError("game alphabet sizes must be >= 1")
        if (self.randomizer.input_size, self.randomizer.output_size) != (
            self.x_size,
            self.y_size,
        ):
            raise DimensionMismatchError("randomizer shape does not match game")
        if len(self.payoff_matrix) != self.u_size or any(
            len(row) != self.v_size for row in self.payoff_matrix
        ):
            raise DimensionMismatchError("payoff matrix shape does not match game")

    def is_normalized(self) -> bool:
        """True when the payoff is nonnegative and sums to exactly 1."""
        total = ZERO
        for row in self.payoff_matrix:
            for v in row:
                if v < 0:
                    return False
                total += v
        return total == ONE


@dataclass(frozen=True)
class Strategy:
    """A finite mixture of deterministic encoder/decoder pairs."""

    weights: tuple
    encoders: tuple  # DeterministicMap U -> X, one per weight
    decoders: tuple  # DeterministicMap Y -> V, one per weight

    def __post_init__(self):
        if not (len(self.weights) == len(self.encoders) == len(self.decoders)):
            raise ValueError("strategy component lengths differ")
        total = ZERO
        for wgt in self.weights:
            if wgt < 0:
                raise ValueError("negative strategy weight")
            total += wgt
        if total != ONE:
            raise ValueError("strategy weights must sum to exactly 1")


@dataclass(frozen=True)
class PayoffRegionGenerators:
    """One payoff vector per deterministic pair; the region is their hull."""

    u_size: int
    points: tuple


@dataclass(frozen=True)
class RegionInclusion:
    inside_all: bool
    violator: tuple | None = None


def _check_strategy_shapes(s: Strategy, g: BrmGame):
    for f in s.encoders:
        if (f.domain_size, f.codomain_size) != (g.u_size, g.x_size):
            raise DimensionMismatchError("encoder shape does not match game")
    for dec in s.decoders:
        if (dec.domain_size, dec.codomain_size) != (g.y_size, g.v_size):
            raise DimensionMismatchError("decoder shape does not match game")


def _pair_payoff(f_img, g_img, u: int, g: BrmGame):
    """Payoff of a single deterministic pair for the secret symbol u."""
    row = g.randomizer.rows[f_img[u - 1] - 1]
    acc = ZERO
    for y in range(g.y_size):
        p = row[y]
        if p != 0:
            acc += p * g.payoff_matrix[u - 1][g_img[y] - 1]
    return acc


def payoff(u: int, s: Strategy, g: BrmGame):
    """Expected payment for the secret u under the mixed strategy s."""
    if not 1 <= u <= g.u_size:
        raise IndexError(f"secret symbol {u} outside 1..{g.u_size}")
    _check_strategy_shapes(s, g)
    acc = ZERO
    for wgt, f, dec in zip(s.weights, s.encoders, s.decoders):
        if wgt != 0:
            acc += wgt * _pair_payoff(f.image, dec.image, u, g)
    return acc


def payoff_vector(s: Strategy, g: BrmGame) -> tuple:
    _check_strategy_shapes(s, g)
    return tuple(payoff(u, s, g) for u in range(1, g.u_size + 1))


def average_payoff(s: Strategy, g: BrmGame):
    vec = payoff_vector(s, g)
    return sum(vec, start=ZERO) / g.u_size


def optimal_average_payoff(
    g: BrmGame, max_encoders: int = DEFAULT_MAX_PAIRS
):
    """Exact supremum of the average payoff, attained at a deterministic pair.

    The average payoff is linear in the strategy mixture, so the optimum is
    at a deterministic pair; for a fixed encoder the best decoder factors
    per output symbol. Returns (value, (encoder, decoder)); the reported
    argmax is the lexicographically first optimum (decoder ties break to
    the smallest index).
    """
    count = g.x_size**g.u_size
    if count > max_encoders:
        raise ResourceLimitError(
            f"encoder enumeration has {count} elements (cap {max_encoders})"
        )
    best = None
    for f_img in product(range(1, g.x_size + 1), repeat=g.u_size):
        total = ZERO
        g_img = []
        for y in range(g.y_size):
            best_v = 1
            best_score = None
            for v in range(1, g.v_size + 1):
                score = ZERO
                for u in range(1, g.u_size + 1):
                    p = g.randomizer.rows[f_img[u - 1] - 1][y]
                    if p != 0:
                        score += p * g.payoff_matrix[u - 1][v - 1]
                if best_score is None or score > best_score:
                    best_score = score
                    best_v = v
            total += best_score
            g_img.append(best_v)
        value = total / g.u_size
        if best is None or value > best[0]:
            best = (value, f_img, tuple(g_img))
    value, f_img, g_img = best
    return value, (
        DeterministicMap(g.u_size, g.x_size, f_img),
        DeterministicMap(g.y_size, g.v_size, g_img),
    )


def strategy_to_cpc(s: Strategy) -> CpcChannel:
    """The convex-product channel carrying the strategy's mixture."""
    f0, g0 = s.encoders[0], s.decoders[0]
    terms = tuple(
        CpcTerm(Rat(wgt), deterministic(f), deterministic(dec))
        for wgt, f, dec in zip(s.weights, s.encoders, s.decoders)
    )
    return CpcChannel(
        f0.domain_size, f0.codomain_size, g0.domain_size, g0.codomain_size, terms
    )


def region_generators(
    g: BrmGame, max_pairs: int = DEFAULT_MAX_PAIRS
) -> PayoffRegionGenerators:
    """Payoff vectors of all deterministic pairs, in basis order."""
    basis = enumerate_det_pairs(
        g.u_size, g.x_size, g.y_size, g.v_size, max_pairs=max_pairs
    )
    points = tuple(
        tuple(
            _pair_payoff(f.image, dec.image, u, g) for u in range(1, g.u_size + 1)
        )
        for f, dec in basis.pairs
    )
    return PayoffRegionGenerators(g.u_size, points)


def region_subset(
    a: PayoffRegionGenerators,
    b: PayoffRegionGenerators,
    max_pivots: int = DEFAULT_MAX_PIVOTS,
) -> RegionInclusion:
    """Exact test that conv(a) ⊆ conv(b).

    Convexity makes checking a's generators sufficient; each check is a
    rational feasibility program over b's (deduplicated) generators. The
    first generator found outside is returned as the violator.
    """
    if a.u_size != b.u_size:
        raise DimensionMismatchError("regions live in different payoff spaces")
    b_unique = []
    b_seen = set()
    for point in b.points:
        if point not in b_seen:
            b_seen.add(point)
            b_unique.append(point)
    matrix = [
        tuple(point[coord] for point in b_unique) for coord in range(a.u_size)
    ]
    matrix.append((ONE,) * len(b_unique))
    verdicts = {}
    for point in a.points:
        if point in verdicts:
            continue
        if point in b_seen:
            verdicts[point] = True
            continue
        lp = StandardLp(
            tuple(matrix), tuple(point) + (ONE,), (ZERO,) * len(b_unique)
        )
        inside = solve_feasibility(lp, max_pivots=max_pivots).tag == FEASIBLE
        verdicts[point] = inside
        if not inside:
            return RegionInclusion(inside_all=False, violator=point)
    return RegionInclusion(inside_all=True)


def game_to_json(g: BrmGame) -> dict:
    return {
        "u": g.u_size,
        "x": g.x_size,
        "y": g.y_size,
        "v": g.v_size,
        "l": [[rat_str(v) for v in row] for row in g.payoff_matrix],
        "w": channel_to_json(g.randomizer),
    }


def game_from_json(obj) -> BrmGame:
    if not isinstance(obj, dict):
        raise ValueError("game JSON must be an object")
    try:
        u, x, y, v = (int(obj[k]) for k in ("u", "x", "y", "v"))
        payoff_matrix = tuple(
            tuple(parse_rat(entry) for entry in row) for row in obj["l"]
        )
        w = channel_from_json(obj["w"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed game JSON: {exc}") from exc
    return BrmGame(u, x, y, v, payoff_matrix, w)

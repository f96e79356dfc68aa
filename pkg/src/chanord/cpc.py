"""Convex-product channels and skew-composition.

A convex-product channel V on (X×Y') -> (X'×Y) is a convex combination of
products R_i ⊗ T_i, where each R_i randomizes inputs (X -> X') and each
T_i randomizes outputs back (Y' -> Y). These are exactly the objects that
witness channel containment: wiring a channel W': X' -> Y' through V gives
the simulated channel Σ_i α_i · T_i ∘ W' ∘ R_i.

Skew-composition is only exposed on CpcChannel values: applied to a
non-convex-product joint channel the same contraction formula need not
produce a channel at all, so the type is the guard.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .channel_core import (
    Channel,
    DeterministicMap,
    channel_from_json,
    channel_to_json,
    compose,
    deterministic,
)
from .errors import DimensionMismatchError, ResourceLimitError
from .rational import ONE, ZERO, Rat, parse_rat, rat_str

# Sized for alphabets up to four letters: 4^4 * 4^4 deterministic pairs.
DEFAULT_MAX_PAIRS = 65536


@dataclass(frozen=True)
class CpcTerm:
    weight: object
    r: Channel  # input randomizer  X  -> X'
    t: Channel  # output randomizer Y' -> Y


@dataclass(frozen=True)
class CpcChannel:
    """Weighted list of (input randomizer, output randomizer) pairs."""

    x_size: int
    xp_size: int
    yp_size: int
    y_size: int
    terms: tuple

    def __post_init__(self):
        total = ZERO
        for term in self.terms:
            if term.weight < 0:
                raise ValueError("negative convex weight")
            total += term.weight
            if (term.r.input_size, term.r.output_size) != (self.x_size, self.xp_size):
                raise DimensionMismatchError("input randomizer shape mismatch")
            if (term.t.input_size, term.t.output_size) != (self.yp_size, self.y_size):
                raise DimensionMismatchError("output randomizer shape mismatch")
        if total != ONE:
            raise ValueError("convex weights must sum to exactly 1")


@dataclass(frozen=True)
class DetPairBasis:
    """Exhaustive lexicographic enumeration of deterministic pairs.

    Pair k is (f: [x_size] -> [xp_size], g: [yp_size] -> [y_size]); f-images
    vary slowest, g-images fastest. Length is xp_size^x_size · y_size^yp_size.
    """

    x_size: int
    xp_size: int
    yp_size: int
    y_size: int
    pairs: tuple


def cpc_from_pairs(weighted_pairs, x_size, xp_size, yp_size, y_size) -> CpcChannel:
    """CpcChannel whose terms are deterministic pairs (f, g) with weights."""
    terms = tuple(
        CpcTerm(Rat(w), deterministic(f), deterministic(g))
        for (f, g), w in weighted_pairs
    )
    return CpcChannel(x_size, xp_size, yp_size, y_size, terms)


def as_channel(v: CpcChannel) -> Channel:
    """Flatten to the joint channel V(x',y|x,y') = Σ_i α_i R_i(x'|x) T_i(y|y').

    Row index (x, y') and column index (x', y) are flattened row-major with
    the second coordinate fastest, matching channel_product.
    """
    n = v.x_size * v.yp_size
    m = v.xp_size * v.y_size
    rows = [[ZERO] * m for _ in range(n)]
    for term in v.terms:
        if term.weight == 0:
            continue
        for x in range(v.x_size):
            rrow = term.r.rows[x]
            for yp in range(v.yp_size):
                trow = term.t.rows[yp]
                out = rows[x * v.yp_size + yp]
                for xp in range(v.xp_size):
                    rv = rrow[xp]
                    if rv == 0:
                        continue
                    w_rv = term.weight * rv
                    base = xp * v.y_size
                    for y in range(v.y_size):
                        tv = trow[y]
                        if tv != 0:
                            out[base + y] += w_rv * tv
    return Channel(n, m, tuple(tuple(row) for row in rows))


def skew_compose_cpc(v: CpcChannel, vp: CpcChannel) -> CpcChannel:
    """Skew-composition of two convex-product channels, still convex-product.

    v wires X -> X' and Y' -> Y; vp wires X' -> X'' and Y'' -> Y'. The result
    wires X -> X'' and Y'' -> Y with one term per term pair:
    (α_i·α'_j, R'_j ∘ R_i, T_i ∘ T'_j).
    """
    if v.xp_size != vp.x_size or v.yp_size != vp.y_size:
        raise DimensionMismatchError("skew_compose_cpc: middle alphabets differ")
    terms = tuple(
        CpcTerm(a.weight * b.weight, compose(b.r, a.r), compose(a.t, b.t))
        for a in v.terms
        for b in vp.terms
    )
    return CpcChannel(v.x_size, vp.xp_size, vp.yp_size, v.y_size, terms)


def skew_compose_channel(v: CpcChannel, wp: Channel) -> Channel:
    """Wire the channel wp: X' -> Y' through v, giving Σ_i α_i T_i ∘ wp ∘ R_i."""
    if v.xp_size != wp.input_size or v.yp_size != wp.output_size:
        raise DimensionMismatchError("skew_compose_channel: middle alphabets differ")
    rows = [[ZERO] * v.y_size for _ in range(v.x_size)]
    for term in v.terms:
        if term.weight == 0:
            continue
        piece = compose(term.t, compose(wp, term.r))
        for x in range(v.x_size):
            prow = piece.rows[x]
            out = rows[x]
            for y in range(v.y_size):
                if prow[y] != 0:
                    out[y] += term.weight * prow[y]
    return Channel(v.x_size, v.y_size, tuple(tuple(row) for row in rows))


def enumerate_det_pairs(
    x_size: int,
    xp_size: int,
    yp_size: int,
    y_size: int,
    max_pairs: int = DEFAULT_MAX_PAIRS,
) -> DetPairBasis:
    """All (f, g) deterministic pairs in lexicographic order.

    Raises ResourceLimitError when xp_size^x_size · y_size^yp_size exceeds
    max_pairs; that failure is a budget statement, never a verdict.
    """
    for size in (x_size, xp_size, yp_size, y_size):
        if size < 1:
            raise ValueError("alphabet sizes must be >= 1")
    count = xp_size**x_size * y_size**yp_size
    if count > max_pairs:
        raise ResourceLimitError(
            f"deterministic-pair basis has {count} elements (cap {max_pairs})"
        )
    pairs = tuple(
        (
            DeterministicMap(x_size, xp_size, f_img),
            DeterministicMap(yp_size, y_size, g_img),
        )
        for f_img in product(range(1, xp_size + 1), repeat=x_size)
        for g_img in product(range(1, y_size + 1), repeat=yp_size)
    )
    return DetPairBasis(x_size, xp_size, yp_size, y_size, pairs)


def _flat_atom(term: CpcTerm, v: CpcChannel) -> tuple:
    """Flattened R⊗T matrix of one term (the term's as_channel, weight 1)."""
    single = CpcChannel(
        v.x_size, v.xp_size, v.yp_size, v.y_size, (CpcTerm(ONE, term.r, term.t),)
    )
    flat = as_channel(single)
    return tuple(p for row in flat.rows for p in row)


def _affine_dependence(atoms):
    """A nonzero vector γ with Σγ_i = 0 and Σγ_i·atom_i = 0, or None.

    Gaussian elimination over exact rationals on the matrix whose columns
    are (1, atom_i): the first column found to be dependent on the pivot
    columns before it yields a kernel vector.
    """
    k = len(atoms)
    if k < 2:
        return None
    dim = len(atoms[0]) + 1
    matrix = [
        [ONE if i == 0 else atoms[j][i - 1] for j in range(k)] for i in range(dim)
    ]
    col_of_row = []  # pivot column owned by each reduced row, in order
    for j in range(k):
        rank = len(col_of_row)
        pivot = -1
        for i in range(rank, dim):
            if matrix[i][j] != 0:
                pivot = i
                break
        if pivot < 0:
            gamma = [ZERO] * k
            gamma[j] = -ONE
            for i in range(rank):
                if matrix[i][j] != 0:
                    gamma[col_of_row[i]] = matrix[i][j]
            return gamma
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        inv = 1 / matrix[rank][j]
        if inv != 1:
            matrix[rank] = [val * inv for val in matrix[rank]]
        for i in range(dim):
            if i != rank and matrix[i][j] != 0:
                factor = matrix[i][j]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], matrix[rank])]
        col_of_row.append(j)
    return None


def caratheodory_reduce(v: CpcChannel) -> CpcChannel:
    """Shrink the term list without changing the flattened channel.

    Identical (R, T) atoms are merged, then affine dependences among the
    remaining atoms are eliminated one at a time, each step shifting weight
    along the dependence until some term's weight hits zero. The result has
    at most x·y'·x'·y + 1 terms and flattens to exactly the same channel.
    """
    merged = {}
    order = []
    for term in v.terms:
        if term.weight == 0:
            continue
        key = (term.r, term.t)
        if key in merged:
            merged[key] = CpcTerm(merged[key].weight + term.weight, term.r, term.t)
        else:
            merged[key] = term
            order.append(key)
    terms = [merged[key] for key in order]
    if not terms:
        raise ValueError("convex-product channel has no mass")
    atoms = [_flat_atom(term, v) for term in terms]
    while True:
        gamma = _affine_dependence(atoms)
        if gamma is None:
            break
        if not any(g > 0 for g in gamma):
            gamma = [-g for g in gamma]
        step = None
        for term, g in zip(terms, gamma):
            if g > 0:
                ratio = term.weight / g
                if step is None or ratio < step:
                    step = ratio
        next_terms = []
        next_atoms = []
        for term, atom, g in zip(terms, atoms, gamma):
            w = term.weight - step * g
            if w < 0:
                raise AssertionError("dependence elimination produced negative weight")
            if w != 0:
                next_terms.append(CpcTerm(w, term.r, term.t))
                next_atoms.append(atom)
        terms, atoms = next_terms, next_atoms
    return CpcChannel(v.x_size, v.xp_size, v.yp_size, v.y_size, tuple(terms))


def cpc_to_json(v: CpcChannel) -> dict:
    return {
        "sizes": [v.x_size, v.xp_size, v.yp_size, v.y_size],
        "terms": [
            {
                "weight": rat_str(term.weight),
                "r": channel_to_json(term.r),
                "t": channel_to_json(term.t),
            }
            for term in v.terms
        ],
    }


def cpc_from_json(obj) -> CpcChannel:
    if not isinstance(obj, dict):
        raise ValueError("convex-product channel JSON must be an object")
    try:
        x, xp, yp, y = (int(s) for s in obj["sizes"])
        raw_terms = obj["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed convex-product channel JSON: {exc}") from exc
    terms = tuple(
        CpcTerm(
            parse_rat(entry["weight"]),
            channel_from_json(entry["r"]),
            channel_from_json(entry["t"]),
        )
        for entry in raw_terms
    )
    return CpcChannel(x, xp, yp, y, terms)

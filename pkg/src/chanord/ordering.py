"""Containment, equivalence, and degradedness oracles with certificates.

A channel W' contains W exactly when W is a convex combination of
T ∘ W' ∘ R over deterministic pairs (R, T), so containment is a rational
feasibility question over the deterministic-pair basis. A feasible answer
is returned as an explicit mixture that reconstructs W; an infeasible one
is converted into a normalized positive payoff function whose optimal
average payoff strictly separates the two channels. Both objects are
re-verified exactly before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .brm import BrmGame, optimal_average_payoff
from .channel_core import Channel, DeterministicMap, compose
from .cpc import DEFAULT_MAX_PAIRS, CpcChannel, cpc_from_pairs, skew_compose_channel
from .errors import (
    DimensionMismatchError,
    InternalCheckError,
    ResourceLimitError,
)
from .lp_solver import (
    DEFAULT_MAX_PIVOTS,
    FEASIBLE,
    StandardLp,
    solve_feasibility,
)
from .rational import ONE, ZERO, parse_rat, rat_str

CONTAINS = "contains"
DOES_NOT_CONTAIN = "does-not-contain"


@dataclass(frozen=True)
class ContainmentWitness:
    """Sparse positive weights on deterministic (f, g) pairs summing to 1.

    f maps the simulated channel's inputs into the simulator's inputs and
    g maps the simulator's outputs back; mixing D_g ∘ W' ∘ D_f with these
    weights reproduces the simulated channel exactly.
    """

    basis_weights: tuple  # ((f: DeterministicMap, g: DeterministicMap), weight)


@dataclass(frozen=True)
class SeparationCertificate:
    """A normalized positive payoff matrix with a strict optimal-payoff gap.

    payoff has one row per simulated-channel input and one column per
    simulated-channel output; gap is the exact difference of the two
    optimal average payoffs and is strictly positive.
    """

    payoff: tuple
    gap: object


@dataclass(frozen=True)
class OrderingVerdict:
    tag: str
    witness: ContainmentWitness | None = None
    certificate: SeparationCertificate | None = None

    @property
    def holds(self) -> bool:
        return self.tag == CONTAINS


def witness_to_cpc(witness: ContainmentWitness) -> CpcChannel:
    """The convex-product channel whose terms are the witness pairs."""
    (f0, g0), _ = witness.basis_weights[0]
    return cpc_from_pairs(
        witness.basis_weights,
        x_size=f0.domain_size,
        xp_size=f0.codomain_size,
        yp_size=g0.domain_size,
        y_size=g0.codomain_size,
    )


def apply_witness(witness: ContainmentWitness, wp: Channel) -> Channel:
    """Reconstruct the simulated channel: Σ α(f,g) · D_g ∘ wp ∘ D_f."""
    return skew_compose_channel(witness_to_cpc(witness), wp)


def _reduce_target(w: Channel):
    """Drop duplicate rows and mass-free output columns of the target.

    Either reduction is an exact mutual simulation by single deterministic
    pairs, so it changes neither the containment verdict nor (after the
    translation below) the witness semantics; it only shrinks the
    feasibility program. Returns (reduced channel, input map onto the kept
    representatives, output injection back into the original alphabet).
    """
    first_of = {}
    kept_rows = []
    to_red = []
    for row in w.rows:
        if row not in first_of:
            first_of[row] = len(kept_rows)
            kept_rows.append(row)
        to_red.append(first_of[row] + 1)
    live = [y for y in range(w.output_size) if any(row[y] != 0 for row in kept_rows)]
    reduced = Channel(
        len(kept_rows),
        len(live),
        tuple(tuple(row[y] for y in live) for row in kept_rows),
    )
    input_map = DeterministicMap(w.input_size, reduced.input_size, tuple(to_red))
    output_injection = DeterministicMap(
        reduced.output_size, w.output_size, tuple(y + 1 for y in live)
    )
    return reduced, input_map, output_injection


def _simulation_columns(wp: Channel, x_size: int, y_size: int, max_pairs: int):
    """Distinct columns D_g ∘ wp ∘ D_f, each with its lex-first (f, g) pair.

    The full basis has |X'|^|X| · |Y|^|Y'| pairs (checked against
    max_pairs); duplicates are collapsed in two stages (f only acts through
    the rows it selects, g only through the output columns of wp that carry
    mass) so the feasibility program stays small. Column order is
    deterministic.
    """
    count = wp.input_size**x_size * y_size**wp.output_size
    if count > max_pairs:
        raise ResourceLimitError(
            f"deterministic-pair basis has {count} elements (cap {max_pairs})"
        )
    row_choices = {}
    for f_img in product(range(1, wp.input_size + 1), repeat=x_size):
        key = tuple(wp.rows[i - 1] for i in f_img)
        if key not in row_choices:
            row_choices[key] = f_img
    live_outputs = [
        any(row[y] != 0 for row in wp.rows) for y in range(wp.output_size)
    ]
    merge_choices = {}
    for g_img in product(range(1, y_size + 1), repeat=wp.output_size):
        key = tuple(v for v, live in zip(g_img, live_outputs) if live)
        if key not in merge_choices:
            merge_choices[key] = g_img
    columns = {}
    for selected_rows, f_img in row_choices.items():
        for g_img in merge_choices.values():
            flat = []
            for row in selected_rows:
                out = [ZERO] * y_size
                for yp, p in enumerate(row):
                    if p != 0:
                        out[g_img[yp] - 1] += p
                flat.extend(out)
            key = tuple(flat)
            if key not in columns:
                columns[key] = (f_img, g_img)
    return list(columns.items())


def _certificate_from_farkas(wp, w, w_red, dual, max_pairs):
    """Turn a Farkas dual over the reduced (x, y) rows into a separating payoff.

    Every column and the target have unit row sums per input, so adding a
    per-input constant to the dual preserves the strict gap; shifting to
    nonnegativity and scaling into the probability simplex yields a
    normalized positive payoff. Optimal payoffs are invariant under the
    target reduction (an exact mutual simulation), so the payoff separates
    the original channels; the gap is re-derived from two exact
    optimal-average-payoff evaluations against them.
    """
    n, m = w_red.input_size, w_red.output_size
    shifted = []
    for x in range(n):
        block = [dual[x * m + y] for y in range(m)]
        low = min(block)
        shifted.append([v - low for v in block])
    total = sum(sum(block) for block in shifted)
    if total <= 0:
        raise InternalCheckError("degenerate Farkas dual for separation")
    payoff = tuple(tuple(v / total for v in block) for block in shifted)
    own_game = BrmGame(n, w.input_size, w.output_size, m, payoff, w)
    other_game = BrmGame(n, wp.input_size, wp.output_size, m, payoff, wp)
    own_opt, _ = optimal_average_payoff(own_game, max_encoders=max_pairs)
    other_opt, _ = optimal_average_payoff(other_game, max_encoders=max_pairs)
    gap = own_opt - other_opt
    if gap <= 0:
        raise InternalCheckError("separating payoff failed to produce a gap")
    return SeparationCertificate(payoff=payoff, gap=gap)


def contains(
    wp: Channel,
    w: Channel,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_pivots: int = DEFAULT_MAX_PIVOTS,
) -> OrderingVerdict:
    """Decide whether wp contains w, with a verified witness either way."""
    if wp == w:
        f = DeterministicMap(w.input_size, w.input_size,
                             tuple(range(1, w.input_size + 1)))
        g = DeterministicMap(w.output_size, w.output_size,
                             tuple(range(1, w.output_size + 1)))
        witness = ContainmentWitness((((f, g), ONE),))
        _verify_witness(witness, wp, w)
        return OrderingVerdict(tag=CONTAINS, witness=witness)
    w_red, input_map, output_injection = _reduce_target(w)
    columns = _simulation_columns(wp, w_red.input_size, w_red.output_size, max_pairs)
    target = [p for row in w_red.rows for p in row]
    matrix = []
    for r in range(len(target)):
        matrix.append(tuple(col[r] for col, _pair in columns))
    matrix.append((ONE,) * len(columns))
    lp = StandardLp(tuple(matrix), tuple(target) + (ONE,),
                    (ZERO,) * len(columns))
    outcome = solve_feasibility(lp, max_pivots=max_pivots)
    if outcome.tag == FEASIBLE:
        weights = []
        for alpha, (_col, (f_img, g_img)) in zip(outcome.primal, columns):
            if alpha != 0:
                # Pull the pair back through the reduction maps: inputs of w
                # first collapse onto their representatives, and simulated
                # outputs re-inject into w's full output alphabet.
                f = DeterministicMap(
                    w.input_size,
                    wp.input_size,
                    tuple(f_img[input_map(x) - 1] for x in range(1, w.input_size + 1)),
                )
                g = DeterministicMap(
                    wp.output_size,
                    w.output_size,
                    tuple(output_injection(v) for v in g_img),
                )
                weights.append(((f, g), alpha))
        witness = ContainmentWitness(tuple(weights))
        _verify_witness(witness, wp, w)
        return OrderingVerdict(tag=CONTAINS, witness=witness)
    certificate = _certificate_from_farkas(
        wp, w, w_red, outcome.dual_certificate, max_pairs
    )
    return OrderingVerdict(tag=DOES_NOT_CONTAIN, certificate=certificate)


def _verify_witness(witness: ContainmentWitness, wp: Channel, w: Channel):
    total = ZERO
    for (_pair, weight) in witness.basis_weights:
        if weight <= 0:
            raise InternalCheckError("witness carries a non-positive weight")
        total += weight
    if total != ONE:
        raise InternalCheckError("witness weights do not sum to 1")
    if apply_witness(witness, wp) != w:
        raise InternalCheckError("witness does not reconstruct the target channel")


def shannon_equivalent(
    w1: Channel,
    w2: Channel,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_pivots: int = DEFAULT_MAX_PIVOTS,
):
    """Verdicts for (w2 contains w1, w1 contains w2); equivalent iff both hold."""
    return (
        contains(w2, w1, max_pairs=max_pairs, max_pivots=max_pivots),
        contains(w1, w2, max_pairs=max_pairs, max_pivots=max_pivots),
    )


def degraded_from(
    w: Channel, wp: Channel, max_pivots: int = DEFAULT_MAX_PIVOTS
) -> Channel | None:
    """Some output randomizer T with w = T ∘ wp, or None if none exists."""
    if w.input_size != wp.input_size:
        raise DimensionMismatchError("degraded_from: input alphabets differ")
    if w == wp:
        return _identity(w.output_size)
    n = w.input_size
    m_from, m_to = wp.output_size, w.output_size
    # Variables t[y2][y1] flattened y2-major.
    rows = []
    rhs = []
    for x in range(n):
        for y1 in range(m_to):
            coeff = [ZERO] * (m_from * m_to)
            for y2 in range(m_from):
                coeff[y2 * m_to + y1] = wp.rows[x][y2]
            rows.append(tuple(coeff))
            rhs.append(w.rows[x][y1])
    for y2 in range(m_from):
        coeff = [ZERO] * (m_from * m_to)
        for y1 in range(m_to):
            coeff[y2 * m_to + y1] = ONE
        rows.append(tuple(coeff))
        rhs.append(ONE)
    lp = StandardLp(tuple(rows), tuple(rhs), (ZERO,) * (m_from * m_to))
    outcome = solve_feasibility(lp, max_pivots=max_pivots)
    if outcome.tag != FEASIBLE:
        return None
    t_rows = tuple(
        tuple(outcome.primal[y2 * m_to + y1] for y1 in range(m_to))
        for y2 in range(m_from)
    )
    witness = Channel(m_from, m_to, t_rows)
    if compose(witness, wp) != w:
        raise InternalCheckError("degradation witness failed verification")
    return witness


def input_degraded_from(
    w: Channel, wp: Channel, max_pivots: int = DEFAULT_MAX_PIVOTS
) -> Channel | None:
    """Some input randomizer R with w = wp ∘ R, or None if none exists."""
    if w.output_size != wp.output_size:
        raise DimensionMismatchError("input_degraded_from: output alphabets differ")
    if w == wp:
        return _identity(w.input_size)
    n_from, n_to = w.input_size, wp.input_size
    m = w.output_size
    # Variables r[x1][x2] flattened x1-major.
    rows = []
    rhs = []
    for x1 in range(n_from):
        for y in range(m):
            coeff = [ZERO] * (n_from * n_to)
            for x2 in range(n_to):
                coeff[x1 * n_to + x2] = wp.rows[x2][y]
            rows.append(tuple(coeff))
            rhs.append(w.rows[x1][y])
    for x1 in range(n_from):
        coeff = [ZERO] * (n_from * n_to)
        for x2 in range(n_to):
            coeff[x1 * n_to + x2] = ONE
        rows.append(tuple(coeff))
        rhs.append(ONE)
    lp = StandardLp(tuple(rows), tuple(rhs), (ZERO,) * (n_from * n_to))
    outcome = solve_feasibility(lp, max_pivots=max_pivots)
    if outcome.tag != FEASIBLE:
        return None
    r_rows = tuple(
        tuple(outcome.primal[x1 * n_to + x2] for x2 in range(n_to))
        for x1 in range(n_from)
    )
    witness = Channel(n_from, n_to, r_rows)
    if compose(wp, witness) != w:
        raise InternalCheckError("input-degradation witness failed verification")
    return witness


def _identity(n: int) -> Channel:
    return Channel(
        n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))
    )


def embed(w: Channel, n2: int, m2: int) -> Channel:
    """Canonical embedding into larger alphabets, Shannon-equivalent to w.

    Inputs beyond the original alphabet behave like the last original input
    (canonical surjection), and the original outputs inject unchanged with
    the new outputs unreachable.
    """
    if n2 < w.input_size or m2 < w.output_size:
        raise DimensionMismatchError("embed: target alphabets may not shrink")
    rows = []
    for i in range(1, n2 + 1):
        src = min(i, w.input_size)
        rows.append(w.rows[src - 1] + (ZERO,) * (m2 - w.output_size))
    return Channel(n2, m2, tuple(rows))


def _in_hull_of_rows(target, others, max_pivots):
    """Exact test: is target a convex combination of the given rows?"""
    if not others:
        return False
    rows = []
    for coord in range(len(target)):
        rows.append(tuple(other[coord] for other in others))
    rows.append((ONE,) * len(others))
    lp = StandardLp(tuple(rows), tuple(target) + (ONE,), (ZERO,) * len(others))
    return solve_feasibility(lp, max_pivots=max_pivots).tag == FEASIBLE


def _proportional(col1, col2) -> bool:
    """Exact proportionality of two nonnegative columns (either may be zero)."""
    for i in range(len(col1)):
        for j in range(i + 1, len(col1)):
            if col1[i] * col2[j] != col1[j] * col2[i]:
                return False
    return True


def srank_upper_bound(
    w: Channel,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_pivots: int = DEFAULT_MAX_PIVOTS,
) -> int:
    """Heuristic upper bound on the size of the smallest equivalent channel.

    Inputs whose rows lie in the convex hull of the other rows are dropped
    (they can be simulated by input randomization), then proportional
    output columns are merged (they can be split back by output
    randomization). The reduced channel is checked to be Shannon-equivalent
    to w before the bound max(#inputs, #outputs) is reported. Whether this
    bound is tight is unknown; nothing downstream assumes it is.
    """
    kept = list(range(w.input_size))
    changed = True
    while changed:
        changed = False
        for idx in list(kept):
            others = [w.rows[i] for i in kept if i != idx]
            if _in_hull_of_rows(w.rows[idx], others, max_pivots):
                kept.remove(idx)
                changed = True
                break
    columns = []
    for y in range(w.output_size):
        columns.append(tuple(w.rows[i][y] for i in kept))
    classes = []  # list of lists of column indices
    for y, col in enumerate(columns):
        if not any(col):
            # Mass-free output: merge into the first class (adds nothing).
            if classes:
                classes[0].append(y)
            else:
                classes.append([y])
            continue
        for cls in classes:
            rep = columns[cls[0]]
            if any(rep) and _proportional(col, rep):
                cls.append(y)
                break
        else:
            classes.append([y])
    reduced_rows = []
    for i in kept:
        row = []
        for cls in classes:
            row.append(sum((w.rows[i][y] for y in cls), start=ZERO))
        reduced_rows.append(tuple(row))
    reduced = Channel(len(kept), len(classes), tuple(reduced_rows))
    forward, backward = shannon_equivalent(
        w, reduced, max_pairs=max_pairs, max_pivots=max_pivots
    )
    if not (forward.holds and backward.holds):
        raise InternalCheckError("reduced channel is not equivalent to the original")
    return max(len(kept), len(classes))


def _map_key(f: DeterministicMap, g: DeterministicMap) -> str:
    f_part = ",".join(str(v) for v in f.image)
    g_part = ",".join(str(v) for v in g.image)
    return f"f=[{f_part}];g=[{g_part}]"


def _parse_map_key(key: str):
    body = key.strip()
    if not body.startswith("f=[") or ";g=[" not in body or not body.endswith("]"):
        raise ValueError(f"malformed witness key {key!r}")
    f_text, g_text = body[len("f=[") :].split("];g=[", 1)
    g_text = g_text[:-1]
    f_img = tuple(int(s) for s in f_text.split(",") if s)
    g_img = tuple(int(s) for s in g_text.split(",") if s)
    return f_img, g_img


def witness_to_json(witness: ContainmentWitness) -> dict:
    (f0, g0), _ = witness.basis_weights[0]
    return {
        "x_size": f0.domain_size,
        "xp_size": f0.codomain_size,
        "yp_size": g0.domain_size,
        "y_size": g0.codomain_size,
        "weights": {
            _map_key(f, g): rat_str(weight)
            for (f, g), weight in witness.basis_weights
        },
    }


def witness_from_json(obj) -> ContainmentWitness:
    try:
        x, xp, yp, y = (
            int(obj[k]) for k in ("x_size", "xp_size", "yp_size", "y_size")
        )
        raw = obj["weights"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed witness JSON: {exc}") from exc
    entries = []
    for key in sorted(raw):
        f_img, g_img = _parse_map_key(key)
        entries.append(
            (
                (
                    DeterministicMap(x, xp, f_img),
                    DeterministicMap(yp, y, g_img),
                ),
                parse_rat(raw[key]),
            )
        )
    if not entries:
        raise ValueError("witness JSON carries no weights")
    return ContainmentWitness(tuple(entries))


def certificate_to_json(cert: SeparationCertificate) -> dict:
    return {
        "payoff": [[rat_str(v) for v in row] for row in cert.payoff],
        "gap": rat_str(cert.gap),
    }


def certificate_from_json(obj) -> SeparationCertificate:
    try:
        payoff = tuple(tuple(parse_rat(v) for v in row) for row in obj["payoff"])
        gap = parse_rat(obj["gap"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed certificate JSON: {exc}") from exc
    return SeparationCertificate(payoff=payoff, gap=gap)


def verdict_to_json(verdict: OrderingVerdict) -> dict:
    out = {"verdict": verdict.tag}
    if verdict.witness is not None:
        out["witness"] = witness_to_json(verdict.witness)
    if verdict.certificate is not None:
        out["certificate"] = certificate_to_json(verdict.certificate)
    return out

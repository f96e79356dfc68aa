import pytest

from oracles import brute_force_optimal_average

from chanord.brm import (
    BrmGame,
    Strategy,
    average_payoff,
    game_from_json,
    game_to_json,
    optimal_average_payoff,
    payoff,
    payoff_vector,
    region_generators,
    region_subset,
    strategy_to_cpc,
)
from chanord.channel_core import (
    DeterministicMap,
    bsc,
    identity_channel,
    make_channel,
    random_channel,
)
from chanord.cpc import as_channel
from chanord.errors import DimensionMismatchError, ResourceLimitError
from chanord.prng import counter_int
from chanord.rational import ONE, ZERO, Rat


def constant_payoff(u, v):
    return tuple(tuple(Rat(1, u * v) for _ in range(v)) for _ in range(u))


def random_payoff(u, v, seed, normalized=True):
    draws = [
        [counter_int(seed, i, j, bound=9) + 1 for j in range(v)] for i in range(u)
    ]
    total = sum(sum(r) for r in draws)
    if not normalized:
        total = 1
    return tuple(tuple(Rat(k, total) for k in row) for row in draws)


def random_game(seed, u=2, x=2, y=2, v=2, den=8):
    return BrmGame(u, x, y, v, random_payoff(u, v, seed), random_channel(x, y, seed + 991, den))


def random_strategy(game, seed, k=2):
    weights = [counter_int(seed, 5, i, bound=7) + 1 for i in range(k)]
    total = sum(weights)
    encoders = tuple(
        DeterministicMap(
            game.u_size,
            game.x_size,
            tuple(
                counter_int(seed, 6, i, u, bound=game.x_size - 1) + 1
                for u in range(game.u_size)
            ),
        )
        for i in range(k)
    )
    decoders = tuple(
        DeterministicMap(
            game.y_size,
            game.v_size,
            tuple(
                counter_int(seed, 7, i, y, bound=game.v_size - 1) + 1
                for y in range(game.y_size)
            ),
        )
        for i in range(k)
    )
    return Strategy(tuple(Rat(w, total) for w in weights), encoders, decoders)


def single_pair_strategy(game, f_img, g_img):
    return Strategy(
        (ONE,),
        (DeterministicMap(game.u_size, game.x_size, f_img),),
        (DeterministicMap(game.y_size, game.v_size, g_img),),
    )


def test_constant_payoff_is_strategy_independent():
    game = BrmGame(2, 2, 2, 2, constant_payoff(2, 2), random_channel(2, 2, 3, 8))
    for seed in range(5):
        s = random_strategy(game, seed)
        for u in (1, 2):
            assert payoff(u, s, game) == Rat(1, 4)


def test_single_pair_payoff_formula():
    game = random_game(17)
    s = single_pair_strategy(game, (2, 1), (1, 2))
    for u in (1, 2):
        row = game.randomizer.rows[s.encoders[0](u) - 1]
        expected = sum(
            (row[y] * game.payoff_matrix[u - 1][s.decoders[0](y + 1) - 1]
             for y in range(2)),
            start=ZERO,
        )
        assert payoff(u, s, game) == expected


def test_payoff_matches_joint_channel_contraction():
    # The structured formula and the contraction through the strategy's
    # convex-product channel must agree entry for entry.
    game = random_game(23)
    s = random_strategy(game, 31)
    flat = as_channel(strategy_to_cpc(s))
    for u in range(1, game.u_size + 1):
        acc = ZERO
        for x in range(1, game.x_size + 1):
            for y in range(1, game.y_size + 1):
                for v in range(1, game.v_size + 1):
                    row = (u - 1) * game.y_size + (y - 1)
                    col = (x - 1) * game.v_size + (v - 1)
                    joint = flat.rows[row][col]
                    if joint != 0:
                        acc += (
                            joint
                            * game.randomizer.rows[x - 1][y - 1]
                            * game.payoff_matrix[u - 1][v - 1]
                        )
        assert payoff(u, s, game) == acc


def test_payoff_vector_shapes_and_linearity():
    narrow = BrmGame(1, 2, 2, 2, random_payoff(1, 2, 5), random_channel(2, 2, 7, 8))
    s = random_strategy(narrow, 8)
    assert payoff_vector(s, narrow) == (payoff(1, s, narrow),)

    game = random_game(41)
    s = random_strategy(game, 42, k=3)
    mix = [ZERO] * game.u_size
    for wgt, enc, dec in zip(s.weights, s.encoders, s.decoders):
        part = payoff_vector(single_pair_strategy(game, enc.image, dec.image), game)
        mix = [m + wgt * p for m, p in zip(mix, part)]
    assert payoff_vector(s, game) == tuple(mix)


def test_average_payoff_is_mean():
    game = random_game(51)
    s = random_strategy(game, 52)
    vec = payoff_vector(s, game)
    assert average_payoff(s, game) == sum(vec, start=ZERO) / game.u_size


def test_optimal_average_payoff_closed_cases():
    const = BrmGame(2, 2, 2, 2, constant_payoff(2, 2), random_channel(2, 2, 61, 8))
    value, _pair = optimal_average_payoff(const)
    assert value == Rat(1, 4)

    useless = BrmGame(
        2, 2, 2, 2, random_payoff(2, 2, 62), make_channel([["1/2", "1/2"]] * 2)
    )
    value, _pair = optimal_average_payoff(useless)
    best_col = max(
        sum((useless.payoff_matrix[u][v] for u in range(2)), start=ZERO)
        for v in range(2)
    )
    assert value == best_col / 2

    half_identity = tuple(
        tuple(Rat(1, 2) if u == v else ZERO for v in range(2)) for u in range(2)
    )
    diag = BrmGame(2, 2, 2, 2, half_identity, identity_channel(2))
    value, (f, g) = optimal_average_payoff(diag)
    # Full enumeration of the 16 deterministic pairs: the payoff relayed
    # through the identity randomizer is (1/2)·Σ_u l(u, g(f(u))), maximal
    # when g∘f is the identity, giving (1/2)(1/2 + 1/2) = 1/2.
    assert value == brute_force_optimal_average(diag) == Rat(1, 2)
    assert g.image[f.image[0] - 1] == 1 and g.image[f.image[1] - 1] == 2


def test_optimal_average_payoff_matches_brute_force():
    for seed in range(12):
        game = random_game(seed + 700, u=2, x=3, y=2, v=2)
        value, pair = optimal_average_payoff(game)
        assert value == brute_force_optimal_average(game)
        attained = average_payoff(
            single_pair_strategy(game, pair[0].image, pair[1].image), game
        )
        assert attained == value


def test_optimal_average_payoff_cap():
    game = random_game(55, u=3, x=3)
    with pytest.raises(ResourceLimitError):
        optimal_average_payoff(game, max_encoders=10)


def test_optimal_dominates_random_strategies():
    game = random_game(81, u=2, x=2, y=2, v=3)
    value, _ = optimal_average_payoff(game)
    for seed in range(100):
        s = random_strategy(game, 8200 + seed, k=3)
        assert average_payoff(s, game) <= value


def test_strategy_to_cpc_structure():
    game = random_game(91)
    one = single_pair_strategy(game, (1, 2), (2, 1))
    v = strategy_to_cpc(one)
    assert len(v.terms) == 1 and v.terms[0].weight == ONE

    s = Strategy(
        (Rat(1, 2), Rat(1, 2)),
        (one.encoders[0], one.encoders[0]),
        (one.decoders[0], one.decoders[0]),
    )
    v2 = strategy_to_cpc(s)
    assert [t.weight for t in v2.terms] == [Rat(1, 2), Rat(1, 2)]
    for row in as_channel(v2).rows:
        assert sum(row, start=ZERO) == ONE


def test_region_generators_shapes():
    tiny = BrmGame(1, 1, 1, 1, ((ONE,),), identity_channel(1))
    assert region_generators(tiny).points == ((ONE,),)

    const = BrmGame(2, 2, 2, 2, constant_payoff(2, 2), random_channel(2, 2, 95, 8))
    gens = region_generators(const)
    assert len(gens.points) == 16
    assert set(gens.points) == {(Rat(1, 4), Rat(1, 4))}

    game = random_game(96)
    gens = region_generators(game)
    assert len(gens.points) == game.x_size**game.u_size * game.v_size**game.y_size


def test_region_generators_cover_mixed_strategies():
    game = random_game(97)
    gens = region_generators(game)
    samples = [payoff_vector(random_strategy(game, 9800 + i, k=3), game) for i in range(100)]
    from chanord.brm import PayoffRegionGenerators

    sample_region = PayoffRegionGenerators(game.u_size, tuple(samples))
    assert region_subset(sample_region, gens).inside_all


def test_region_subset_reflexive_and_violations():
    game = random_game(99)
    gens = region_generators(game)
    assert region_subset(gens, gens).inside_all

    from chanord.brm import PayoffRegionGenerators

    point = gens.points[0]
    singleton = PayoffRegionGenerators(game.u_size, (point,))
    assert region_subset(singleton, PayoffRegionGenerators(game.u_size, (point, point))).inside_all

    with pytest.raises(DimensionMismatchError):
        region_subset(gens, PayoffRegionGenerators(game.u_size + 1, ((ZERO,) * 3,)))


def test_region_subset_separates_bsc_pair():
    payoff_m = random_payoff(2, 2, 101)
    good = BrmGame(2, 2, 2, 2, payoff_m, bsc("1/10"))
    bad = BrmGame(2, 2, 2, 2, payoff_m, bsc("3/10"))
    inclusion = region_subset(region_generators(bad), region_generators(good))
    assert inclusion.inside_all
    reverse = region_subset(region_generators(good), region_generators(bad))
    assert not reverse.inside_all
    assert reverse.violator in region_generators(good).points


def test_region_subset_implies_optimal_inequality():
    for seed in range(8):
        g1 = random_game(1100 + seed)
        g2 = BrmGame(
            g1.u_size, 2, 2, g1.v_size, g1.payoff_matrix, random_channel(2, 2, 1200 + seed, 8)
        )
        if region_subset(region_generators(g1), region_generators(g2)).inside_all:
            v1, _ = optimal_average_payoff(g1)
            v2, _ = optimal_average_payoff(g2)
            assert v1 <= v2


def test_equivalent_channels_share_optimal_payoffs():
    from chanord.channel_core import compose, deterministic
    from chanord.ordering import shannon_equivalent

    w = random_channel(2, 3, 141, 8)
    sigma = deterministic(DeterministicMap(2, 2, (2, 1)))
    tau = deterministic(DeterministicMap(3, 3, (3, 1, 2)))
    other = compose(tau, compose(w, sigma))
    first, second = shannon_equivalent(w, other)
    assert first.holds and second.holds
    for seed in range(5):
        payoff = random_payoff(2, 2, 1500 + seed)
        v1, _ = optimal_average_payoff(BrmGame(2, 2, 3, 2, payoff, w))
        v2, _ = optimal_average_payoff(BrmGame(2, 2, 3, 2, payoff, other))
        assert v1 == v2


def test_game_json_round_trip():
    game = random_game(131, u=2, x=3, y=2, v=2)
    assert game_from_json(game_to_json(game)) == game
    assert game.is_normalized()

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chanord.channel_core import (
    Alphabet,
    DeterministicMap,
    bsc,
    channel_from_json,
    channel_product,
    channel_sum,
    channel_to_json,
    compose,
    deterministic,
    identity_channel,
    make_channel,
    random_channel,
    tv_distance,
)
from chanord.errors import DimensionMismatchError
from chanord.rational import ONE, ZERO, Rat


def small_channels(max_size=3, max_den=8):
    return st.builds(
        random_channel,
        st.integers(1, max_size),
        st.integers(1, max_size),
        st.integers(0, 10**6),
        st.just(max_den),
    )


def det_maps(domain, codomain):
    return st.tuples(*[st.integers(1, codomain)] * domain).map(
        lambda img: DeterministicMap(domain, codomain, img)
    )


def test_alphabet_invariant():
    assert Alphabet(3).size == 3
    with pytest.raises(ValueError):
        Alphabet(0)


def test_channel_validation_rejects_bad_rows():
    with pytest.raises(ValueError):
        make_channel([[Rat(1, 2), Rat(1, 3)]])
    with pytest.raises(ValueError):
        make_channel([[Rat(3, 2), Rat(-1, 2)]])


def test_compose_identity_is_neutral():
    w = random_channel(3, 3, 5, 8)
    assert compose(identity_channel(3), w) == w
    assert compose(w, identity_channel(3)) == w


def test_compose_bsc_quarter_twice_gives_three_eighths():
    # (3/4)^2 + (1/4)^2 = 5/8 on the diagonal, so the crossover is 3/8.
    assert compose(bsc("1/4"), bsc("1/4")) == bsc("3/8")


def test_compose_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        compose(random_channel(3, 2, 0, 4), random_channel(2, 2, 0, 4))


@given(
    f=det_maps(3, 2),
    g=det_maps(2, 4),
)
def test_deterministic_composition_law(f, g):
    composed = DeterministicMap(3, 4, tuple(g(f(x)) for x in (1, 2, 3)))
    assert compose(deterministic(g), deterministic(f)) == deterministic(composed)


def test_deterministic_shapes():
    ident = DeterministicMap(3, 3, (1, 2, 3))
    assert deterministic(ident) == identity_channel(3)
    const = DeterministicMap(3, 2, (1, 1, 1))
    assert deterministic(const).rows == ((ONE, ZERO),) * 3
    swap = DeterministicMap(2, 2, (2, 1))
    assert deterministic(swap).rows == ((ZERO, ONE), (ONE, ZERO))


def test_channel_sum_blocks():
    assert channel_sum(identity_channel(1), identity_channel(1)) == identity_channel(2)
    s = channel_sum(bsc("1/10"), bsc("3/10"))
    assert (s.input_size, s.output_size) == (4, 4)
    for x in range(2):
        assert s.rows[x][:2] == bsc("1/10").rows[x]
        assert s.rows[x][2:] == (ZERO, ZERO)
        assert s.rows[2 + x][:2] == (ZERO, ZERO)
        assert s.rows[2 + x][2:] == bsc("3/10").rows[x]
    wide = channel_sum(random_channel(2, 3, 1, 4), random_channel(3, 2, 2, 4))
    assert (wide.input_size, wide.output_size) == (5, 5)


def test_channel_product_indexing():
    w = random_channel(2, 3, 9, 6)
    assert channel_product(w, identity_channel(1)) == w
    assert channel_product(identity_channel(2), identity_channel(2)) == identity_channel(4)
    prod = channel_product(bsc("1/4"), bsc("1/4"))
    # Row (1,1): second coordinate fastest, so (y1,y2) = 11,12,21,22.
    assert prod.rows[0] == (Rat(9, 16), Rat(3, 16), Rat(3, 16), Rat(1, 16))


def test_tv_distance_values():
    w = random_channel(2, 4, 3, 9)
    assert tv_distance(w, w) == ZERO
    assert tv_distance(bsc("1/10"), bsc("3/10")) == Rat(1, 5)
    swap = deterministic(DeterministicMap(2, 2, (2, 1)))
    assert tv_distance(identity_channel(2), swap) == ONE
    with pytest.raises(DimensionMismatchError):
        tv_distance(w, random_channel(2, 3, 3, 9))


@settings(max_examples=40)
@given(v=small_channels(), w=small_channels())
def test_compose_rows_sum_to_one(v, w):
    if v.input_size != w.output_size:
        v = random_channel(w.output_size, v.output_size, 17, 8)
    out = compose(v, w)
    for row in out.rows:
        assert sum(row, start=ZERO) == ONE


@settings(max_examples=25)
@given(
    u=small_channels(max_size=2),
    v=small_channels(max_size=2),
    w=small_channels(max_size=2),
)
def test_compose_associative(u, v, w):
    v = random_channel(w.output_size, v.output_size, 23, 8)
    u = random_channel(v.output_size, u.output_size, 29, 8)
    assert compose(u, compose(v, w)) == compose(compose(u, v), w)


@settings(max_examples=40)
@given(
    seeds=st.tuples(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6)),
    n=st.integers(1, 3),
    m=st.integers(1, 3),
)
def test_tv_is_a_metric(seeds, n, m):
    a, b, c = (random_channel(n, m, s, 7) for s in seeds)
    assert tv_distance(a, b) >= ZERO
    assert tv_distance(a, b) == tv_distance(b, a)
    assert tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c)
    assert (tv_distance(a, b) == ZERO) == (a == b)


@settings(max_examples=30)
@given(a=small_channels(), b=small_channels())
def test_product_rows_sum_to_one(a, b):
    for row in channel_product(a, b).rows:
        assert sum(row, start=ZERO) == ONE


def test_random_channel_contract():
    assert random_channel(1, 1, 0, 1) == make_channel([[1]])
    assert random_channel(4, 3, 11, 16) == random_channel(4, 3, 11, 16)
    assert random_channel(4, 3, 11, 16) != random_channel(4, 3, 12, 16)
    w = random_channel(2, 3, 7, 16)
    for row in w.rows:
        assert sum(row, start=ZERO) == ONE
        for p in row:
            assert p.denominator <= 16 * 3


def test_json_round_trip_and_rejection():
    w = random_channel(3, 2, 5, 9)
    again = channel_from_json(json.loads(json.dumps(channel_to_json(w))))
    assert again == w
    bad = channel_to_json(w)
    bad["rows"][0][0] = "1/3"
    with pytest.raises(ValueError):
        channel_from_json(bad)
    with pytest.raises(ValueError):
        channel_from_json({"input_size": 1, "output_size": 2, "rows": [["1"]]})

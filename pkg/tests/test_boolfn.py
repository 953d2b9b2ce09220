"""Truth-table core: orders, partitions, functions, subfunction counts, widths."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddlab.boolfn import (BoolFn, PartialBoolFn, Partition, VarOrder, evaluate, n_min, n_pi,
                          restrict, subfunction_count)
from ddlab.errors import CapacityError, ShapeError


def test_varorder_basics():
    order = VarOrder((2, 1, 3))
    assert order.n == 3
    assert order.position_of(2) == 1
    assert order.position_of(3) == 3
    assert tuple(VarOrder.identity(3)) == (1, 2, 3)
    assert VarOrder((1, 2)) == VarOrder([1, 2])
    assert len({VarOrder((1, 2)), VarOrder([1, 2])}) == 1


def test_varorder_rejects_non_permutations():
    with pytest.raises(ShapeError):
        VarOrder((1, 1, 2))
    with pytest.raises(ShapeError):
        VarOrder((0, 1))
    with pytest.raises(ShapeError):
        VarOrder(())


def test_partition_halves():
    part = Partition(VarOrder((2, 1, 3)), 2)
    assert part.left == (2, 1)
    assert part.right == (3,)
    with pytest.raises(ShapeError):
        Partition(VarOrder((1, 2)), 0)
    with pytest.raises(ShapeError):
        Partition(VarOrder((1, 2)), 2)


def test_boolfn_construction_and_indexing():
    # index = sum x_i 2^(n-i): variable 1 is the most significant index bit
    f = BoolFn.from_callable(2, lambda x: x[0])
    assert f.table.tolist() == [0, 0, 1, 1]
    g = BoolFn.from_callable(2, lambda x: x[1])
    assert g.table.tolist() == [0, 1, 0, 1]
    assert evaluate(f, (1, 0)) == 1
    assert evaluate(f, (0, 1)) == 0


def test_boolfn_hex_round_trip():
    f = BoolFn(4, [int(b) for b in "1010010110100101"])
    assert f.to_hex() == "a5a5"
    assert BoolFn.from_hex(4, "a5a5") == f
    assert BoolFn.constant(3, 1).to_hex() == "ff"


@settings(max_examples=60)
@given(st.integers(1, 8), st.data())
def test_boolfn_hex_round_trip_property(n, data):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n))
    f = BoolFn(n, bits)
    assert BoolFn.from_hex(n, f.to_hex()) == f


def test_partial_values_are_canonical():
    fp = PartialBoolFn(2, [1, 0, 0, 1], [1, 1, 1, 0])
    assert fp.values.tolist() == [1, 0, 0, 0]
    assert evaluate(fp, (0, 1)) is None
    assert evaluate(fp, (0, 0)) == 1
    assert fp.defined_count() == 2
    mask, vals = fp.to_hex_pair()
    assert PartialBoolFn.from_hex_pair(2, mask, vals) == fp


def test_restrict_renumbers_remaining_variables():
    f = BoolFn.from_callable(3, lambda x: x[0] ^ x[2])
    g = restrict(f, {1: 1})
    assert g.n == 2
    # remaining variables 2,3 become 1,2; the function is now NOT x_2
    assert g.table.tolist() == [1, 0, 1, 0]
    h = restrict(f, {1: 0, 2: 1, 3: 1})
    assert h.n == 1
    assert h.table.tolist() == [1, 1]


def test_subfunction_count_equality_cuts():
    def eq_fn(n):
        half = n // 2
        return BoolFn.from_callable(n, lambda x: int(x[:half] == x[half:]))

    e4 = eq_fn(4)
    assert subfunction_count(e4, Partition(VarOrder.identity(4), 2)) == 4
    assert subfunction_count(e4, Partition(VarOrder((1, 3, 2, 4)), 3)) == 3
    assert n_pi(e4, VarOrder((1, 3, 2, 4))) == 3
    assert n_min(e4) == 3
    for n in (2, 4, 6):
        assert subfunction_count(eq_fn(n), Partition(VarOrder.identity(n), n // 2)) == 1 << (n // 2)


def test_subfunction_count_partial():
    # the two defined points share the suffix x2=0 and disagree there -> 2 classes
    fp = PartialBoolFn(2, [1, 0, 1, 0], [1, 0, 0, 0])
    assert subfunction_count(fp, Partition(VarOrder.identity(2), 1)) == 2
    # defined points never overlap on a common suffix -> compatible, one class
    merged = PartialBoolFn(2, [1, 0, 0, 1], [1, 0, 0, 0])
    assert subfunction_count(merged, Partition(VarOrder.identity(2), 1)) == 1


def test_n_min_edge_cases():
    assert n_min(BoolFn.constant(1, 0)) == 1
    assert n_min(BoolFn.constant(3, 1)) == 1
    single = BoolFn.from_callable(3, lambda x: x[1])
    assert n_min(single) == 1  # order the live variable last
    xor3 = BoolFn.from_callable(3, lambda x: x[0] ^ x[1] ^ x[2])
    assert n_min(xor3) == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.randoms(use_true_random=False))
def test_n_min_dp_matches_enumeration(n, rnd):
    table = [rnd.randint(0, 1) for _ in range(1 << n)]
    f = BoolFn(n, table)
    assert n_min(f, strategy="auto") == n_min(f, strategy="enum")


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.randoms(use_true_random=False))
def test_n_min_partial_dp_matches_enumeration(n, rnd):
    defined = [rnd.randint(0, 1) for _ in range(1 << n)]
    values = [rnd.randint(0, 1) & d for d in defined]
    fp = PartialBoolFn(n, defined, values)
    assert n_min(fp, strategy="auto") == n_min(fp, strategy="enum")


def test_total_embedding_matches_function():
    f = BoolFn.from_callable(3, lambda x: x[0] & x[2])
    fp = PartialBoolFn.total(f)
    assert fp.defined_count() == 8
    assert n_min(fp) == n_min(f)
    assert subfunction_count(fp, Partition(VarOrder.identity(3), 1)) == \
        subfunction_count(f, Partition(VarOrder.identity(3), 1))


def test_capacity_caps():
    with pytest.raises(CapacityError):
        BoolFn(25, np.zeros(1 << 25, dtype=np.uint8))
    f = BoolFn.from_callable(9, lambda x: x[0])
    with pytest.raises(CapacityError):
        n_min(f, strategy="enum")

"""KR characters: t-conversion, closed forms, both routes, interval machinery."""

from __future__ import annotations

import math

import pytest

from clusterkr.errors import UsageError
from clusterkr.krchar import (
    IntervalCollection,
    KRDescriptor,
    c_collection,
    c_collection_expected_g,
    combined_sequence,
    general_position,
    hl_sweep_character,
    mgs_character,
    nested_ambient_levels,
    nested_sequence,
    qstring,
    qstring_general_position,
    sl2_closed_form,
    sl2_closed_form_t,
    t_to_x_variables,
    to_t_variables,
)
from clusterkr.greenseq import classify_sequence, sink_sequence_An, source_sink_sequence
from clusterkr.laurent import LaurentPoly
from clusterkr.quiver import DynkinType, VertexId, dynkin_quiver, hl_truncation, line_quiver
from clusterkr.seed import Seed

A1 = DynkinType("A", 1)
A2 = DynkinType("A", 2)
A3 = DynkinType("A", 3)


def test_to_t_variables_examples():
    # x_{v,r+k} / x_{v,r} -> t_{v,r+1} ... t_{v,r+k}
    p = LaurentPoly.monomial({"x.v1.5": 1, "x.v1.2": -1})
    assert to_t_variables(p) == LaurentPoly.monomial({"t.v1.3": 1, "t.v1.4": 1, "t.v1.5": 1})
    assert to_t_variables(LaurentPoly.variable("x.v1.1")) == LaurentPoly.variable("t.v1.1")
    assert to_t_variables(LaurentPoly.const(7)) == LaurentPoly.const(7)
    with pytest.raises(UsageError):
        to_t_variables(LaurentPoly.variable("t.v1.1"))
    # inverse direction with the x_{v,0} = 1 convention
    assert t_to_x_variables(LaurentPoly.variable("t.v1.1")) == LaurentPoly.variable("x.v1.1")
    round_trip = t_to_x_variables(to_t_variables(p))
    assert round_trip == p


def test_hl_character_sl2_fundamental():
    char = hl_sweep_character(A1, d=2, k=1, node=1)
    assert char.poly == LaurentPoly.variable("t.v1.3") + LaurentPoly.variable("t.v1.2", -1)
    assert not char.truncated
    assert char.descriptor == KRDescriptor("v1", 1, 3)


def test_hl_depth_validation():
    with pytest.raises(UsageError):
        hl_sweep_character(A1, d=2, k=1, node=1, levels=3)
    with pytest.raises(UsageError):
        hl_sweep_character(A1, d=0, k=1, node=1)


def test_truncation_flags():
    assert hl_sweep_character(A3, d=1, k=1, node=1).truncated  # d < h/2 = 2
    assert not hl_sweep_character(A3, d=2, k=1, node=1).truncated
    assert mgs_character(A3, a=2, levels=3, node=1).truncated
    assert not mgs_character(A3, a=2, levels=4, node=1).truncated
    assert not mgs_character(A1, a=3, levels=4, node=1).truncated  # sl2: always complete


def test_mgs_rejects_empty_module():
    with pytest.raises(UsageError):
        mgs_character(A1, a=0, levels=3, node=1)
    with pytest.raises(UsageError):
        mgs_character(A1, a=3, levels=3, node=1)


def test_sl2_closed_form():
    char = sl2_closed_form(1, 4)
    assert char.poly == LaurentPoly.variable("Y.q5") + LaurentPoly.variable("Y.q4", -1)
    for r in range(1, 7):
        assert len(sl2_closed_form(r, 2).poly) == r + 1


def test_sl2_closed_form_matches_mgs():
    for r in range(1, 7):
        for shift in range(1, 5):
            char = mgs_character(A1, a=r, levels=shift + r, node=1)
            assert char.poly == sl2_closed_form_t(r, shift), (r, shift)


def test_path_independence_small():
    for dtype, d in [(A2, 2), (A3, 2)]:
        for k in (1, 2):
            for node in range(1, dtype.rank + 1):
                hl = hl_sweep_character(dtype, d=d, k=k, node=node)
                mgs = mgs_character(dtype, a=k, levels=d + k, node=node)
                assert hl.poly == mgs.poly


def test_dimension_oracle_fundamentals():
    # exterior powers: dim of the i-th fundamental sl_{n+1} module is C(n+1, i)
    for n in (1, 2, 3):
        dtype = DynkinType("A", n)
        d = (dtype.coxeter_number + 1) // 2
        for i in range(1, n + 1):
            char = mgs_character(dtype, a=1, levels=d + 1, node=i)
            assert char.dimension() == math.comb(n + 1, i)


def test_interval_collection_nested():
    assert IntervalCollection.of((3, 4), (2, 5)).nested()
    assert IntervalCollection.of((2, 5), (2, 5)).nested()
    assert not IntervalCollection.of((2, 5), (4, 8)).nested()
    with pytest.raises(UsageError):
        IntervalCollection.of((5, 3))


def test_nested_sequence_example():
    seq = nested_sequence(IntervalCollection.of((3, 4), (2, 5)), A1)
    assert seq.to_text() == "v1.1,v1.2,v1.1,v1.3,v1.2,v1.1,v1.4"


def test_nested_sequence_g_vectors():
    collection = IntervalCollection.of((3, 4), (2, 5))
    seq = nested_sequence(collection, A1)
    quiver = hl_truncation(A1, nested_ambient_levels(collection))
    assert classify_sequence(quiver, seq).kind in ("green", "maximal_green")
    td = Seed.initial(quiver, tracking=True).apply(seq).tropical_data()
    gset = {frozenset((str(u), e) for u, e in td.g_full[v].items()) for v in td.basis}
    assert frozenset({("v1.4", 1), ("v1.2", -1)}) in gset
    assert frozenset({("v1.5", 1), ("v1.1", -1)}) in gset


def test_nested_single_interval_reduces_to_source_sink():
    # one support [r+1, r+k] gives exactly Sc(Q) x S_{A_{r+k-1}}
    collection = IntervalCollection.of((3, 5))
    seq = nested_sequence(collection, A2)
    reference = source_sink_sequence(
        dynkin_quiver(A2), sink_sequence_An(4), line_quiver(4), validate=False
    )
    assert seq.steps == reference.steps


def test_nested_sequence_rejections():
    with pytest.raises(UsageError):
        nested_sequence(IntervalCollection.of((2, 5), (4, 8)), A1)
    with pytest.raises(UsageError):
        nested_sequence(IntervalCollection.of((1, 3)), A1)


def test_general_position_examples():
    assert general_position(IntervalCollection.of((1, 3)), IntervalCollection.of((10, 12)), 4)
    assert general_position(IntervalCollection.of((3, 4)), IntervalCollection.of((2, 5)), 4)
    assert not general_position(IntervalCollection.of((2, 5)), IntervalCollection.of((4, 8)), 4)


def test_combined_sequence():
    n1 = IntervalCollection.of((2, 3))
    n2 = IntervalCollection.of((8, 9))
    seq = combined_sequence(n1, n2, A2)
    quiver = hl_truncation(A2, 9)
    assert classify_sequence(quiver, seq).kind in ("green", "maximal_green")
    td = Seed.initial(quiver, tracking=True).apply(seq).tropical_data()
    gset = {frozenset((str(u), e) for u, e in td.g_full[v].items()) for v in td.basis}
    for node in (1, 2):
        for lo, hi in [(2, 3), (8, 9)]:
            assert frozenset({(f"v{node}.{hi}", 1), (f"v{node}.{lo-1}", -1)}) in gset
    # empty N' degenerates to the nested sequence
    assert combined_sequence(n1, IntervalCollection.of(), A2).steps == nested_sequence(n1, A2).steps
    with pytest.raises(UsageError):
        combined_sequence(n1, IntervalCollection.of((4, 6)), A2)  # gap 1 <= h/2


def test_c_collection_displays():
    ivs, _ = c_collection(A3, [2, 2, 2], 3)
    assert sorted(ivs.intervals) == [(2, 4), (2, 5), (2, 5)]
    ivs, _ = c_collection(DynkinType("D", 4), [3, 3, 3, 3], 4)
    assert sorted(ivs.intervals) == [(3, 5), (3, 5), (3, 5), (3, 6)]
    ivs, _ = c_collection(DynkinType("E", 6), [6] * 6, 7)
    assert sorted(ivs.intervals) == [(6, 7), (6, 8), (6, 8), (6, 8), (6, 9), (6, 9)]
    ivs, _ = c_collection(DynkinType("E", 7), [9] * 7, 10)
    assert sorted(ivs.intervals) == [(9, 10), (9, 11), (9, 11), (9, 11), (9, 12), (9, 12), (9, 13)]


def test_c_collection_not_nested_for_distinct_lefts():
    ivs, _ = c_collection(A3, [2, 3, 4], 3)
    assert not ivs.nested()


def test_c_collection_validations():
    with pytest.raises(UsageError):
        c_collection(A3, [2, 2, 2], 2)  # m < h/2 + 1
    with pytest.raises(UsageError):
        c_collection(A3, [1, 2, 2], 3)  # l_i < h/2
    with pytest.raises(UsageError):
        c_collection(A3, [2, 2], 3)  # wrong arity
    with pytest.raises(UsageError):
        c_collection(DynkinType("D", 4), [5, 3, 3, 3], 4)  # empty interval [5,5]


def test_c_collection_sequence_realizes_g_vectors():
    dtype, lefts, m = A3, [2, 2, 2], 3
    ivs, seq = c_collection(dtype, lefts, m)
    quiver = hl_truncation(dtype, ivs.max_right())
    report = classify_sequence(quiver, seq)
    assert all(step.color_before == "green" for step in report.steps)
    td = Seed.initial(quiver, tracking=True).apply(seq).tropical_data()
    gset = {frozenset((str(u), e) for u, e in td.g_full[v].items()) for v in td.basis}
    for name, (lo, hi) in c_collection_expected_g(dtype, lefts, m).items():
        assert frozenset({(f"{name}.{hi}", 1), (f"{name}.{lo}", -1)}) in gset


def test_c_collection_e_types_quiver_level():
    # E-type staged sequences validated via the polynomial-free g route
    # (ambient one level above every interval keeps all coordinates mutable)
    from clusterkr.greenseq import g_matrix_from_run

    for fam, rank in [("E", 6), ("E", 7), ("E", 8)]:
        dtype = DynkinType(fam, rank)
        h = dtype.coxeter_number
        m = h // 2 + 1
        lefts = [h // 2] * rank
        intervals, seq = c_collection(dtype, lefts, m)
        quiver = hl_truncation(dtype, intervals.max_right() + 1)
        report = classify_sequence(quiver, seq)
        assert all(s.color_before == "green" for s in report.steps), fam + str(rank)
        g = g_matrix_from_run(quiver, seq)
        gset = {frozenset((str(u), e) for u, e in vec.items()) for vec in g.values()}
        for name, (lo, hi) in c_collection_expected_g(dtype, lefts, m).items():
            assert frozenset({(f"{name}.{hi}", 1), (f"{name}.{lo}", -1)}) in gset


def test_qstrings():
    assert qstring(0, 2) == (-1, 1)
    assert qstring(4, 1) == (4,)
    assert qstring_general_position([(0, 2), (4, 1)])
    assert qstring_general_position([(0, 2), (0, 2)])
    assert not qstring_general_position([(0, 2), (2, 2)])


def test_character_json_shape():
    obj = mgs_character(A1, a=2, levels=4, node=1).to_obj()
    assert obj["module"] == {"node": "v1", "k": 2, "right": 4}
    assert obj["truncated"] is False
    assert "terms" in obj["character"]

"""Instance documents, fitting matrices, and sub-problem derivation."""

import json
import random

import pytest

from helpers import load_fixture, make_two_sender
from wsic.errors import InvalidPartition, ParseError
from wsic.model import (
    SenderPartition,
    TwoSenderInstance,
    drop_common_messages,
    fitting_matrix,
    parse_instance,
    sub_instance,
    tilde_split,
)


class TestParseInstance:
    def test_ex1_document(self):
        inst = load_fixture("ex1")
        assert inst.m == 4
        assert int(inst.q) == 2
        assert inst.digraph.knows(1) == frozenset({2})
        assert inst.digraph.knows(3) == frozenset({2, 4})
        assert inst.digraph.knows(4) == frozenset({2, 3})
        assert inst.partition.p1 == frozenset({1, 2})
        assert inst.partition.p2 == frozenset({4})
        assert inst.partition.p12 == frozenset({3})
        assert inst.eaves.sets == (frozenset({3, 4}),)

    def test_ex3_document(self):
        inst = load_fixture("ex3")
        assert inst.m == 10
        assert inst.partition.p1 == frozenset({1, 2, 3, 4})
        assert inst.partition.p2 == frozenset({7, 8, 9, 10})
        assert inst.partition.p12 == frozenset({5, 6})
        assert inst.eaves.sets == (frozenset({2, 5, 6, 8, 9}),)
        assert inst.digraph.knows(5) == frozenset({1, 2, 3, 4, 7, 8, 9, 10})

    def test_overlapping_partition_rejected(self):
        doc = {
            "q": 2, "m": 2, "side_info": [[], []],
            "p1": [1], "p2": [1], "p12": [2],
            "eavesdroppers": [[]],
        }
        with pytest.raises(ParseError, match="overlap"):
            parse_instance(json.dumps(doc))

    def test_missing_partition_defaults_to_single_sender(self):
        doc = {"q": 2, "m": 3, "side_info": [[2], [3], [1]], "eavesdroppers": [[1]]}
        inst = parse_instance(json.dumps(doc))
        assert inst.partition.p1 == frozenset({1, 2, 3})
        assert inst.partition.p2 == frozenset()
        assert inst.partition.p12 == frozenset()

    def test_partition_must_cover(self):
        doc = {
            "q": 2, "m": 3, "side_info": [[], [], []],
            "p1": [1], "p2": [2], "p12": [],
            "eavesdroppers": [[]],
        }
        with pytest.raises(ParseError, match="cover"):
            parse_instance(json.dumps(doc))

    def test_eavesdropper_covering_everything_rejected(self):
        doc = {
            "q": 2, "m": 2, "side_info": [[2], [1]],
            "p1": [1, 2], "p2": [], "p12": [],
            "eavesdroppers": [[1, 2]],
        }
        with pytest.raises(ParseError, match="every message"):
            parse_instance(json.dumps(doc))

    def test_composite_field_order_rejected(self):
        doc = {"q": 4, "m": 1, "side_info": [[]], "eavesdroppers": [[]]}
        with pytest.raises(ParseError, match="prime"):
            parse_instance(json.dumps(doc))

    def test_unknown_keys_rejected(self):
        doc = {"q": 2, "m": 1, "side_info": [[]], "eavesdroppers": [[]], "extra": 1}
        with pytest.raises(ParseError, match="unknown"):
            parse_instance(json.dumps(doc))

    def test_out_of_range_index_rejected(self):
        doc = {"q": 2, "m": 2, "side_info": [[3], []], "eavesdroppers": [[]]}
        with pytest.raises(ParseError, match="outside"):
            parse_instance(json.dumps(doc))

    def test_self_loop_rejected(self):
        doc = {"q": 2, "m": 2, "side_info": [[1], []], "eavesdroppers": [[]]}
        with pytest.raises(ParseError, match="own message"):
            parse_instance(json.dumps(doc))

    def test_missing_eavesdroppers_rejected(self):
        doc = {"q": 2, "m": 1, "side_info": [[]]}
        with pytest.raises(ParseError, match="eavesdroppers"):
            parse_instance(json.dumps(doc))


class TestFittingMatrix:
    def test_ex1_pattern(self):
        inst = load_fixture("ex1")
        fit = fitting_matrix(inst.digraph)
        assert fit.rows_display() == ["1x00", "x100", "0x1x", "0xx1"]

    def test_single_vertex(self):
        inst = parse_instance(json.dumps(
            {"q": 2, "m": 1, "side_info": [[]], "eavesdroppers": [[]]}
        ))
        assert fitting_matrix(inst.digraph).rows_display() == ["1"]

    def test_complete_pair(self):
        inst = parse_instance(json.dumps(
            {"q": 2, "m": 2, "side_info": [[2], [1]], "eavesdroppers": [[]]}
        ))
        assert fitting_matrix(inst.digraph).rows_display() == ["1x", "x1"]

    def test_entry_counts(self):
        rng = random.Random(3)
        for _ in range(40):
            inst = make_two_sender(rng, (2, 2, 1), cross="random")
            fit = fitting_matrix(inst.digraph)
            ones = sum(1 for e in fit.entries if e == "1")
            xs = sum(1 for e in fit.entries if e == "x")
            assert ones == inst.m
            assert xs == sum(len(inst.digraph.knows(i)) for i in range(1, inst.m + 1))


class TestSubInstance:
    def test_ex3_block_one(self):
        inst = load_fixture("ex3")
        sub = sub_instance(inst, "1")
        assert sub.label_map == (1, 2, 3, 4)
        assert [sorted(sub.digraph.knows(i)) for i in range(1, 5)] == [
            [2, 3], [3, 4], [4], [1]
        ]
        assert sub.eaves.sets == (frozenset({2}),)

    def test_ex1_common_block_single_vertex(self):
        inst = load_fixture("ex1")
        sub = sub_instance(inst, "12")
        assert sub.label_map == (3,)
        assert sub.m == 1
        # The eavesdropper holds the whole (local) message set here.
        assert sub.eaves.sets == (frozenset({1}),)

    def test_empty_block_is_first_class(self):
        doc = {
            "q": 2, "m": 2, "side_info": [[2], [1]],
            "p1": [1, 2], "p2": [], "p12": [],
            "eavesdroppers": [[1]],
        }
        sub = sub_instance(parse_instance(json.dumps(doc)), "2")
        assert sub.is_empty
        assert sub.label_map == ()

    def test_label_maps_partition_messages(self):
        rng = random.Random(9)
        for _ in range(30):
            inst = make_two_sender(rng, (rng.randrange(1, 4), rng.randrange(0, 3), rng.randrange(0, 3)))
            maps = [sub_instance(inst, t).label_map for t in ("1", "2", "12")]
            seen = [g for lm in maps for g in lm]
            assert sorted(seen) == list(range(1, inst.m + 1))

    def test_local_side_info_is_global_intersection(self):
        rng = random.Random(21)
        for _ in range(30):
            inst = make_two_sender(rng, (2, 2, 2), cross="random")
            for t in ("1", "2", "12"):
                sub = sub_instance(inst, t)
                block = frozenset(sub.label_map)
                for local_i in range(1, sub.m + 1):
                    g = sub.to_global(local_i)
                    expected = inst.digraph.knows(g) & block
                    got = {sub.to_global(j) for j in sub.digraph.knows(local_i)}
                    assert got == expected


class TestTildeSplit:
    def test_ex2_split(self):
        inst = load_fixture("ex2")
        left, right = tilde_split(inst, {5})
        assert left.label_map == (1, 2, 3, 4, 5)
        assert left.eaves.sets == (frozenset({2, 5}),)
        assert right.label_map == (6, 7, 8, 9)
        # Global eavesdroppers {6, 8} land on local positions 1 and 3.
        assert right.eaves.sets == (frozenset({1, 3}),)

    def test_degenerate_splits(self):
        inst = load_fixture("ex1")
        left, right = tilde_split(inst, set())
        assert left.label_map == (1, 2)
        assert right.label_map == (3, 4)
        left, right = tilde_split(inst, {3})
        assert left.label_map == (1, 2, 3)
        assert right.label_map == (4,)

    def test_complement_and_sender_swap_exchange_sides(self):
        rng = random.Random(31)
        for _ in range(20):
            inst = make_two_sender(rng, (2, 2, 2), cross="random")
            chosen = frozenset(v for v in inst.partition.p12 if rng.random() < 0.5)
            rest = inst.partition.p12 - chosen
            swapped = TwoSenderInstance(
                q=inst.q,
                digraph=inst.digraph,
                partition=SenderPartition(
                    inst.partition.p2, inst.partition.p1, inst.partition.p12
                ),
                eaves=inst.eaves,
            )
            a1, a2 = tilde_split(inst, chosen)
            b1, b2 = tilde_split(swapped, rest)
            assert (a1, a2) == (b2, b1)

    def test_outside_common_block_rejected(self):
        inst = load_fixture("ex1")
        with pytest.raises(InvalidPartition):
            tilde_split(inst, {1})


class TestDropCommonMessages:
    def test_removes_block_and_relabels(self):
        inst = load_fixture("ex1")
        reduced, kept = drop_common_messages(inst)
        assert kept == (1, 2, 4)
        assert reduced.m == 3
        assert reduced.partition.p12 == frozenset()
        # Receiver 4 (now local 3) loses message 3 from its side information.
        assert reduced.digraph.knows(3) == frozenset({2})
        assert reduced.eaves.sets == (frozenset({3}),)  # global 4 -> local 3

    def test_everything_common_rejected(self):
        doc = {
            "q": 2, "m": 2, "side_info": [[2], [1]],
            "p1": [], "p2": [], "p12": [1, 2],
            "eavesdroppers": [[1]],
        }
        with pytest.raises(ValueError, match="no exclusive messages"):
            drop_common_messages(parse_instance(json.dumps(doc)))


class TestDirectValidation:
    def test_partition_overlap_rejected_at_type_level(self):
        with pytest.raises(ValueError, match="disjoint"):
            SenderPartition(frozenset({1}), frozenset({1}), frozenset())

    def test_unknown_block_name(self):
        part = SenderPartition(frozenset({1}), frozenset(), frozenset())
        with pytest.raises(ValueError, match="unknown block"):
            part.block("3")

    def test_empty_eavesdropper_family_rejected(self):
        from wsic.model import EavesdropperSpec

        with pytest.raises(ValueError, match="at least one"):
            EavesdropperSpec(())

    def test_fitting_matrix_entry_validation(self):
        from wsic.model import FittingMatrix

        with pytest.raises(ValueError, match="'0', '1' or 'x'"):
            FittingMatrix(1, ("y",))

    def test_side_info_length_mismatch(self):
        from wsic.model import SideInfoDigraph

        with pytest.raises(ValueError, match="side-information sets"):
            SideInfoDigraph(2, (frozenset(),))

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flipforge import convex
from flipforge.convex import ConvexTriangulation, FlipSequence, Labelling
from flipforge.errors import ParseError, SizeMismatch, UnknownDiagonal


def random_state(m, rng):
    """Uniform-ish random triangulation via repeated random flips from the fan."""
    t = ConvexTriangulation.fan(m)
    l = Labelling.identity_for(t)
    mac = convex._Machine(t, l)
    for _ in range(4 * m):
        d = rng.choice(sorted(mac.labels))
        mac.flip(d)
    return mac.state()


class TestConvexTriangulation:
    def test_fan_shape(self):
        t = ConvexTriangulation.fan(6)
        assert t.diagonals == frozenset({(0, 2), (0, 3), (0, 4)})
        assert t.is_fan()
        assert t.n == 3

    def test_degenerate_triangle(self):
        t = ConvexTriangulation(3, frozenset())
        assert t.n == 0

    def test_rejects_crossing(self):
        with pytest.raises(ValueError):
            ConvexTriangulation(6, frozenset({(0, 2), (1, 3), (0, 4)}))

    def test_rejects_wrong_count(self):
        with pytest.raises(ValueError):
            ConvexTriangulation(6, frozenset({(0, 2), (0, 3)}))

    def test_rejects_boundary_pair(self):
        with pytest.raises(ValueError):
            ConvexTriangulation(4, frozenset({(0, 3)}))


class TestFlip:
    def test_square(self):
        t = ConvexTriangulation(4, frozenset({(0, 2)}))
        l = Labelling({(0, 2): 1})
        t2, l2, new = convex.flip(t, l, (0, 2))
        assert new == (1, 3)
        assert t2.diagonals == frozenset({(1, 3)})
        assert l2.label_of((1, 3)) == 1

    def test_hexagon_example(self):
        t = ConvexTriangulation(6, frozenset({(0, 2), (2, 4), (0, 4)}))
        l = Labelling({(0, 2): 1, (2, 4): 2, (0, 4): 3})
        t2, l2, new = convex.flip(t, l, (0, 2))
        assert new == (1, 4)
        assert l2.label_of((1, 4)) == 1
        assert l2.label_of((2, 4)) == 2

    def test_unknown_diagonal(self):
        t = ConvexTriangulation(5, frozenset({(0, 2), (0, 3)}))
        l = Labelling.identity_for(t)
        with pytest.raises(UnknownDiagonal):
            convex.flip(t, l, (1, 3))

    def test_involution_small(self):
        # flip twice restores the labelled state, for every diagonal, m <= 8
        from flipforge import oracle
        for m in range(4, 9):
            for diag_t in oracle.enumerate_triangulations(m):
                t = ConvexTriangulation(m, frozenset(diag_t))
                l = Labelling.identity_for(t)
                for d in diag_t:
                    t2, l2, new = convex.flip(t, l, d)
                    t3, l3, back = convex.flip(t2, l2, new)
                    assert back == d
                    assert t3.diagonals == t.diagonals
                    assert l3 == l

    @given(st.integers(8, 40), st.randoms(use_true_random=False))
    @settings(max_examples=30, deadline=None)
    def test_involution_random(self, m, rng):
        t, l = random_state(m, rng)
        d = rng.choice(sorted(t.diagonals))
        t2, l2, new = convex.flip(t, l, d)
        t3, l3, _ = convex.flip(t2, l2, new)
        assert t3.diagonals == t.diagonals and l3 == l


class TestNeighbors:
    def test_examples(self):
        fan5 = ConvexTriangulation.fan(5)
        assert convex.neighbors_of(fan5, (0, 2)) == (0, 1, 2, 3)
        assert convex.neighbors_of(fan5, (0, 3)) == (0, 2, 3, 4)
        t = ConvexTriangulation(6, frozenset({(0, 2), (2, 4), (0, 4)}))
        assert convex.neighbors_of(t, (0, 4)) == (0, 2, 4, 5)


class TestVerify:
    def test_empty_identity(self):
        t = ConvexTriangulation(4, frozenset({(0, 2)}))
        l = Labelling({(0, 2): 1})
        assert convex.verify_sequence((t, l), FlipSequence("labelled", ()), (t, l))

    def test_single_step(self):
        t = ConvexTriangulation(4, frozenset({(0, 2)}))
        l = Labelling({(0, 2): 1})
        t2 = ConvexTriangulation(4, frozenset({(1, 3)}))
        l2 = Labelling({(1, 3): 1})
        assert convex.verify_sequence((t, l), FlipSequence("labelled", (1,)), (t2, l2))

    def test_unknown_label_fails(self):
        t = ConvexTriangulation(4, frozenset({(0, 2)}))
        l = Labelling({(0, 2): 1})
        assert not convex.verify_sequence((t, l), FlipSequence("labelled", (2,)), (t, l))

    def test_size_mismatch(self):
        a = convex.fan_state(5, [1, 2])
        b = convex.fan_state(6, [1, 2, 3])
        with pytest.raises(SizeMismatch):
            convex.verify_sequence(a, FlipSequence("labelled", ()), b)

    def test_wrong_target_fails(self):
        a = convex.fan_state(5, [1, 2])
        b = convex.fan_state(5, [2, 1])
        assert not convex.verify_sequence(a, FlipSequence("labelled", ()), b)


class TestCanonicalize:
    def test_fan_input_empty(self):
        t, l = convex.fan_state(7, [3, 1, 4, 2])
        seq, l2 = convex.canonicalize_unlabelled(t, l)
        assert seq.cost == 0
        assert l2 == l

    def test_fan_at_one(self):
        t = ConvexTriangulation(6, frozenset({(1, 3), (1, 4), (1, 5)}))
        l = Labelling.identity_for(t)
        seq, l2 = convex.canonicalize_unlabelled(t, l)
        assert seq.cost == 3
        final, err = convex.replay((t, l), seq)
        assert err is None
        assert final[0].diagonals == frozenset({(0, 2), (0, 3), (0, 4)})
        assert final[1] == l2

    def test_random_m50(self):
        rng = random.Random(7)
        for _ in range(100):
            t, l = random_state(50, rng)
            seq, l2 = convex.canonicalize_unlabelled(t, l)
            assert seq.cost <= 47
            final, err = convex.replay((t, l), seq)
            assert err is None
            assert final[0].is_fan()
            assert final[1] == l2

    def test_apex_degree_strictly_increases(self):
        rng = random.Random(3)
        t, l = random_state(16, rng)
        seq, _ = convex.canonicalize_unlabelled(t, l)
        mac = convex._Machine(t, l)
        deg = len(mac.adj[0])
        for step in seq.steps:
            mac.flip_label(step)
            assert len(mac.adj[0]) == deg + 1
            deg += 1


class TestTransformBetween:
    def test_identity_short_circuit(self):
        a = convex.fan_state(8, [1, 5, 2, 3, 4])
        assert convex.transform_between(a, a).cost == 0

    def test_pentagon_pair_is_five_flips(self):
        a = convex.fan_state(5, [2, 1])
        b = convex.fan_state(5, [1, 2])
        seq = convex.transform_between(a, b)
        assert seq.cost == 5
        assert convex.verify_sequence(a, seq, b)

    def test_random_pairs_verify(self):
        rng = random.Random(11)
        for m in (4, 5, 6, 9, 14, 33):
            for _ in range(8):
                a = random_state(m, rng)
                b = random_state(m, rng)
                seq = convex.transform_between(a, b)
                assert convex.verify_sequence(a, seq, b)
                n = m - 3
                if n >= 2:
                    import math
                    bound = 2 * n + 5 * n * (math.ceil(math.log2(n)) + 1)
                    assert seq.cost <= bound

    def test_label_conservation(self):
        rng = random.Random(5)
        a = random_state(12, rng)
        b = random_state(12, rng)
        seq = convex.transform_between(a, b)
        mac = convex._Machine(*a)
        labels = set(range(1, 10))
        for step in seq.steps:
            mac.flip_label(step)
            assert set(mac.labels.values()) == labels


class TestSequenceJson:
    def test_roundtrip_labelled(self):
        seq = FlipSequence("labelled", (3, 1, 2))
        assert FlipSequence.from_json(seq.to_json()) == seq

    def test_roundtrip_unlabelled(self):
        seq = FlipSequence("unlabelled", ((0, 2), (1, 3)))
        assert FlipSequence.from_json(seq.to_json()) == seq

    def test_bad_doc(self):
        with pytest.raises(ParseError):
            FlipSequence.from_json('{"mode": "nope"}')


class TestStateJson:
    def test_roundtrip(self):
        t = ConvexTriangulation(6, frozenset({(0, 2), (2, 4), (0, 4)}))
        l = Labelling({(0, 2): 3, (2, 4): 1, (0, 4): 2})
        t2, l2 = convex.state_from_json(convex.state_to_json(t, l))
        assert t2.diagonals == t.diagonals and l2 == l

    def test_rejects_bad_labels(self):
        with pytest.raises(ParseError):
            convex.state_from_json('{"m": 5, "diagonals": [[0,2],[0,3]], "labels": [1,1]}')


class TestInvert:
    def test_labelled_roundtrip(self):
        rng = random.Random(2)
        a = random_state(10, rng)
        b = random_state(10, rng)
        seq = convex.transform_between(a, b)
        inv = convex.invert_sequence(a, seq)
        assert convex.verify_sequence(b, inv, a)

    def test_unlabelled_roundtrip(self):
        a = convex.fan_state(7, [1, 2, 3, 4])
        seq = FlipSequence("unlabelled", ((0, 2), (1, 3)))
        inv = convex.invert_sequence(a, seq)
        final, err = convex.replay(a, seq)
        assert err is None
        assert convex.verify_sequence(final, inv, a)

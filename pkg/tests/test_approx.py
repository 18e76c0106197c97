import math
import random

import pytest

from flipforge import approx, convex, oracle
from flipforge.convex import ConvexTriangulation, Labelling, fan_state
from flipforge.errors import SizeMismatch

from test_convex import random_state


class TestFindFixed:
    def test_identical_inputs(self):
        a = fan_state(8, [3, 1, 5, 2, 4])
        report = approx.find_fixed(a, a)
        assert report.fixed == a[0].diagonals
        assert report.lower_bound == 0
        assert report.pieces == ()

    def test_disjoint_diagonals(self):
        a = fan_state(6, [1, 2, 3])
        tb = ConvexTriangulation(6, frozenset({(1, 3), (3, 5), (1, 5)}))
        b = (tb, Labelling({(1, 3): 1, (3, 5): 2, (1, 5): 3}))
        report = approx.find_fixed(a, b)
        assert report.fixed == frozenset()
        assert len(report.pieces) == 1
        assert report.lower_bound == 3

    def test_spec_hexagon_example(self):
        ta = ConvexTriangulation(6, frozenset({(0, 2), (0, 3), (0, 4)}))
        la = Labelling({(0, 2): 1, (0, 3): 2, (0, 4): 3})
        tb = ConvexTriangulation(6, frozenset({(0, 2), (2, 4), (0, 4)}))
        lb = Labelling({(0, 2): 1, (2, 4): 2, (0, 4): 3})
        report = approx.find_fixed((ta, la), (tb, lb))
        assert report.fixed == frozenset({(0, 2), (0, 4)})
        assert report.lower_bound == 1

    def test_same_diagonal_wrong_label_not_fixed(self):
        ta = ConvexTriangulation(6, frozenset({(0, 2), (0, 3), (0, 4)}))
        la = Labelling({(0, 2): 1, (0, 3): 2, (0, 4): 3})
        lb = Labelling({(0, 2): 2, (0, 3): 1, (0, 4): 3})
        report = approx.find_fixed((ta, la), (ta, lb))
        assert (0, 2) not in report.fixed
        assert (0, 3) not in report.fixed
        assert (0, 4) in report.fixed

    def test_inside_label_set_must_match(self):
        # same diagonal, same label, but different label sets inside
        ta = ConvexTriangulation(7, frozenset({(0, 2), (2, 4), (0, 4), (4, 6)}))
        la = Labelling({(0, 2): 1, (2, 4): 2, (0, 4): 3, (4, 6): 4})
        lb = Labelling({(0, 2): 2, (2, 4): 1, (0, 4): 3, (4, 6): 4})
        report = approx.find_fixed((ta, la), (ta, lb))
        # (0,4) spans {0..4} whose inside labels {1,2} match as sets
        assert (0, 4) in report.fixed
        assert (4, 6) in report.fixed
        report2 = approx.find_fixed(
            (ta, la),
            (ta, Labelling({(0, 2): 1, (2, 4): 3, (0, 4): 2, (4, 6): 4})))
        assert (0, 4) not in report2.fixed

    def test_symmetry(self):
        rng = random.Random(31)
        for _ in range(20):
            a = random_state(10, rng)
            b = random_state(10, rng)
            ra = approx.find_fixed(a, b)
            rb = approx.find_fixed(b, a)
            assert ra.fixed == rb.fixed
            assert ra.lower_bound == rb.lower_bound

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            approx.find_fixed(fan_state(5, [1, 2]), fan_state(6, [1, 2, 3]))

    def test_report_json(self):
        a = fan_state(6, [1, 2, 3])
        tb = ConvexTriangulation(6, frozenset({(1, 3), (3, 5), (1, 5)}))
        b = (tb, Labelling({(1, 3): 1, (3, 5): 2, (1, 5): 3}))
        import json
        doc = json.loads(approx.find_fixed(a, b).to_json())
        assert doc["lower_bound"] == 3
        assert doc["fixed"] == []
        assert doc["pieces"][0]["n_i"] == 3


class TestApproxTransform:
    def test_identity(self):
        a = fan_state(7, [4, 2, 1, 3])
        seq, lower = approx.approx_transform(a, a)
        assert seq.cost == 0 and lower == 0

    def test_pentagon(self):
        a = fan_state(5, [2, 1])
        b = fan_state(5, [1, 2])
        seq, lower = approx.approx_transform(a, b)
        assert lower == 2
        assert seq.cost == 5
        assert convex.verify_sequence(a, seq, b)

    def test_never_touches_fixed_labels(self):
        rng = random.Random(7)
        for _ in range(25):
            a = random_state(12, rng)
            b = random_state(12, rng)
            report = approx.find_fixed(a, b)
            fixed_labels = {a[1].label_of(d) for d in report.fixed}
            seq, _ = approx.approx_transform(a, b)
            assert convex.verify_sequence(a, seq, b)
            assert not (set(seq.steps) & fixed_labels)

    def test_lower_bound_sound_small(self):
        states = [oracle.key_to_state(6, k) for k in oracle.all_labelled_states(6)]
        rng = random.Random(3)
        for _ in range(60):
            a, b = rng.choice(states), rng.choice(states)
            seq, lower = approx.approx_transform(a, b)
            exact = oracle.exact_distance(a, b)
            assert lower <= exact <= seq.cost

    def test_ratio_bound_m6(self):
        n = 3
        factor = 5 * math.ceil(math.log2(n)) + 7
        states = [oracle.key_to_state(6, k) for k in oracle.all_labelled_states(6)]
        rng = random.Random(5)
        for _ in range(40):
            a, b = rng.choice(states), rng.choice(states)
            seq, lower = approx.approx_transform(a, b)
            assert seq.cost <= factor * max(lower, 1)

    def test_piece_decomposition_medium(self):
        rng = random.Random(41)
        for _ in range(10):
            a = random_state(40, rng)
            b = random_state(40, rng)
            seq, lower = approx.approx_transform(a, b)
            assert convex.verify_sequence(a, seq, b)
            report = approx.find_fixed(a, b)
            assert lower == report.lower_bound
            total = sum(p.n_i for p in report.pieces)
            assert total + len(report.fixed) == 37

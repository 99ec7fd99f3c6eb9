import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freechoquet.core import (
    ConeFunction,
    FreeVector,
    LipFunction,
    Measure,
    NegativeMass,
    NonzeroDiagonal,
    NotSymmetric,
    NegativeOrZeroOffDiagonal,
    Pair,
    TooFewPoints,
    TriangleViolation,
    UnknownBasePoint,
    as_rational,
    de_leeuw,
    gamma_modulus,
    lip_norm,
    molecule,
    push_forward,
    support,
    validate_metric,
)

from helpers import random_lip, random_measure, random_space

HALF = Fraction(1, 2)
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_as_rational_parses_strings_and_refuses_floats():
    assert as_rational("3/6") == Fraction(1, 2)
    assert as_rational("-4") == -4
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(ZeroDivisionError):
        as_rational("1/0")


class TestValidateMetric:
    def test_l3_is_valid(self, L3):
        assert L3.points == ("0", "h", "1")
        assert L3.d(0, 2) == 1 and L3.d(1, 2) == HALF

    def test_triangle_violation(self):
        with pytest.raises(TriangleViolation) as info:
            validate_metric(["x", "u", "y"], [[0, 1, 3], [1, 0, 1], [3, 1, 0]], "x")
        assert set(info.value.triple) == {"x", "u", "y"}

    def test_two_points_rejected(self):
        with pytest.raises(TooFewPoints):
            validate_metric(["0", "1"], [[0, 1], [1, 0]], "0")

    @pytest.mark.parametrize(
        "table, error",
        [
            ([[0, 1, 1], [2, 0, 1], [1, 1, 0]], NotSymmetric),
            ([[0, 0, 1], [0, 0, 1], [1, 1, 0]], NegativeOrZeroOffDiagonal),
            ([[1, 1, 1], [1, 0, 1], [1, 1, 0]], NonzeroDiagonal),
        ],
    )
    def test_structural_errors(self, table, error):
        with pytest.raises(error):
            validate_metric(["a", "b", "c"], table, "a")

    def test_unknown_base(self):
        with pytest.raises(UnknownBasePoint):
            validate_metric(["a", "b", "c"], [[0, 1, 1], [1, 0, 1], [1, 1, 0]], "z")

    @given(st.lists(st.integers(1, 6), min_size=6, max_size=6))
    def test_accepts_iff_brute_force_triangle_check(self, ds):
        n = 4
        table = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), v in zip(itertools.combinations(range(n), 2), ds):
            table[i][j] = table[j][i] = Fraction(v)
        ok = all(table[x][y] <= table[x][u] + table[u][y] for x in range(n) for u in range(n) for y in range(n))
        try:
            validate_metric(list("wxyz"), table, "w")
            accepted = True
        except TriangleViolation:
            accepted = False
        assert accepted == ok


def test_lip_norm_fixtures(L3, W4):
    assert lip_norm(L3, LipFunction((0, 0, 0))) == 0
    witness = W4.function({"a": -HALF, "b": 0, "c": -1})
    assert lip_norm(W4, witness) == 1


def test_lip_norm_matches_pair_enumeration(L3):
    rng = random.Random(7)
    for _ in range(20):
        f = random_lip(rng, L3)
        brute = max(
            abs(f[x] - f[y]) / L3.d(x, y) for x in range(3) for y in range(3) if x != y
        )
        assert lip_norm(L3, f) == brute


class TestMolecule:
    def test_base_term_dropped(self, L3):
        assert molecule(L3, L3.pair("1", "0")).coeffs == {2: 1}

    def test_short_pair(self, L3):
        assert molecule(L3, L3.pair("1", "h")).coeffs == {2: 2, 1: -2}

    def test_pairing_is_difference_quotient(self):
        rng = random.Random(11)
        space = random_space(rng, 5)
        for _ in range(20):
            f = random_lip(rng, space)
            for p in space.pairs:
                assert molecule(space, p).pair(f) == (f[p[0]] - f[p[1]]) / space.d(*p)


class TestDeLeeuw:
    def test_zero(self, L3):
        g = de_leeuw(L3, LipFunction((0, 0, 0)))
        assert set(g.values.values()) == {0}

    def test_w4_value(self, W4):
        f = W4.function({"a": -HALF, "c": -1})
        assert de_leeuw(W4, f)[W4.pair("b", "a")] == 1

    def test_isometry_and_linearity(self):
        rng = random.Random(3)
        for _ in range(30):
            space = random_space(rng, rng.randint(3, 6))
            f, g = random_lip(rng, space), random_lip(rng, space)
            assert de_leeuw(space, f).sup_norm() == lip_norm(space, f)
            assert de_leeuw(space, f + g) == de_leeuw(space, f) + de_leeuw(space, g)


class TestPushForward:
    def test_dirac(self, L3):
        assert push_forward(L3, Measure.dirac(L3.pair("1", "0"))) == molecule(L3, L3.pair("1", "0"))

    def test_w4_two_representations(self, W4):
        mu = W4.measure({("0", "a"): 1, ("b", "c"): 1})
        lam = W4.measure({("b", "a"): HALF, ("0", "c"): 1})
        assert push_forward(W4, mu) == push_forward(W4, lam)
        f = random_lip(random.Random(0), W4)
        a, b, c = (W4.index[k] for k in "abc")
        assert push_forward(W4, mu).pair(f) == f[b] - f[a] - f[c]

    def test_d4_two_representations(self, D4):
        nu1 = D4.measure({("0", "2"): 1, ("1", "3"): 1})
        nu2 = D4.measure({("0", "3"): 1, ("1", "2"): 1})
        assert push_forward(D4, nu1) == push_forward(D4, nu2)

    def test_adjoint_identity_and_linearity(self):
        rng = random.Random(5)
        for _ in range(30):
            space = random_space(rng, rng.randint(3, 6))
            mu, nu = random_measure(rng, space), random_measure(rng, space)
            f = random_lip(rng, space)
            assert push_forward(space, mu).pair(f) == de_leeuw(space, f).integrate(mu)
            assert push_forward(space, mu + nu) == push_forward(space, mu) + push_forward(space, nu)
            assert push_forward(space, mu.scale(3)) == push_forward(space, mu).scale(3)


def test_support(L3, W4):
    assert support(FreeVector()) == frozenset()
    assert support(molecule(W4, W4.pair("a", "b"))) == {1, 2}
    assert support(molecule(W4, W4.pair("a", "0"))) == {1}


class TestGamma:
    def test_fixtures(self, L3, W4, D4):
        assert gamma_modulus(D4) == 2
        assert gamma_modulus(L3) == 1

    def test_w4_by_enumeration(self, W4):
        ratios = [
            (W4.d(x, u) + W4.d(u, y)) / W4.d(x, y)
            for x in range(4) for u in range(4) for y in range(4) if len({x, u, y}) == 3
        ]
        assert min(ratios) == Fraction(3, 2) == gamma_modulus(W4)

    def test_at_least_one_with_equality_iff_alignment(self):
        rng = random.Random(9)
        for _ in range(40):
            space = random_space(rng, rng.randint(3, 6))
            aligned = any(space.d(x, y) == space.d(x, u) + space.d(u, y) for x, u, y in space.triples())
            gamma = gamma_modulus(space)
            assert gamma >= 1
            assert (gamma == 1) == aligned


class TestMeasure:
    def test_zero_entries_dropped(self):
        mu = Measure.from_items([((0, 1), Fraction(1)), ((0, 1), Fraction(-1)), ((1, 0), Fraction(2))])
        assert mu.mass == {Pair(1, 0): 2}

    def test_negative_rejected(self):
        with pytest.raises(NegativeMass):
            Measure.from_items([((0, 1), Fraction(-1))])

    @given(st.lists(st.tuples(st.sampled_from([(0, 1), (1, 2), (2, 0)]), st.fractions(0, 5)), max_size=6))
    def test_total_is_sum(self, items):
        mu = Measure.from_items(items)
        assert mu.total == sum((m for _, m in items), Fraction(0))
        assert all(m > 0 for m in mu.mass.values())


@settings(max_examples=50)
@given(st.lists(rationals, min_size=2, max_size=2), st.lists(rationals, min_size=2, max_size=2))
def test_free_vector_pairing_is_bilinear(a, b):
    space = validate_metric(["0", "x", "y"], [[0, 1, 2], [1, 0, 2], [2, 2, 0]], "0")
    m = space.vector({"x": a[0], "y": a[1]})
    f = LipFunction((Fraction(0), b[0], b[1]))
    assert m.pair(f) == a[0] * b[0] + a[1] * b[1]
    assert (m + m).pair(f) == 2 * m.pair(f)


def test_cone_function_reflection_is_involution(L3):
    g = ConeFunction.from_vector(L3, [1, 2, 3, 4, 5, 6])
    assert g.reflect().reflect() == g
    assert g.reflect()[Pair(0, 1)] == g[Pair(1, 0)]

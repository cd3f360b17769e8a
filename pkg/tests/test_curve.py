import pytest

from saitobasis.curve import (
    DegreeTable,
    Semigroup,
    gamma_repr,
    lift_parametrization,
    min_dio_solutions,
    semigroup_of,
    validate_branch,
    valuation,
    verify_incidence,
)
from saitobasis.errors import LiftFailed, NotNormalized, NotPrimitive
from saitobasis.series import parse_biseries, parse_tseries


def branch(x, y, L=60):
    return validate_branch(parse_tseries(x, L), parse_tseries(y, L))


class TestSemigroup:
    def test_two_generators(self):
        s = Semigroup.from_gens((3, 10))
        assert s.conductor == 18
        assert s.gaps == (1, 2, 4, 5, 7, 8, 11, 14, 17)
        assert 20 in s and 17 not in s

    def test_redundant_generators_dropped(self):
        assert Semigroup.from_gens((4, 6, 8, 13)).gens == (4, 6, 13)

    def test_smooth(self):
        s = Semigroup.from_gens((1,))
        assert s.conductor == 0 and s.gaps == ()

    def test_common_factor_rejected(self):
        with pytest.raises(ValueError):
            Semigroup.from_gens((4, 6))

    def test_gamma_repr(self):
        s = Semigroup.from_gens((3, 10))
        alpha = gamma_repr(23, s)
        assert 3 * alpha[0] + 10 * alpha[1] == 23
        assert gamma_repr(17, s) is None

    def test_degree_table_prefers_high_order(self):
        s = Semigroup.from_gens((4, 6, 13))
        t = DegreeTable(s, (1, 1, 2))
        alpha = t.repr(26)
        assert sum(a * g for a, g in zip(alpha, s.gens)) == 26
        assert t.maxdeg(26) == sum(a * d for a, d in zip(alpha, (1, 1, 2)))
        assert t.maxdeg(26) == 6
        assert t.repr(11) is None


class TestDiophantine:
    def test_minimal_solutions_dx_dy(self):
        s = Semigroup.from_gens((3, 10))
        sols = min_dio_solutions(3, 10, s)
        assert [(d.alpha, d.beta, d.value) for d in sols] == [((0, 1), (1, 0), 13), ((9, 0), (0, 2), 30)]

    def test_equal_values(self):
        s = Semigroup.from_gens((3, 10))
        sols = min_dio_solutions(10, 10, s)
        assert [(d.alpha, d.beta) for d in sols] == [((0, 0), (0, 0))]

    def test_solutions_are_minimal(self):
        s = Semigroup.from_gens((4, 6, 13))
        sols = min_dio_solutions(4, 11, s)
        for a in sols:
            assert sum(x * g for x, g in zip(a.alpha, s.gens)) + 4 == sum(x * g for x, g in zip(a.beta, s.gens)) + 11
            assert not any(b is not a and a.dominates(b) for b in sols)


class TestBranch:
    def test_validation(self):
        with pytest.raises(NotNormalized):
            branch("t^3", "t^2")
        with pytest.raises(NotNormalized):
            branch("t^2", "t^4")
        with pytest.raises(NotPrimitive):
            branch("t^4", "t^6")
        with pytest.raises(NotNormalized):
            branch("1 + t", "t^2")

    def test_valuation_and_incidence(self):
        b = branch("t^2", "t^3")
        assert valuation(parse_biseries("x*y", 10), b) == 5
        assert verify_incidence(parse_biseries("y^2 - x^3", 20), b)
        assert not verify_incidence(parse_biseries("y^2 - x^5", 20), b)

    def test_semigroup_of_cusp(self):
        s, basis = semigroup_of(branch("t^3", "t^10"))
        assert s.gens == (3, 10) and basis.values == [3, 10]

    def test_semigroup_of_genus_two(self):
        s, basis = semigroup_of(branch("t^4", "t^6 + t^7", 80))
        assert s.gens == (4, 6, 13)
        assert s.conductor == 16
        b = branch("t^4", "t^6 + t^7", 80)
        assert [valuation(r, b) for r in basis.reps] == [4, 6, 13]

    def test_semigroup_of_smooth(self):
        s, _ = semigroup_of(branch("t", "t^2"))
        assert s.gens == (1,)


class TestLift:
    def test_lift_family_seed(self):
        f = parse_biseries("y^3 - x^10 + x^8*y", 60)
        xs = parse_tseries("t^3", 60)
        ys = lift_parametrization(f, xs, parse_tseries("t^10 - 1/3*t^14", 60), 60)
        b = validate_branch(xs, ys)
        assert verify_incidence(f, b)
        assert ys.coeffs[10] == 1 and ys.coeffs[14] == parse_tseries("-1/3", 1).coeffs[0]

    def test_lift_rejects_far_seed(self):
        f = parse_biseries("y^3 - x^10 + x^8*y", 60)
        with pytest.raises(LiftFailed):
            lift_parametrization(f, parse_tseries("t^3", 60), parse_tseries("2*t^10", 60), 60)

    def test_lift_exact_branch_is_fixed(self):
        f = parse_biseries("y^2 - x^3", 30)
        ys = parse_tseries("t^3", 40)
        assert lift_parametrization(f, parse_tseries("t^2", 40), ys, 40) == ys

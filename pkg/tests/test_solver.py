"""
Tests for the unit solver
Box bounds, enumeration, power assignments, central translation and S5
"""

import itertools
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path

import pytest
from sympy import divisors

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

import zc_help.solver.driver as driver
import zc_help.solver.search as box_search
from zc_help.constraints import (
    ConstraintOptions,
    ConstraintSystem,
    Equality,
    LinearForm,
    MuForm,
    NonvanishingCondition,
)
from zc_help.cyclotomic import root_of_unity, trace_in_field
from zc_help.errors import DependencyError, InvalidArgumentError, UnboundedVariableError
from zc_help.solver import (
    BoxSearch,
    OrderVerdict,
    QuotientSolutions,
    ZC1Status,
    central_translate,
    enumerate_integer_solutions,
    enumerate_power_assignments,
    order_spectrum,
    propagate,
    solve_box,
    solve_order,
    trivial_solutions,
    verify_zc1,
)
from zc_help.solver.search import Row
from zc_help.units import PAVector, check_coherence


def linear(**coefficients) -> LinearForm:
    return LinearForm(Fraction(0), tuple((c, Fraction(a)) for c, a in coefficients.items()))


def toy_system(variables, equalities=(), mu_forms=(), nonvanishing=()):
    return ConstraintSystem(
        group_name="toy",
        n=2,
        class_ids=tuple(variables),
        variables=tuple(variables),
        equalities=tuple(equalities),
        mu_forms=tuple(mu_forms),
        nonvanishing=tuple(nonvanishing),
    )


def verdict(n, units):
    return OrderVerdict(n, tuple(units), ZC1Status.VERIFIED_TRIVIAL)


def solve_through(g, n, options, quotients=None):
    """Solve every divisor of n in order under the same options."""
    solved = {}
    for d in divisors(n):
        solved[int(d)] = solve_order(g, int(d), solved, options, quotients)
    return solved[n]


def exhaustive_units(g, p, bound):
    """
    Every vector in [-bound, bound]^classes with augmentation one whose
    eigenvalue multiplicities for a unit of prime order p are non-negative
    integers, for all ordinary characters.
    """
    conditions = []
    for chi in g.characters:
        for j in range(p):
            # p·μ(ζ_p^j) = Tr(χ(u)·ζ_p^-j) + χ(1), Tr over Q(ζ_p)
            xi = root_of_unity(p, -j)
            coefficients = [trace_in_field(g.value(chi, c) * xi, p) for c in g.class_ids]
            assert all(a.denominator == 1 for a in coefficients)
            conditions.append((chi.degree, [int(a) for a in coefficients]))

    def admissible(vector):
        for constant, coefficients in conditions:
            value = constant + sum(a * e for a, e in zip(coefficients, vector))
            if value < 0 or value % p:
                return False
        return True

    found = set()
    for head in itertools.product(range(-bound, bound + 1), repeat=len(g.class_ids) - 1):
        last = 1 - sum(head)
        if -bound <= last <= bound and admissible(head + (last,)):
            found.add(head + (last,))
    return found


class TestBoxes:
    """solve_box and the integer search on hand-made systems"""

    def test_single_bounded_variable(self):
        system = toy_system(["x"], mu_forms=[MuForm("chi", 0, linear(x=1), 4)])
        box = solve_box(system)
        assert box.bounds("x") == (0, 4)
        assert box.size == 5
        assert len(enumerate_integer_solutions(system, box)) == 5

    def test_contradictory_equalities(self):
        system = toy_system(
            ["x"],
            equalities=[
                Equality(linear(x=1), Fraction(1), "one"),
                Equality(linear(x=1), Fraction(0), "zero"),
            ],
        )
        box = solve_box(system)
        assert not box.feasible
        assert box.infeasible_by == "zero"
        assert box.size == 0
        assert enumerate_integer_solutions(system, box) == []
        assert str(box) == "empty (zero)"

    def test_unbounded_variables_raise(self):
        system = toy_system(["x", "y"], equalities=[Equality(linear(x=1, y=1), 1, "sum")])
        with pytest.raises(UnboundedVariableError) as info:
            solve_box(system)
        assert info.value.variables == ["x", "y"]

    def test_half_integer_form_forces_parity(self):
        # (x - y + 1)/2 in {0, 1} rules out x = y
        form = LinearForm(Fraction(1, 2), (("x", Fraction(1, 2)), ("y", Fraction(-1, 2))))
        system = toy_system(
            ["x", "y"],
            mu_forms=[
                MuForm("chi", 0, linear(x=1), 1),
                MuForm("psi", 0, linear(y=1), 1),
                MuForm("rho", 7, form, 1),
            ],
        )
        box = solve_box(system)
        assert box.bounds("x") == (0, 1)
        solutions = enumerate_integer_solutions(system, box)
        assert [pa.values for pa in solutions] == [(0, 1), (1, 0)]

    def test_nonvanishing_post_filter(self):
        system = toy_system(
            ["x", "y"],
            equalities=[Equality(linear(x=1, y=1), Fraction(1), "augmentation")],
            mu_forms=[
                MuForm("chi", 0, linear(x=1), 2),
                MuForm("psi", 0, linear(y=1), 2),
            ],
            nonvanishing=[NonvanishingCondition(("y",), 2, "cohn-livingstone(p=2)")],
        )
        search = BoxSearch(system, solve_box(system))
        assert [pa.values for pa in search.run()] == [(0, 1)]
        assert search.eliminations["cohn-livingstone(p=2)"] == 1
        assert search.leaves == 2

    def test_eliminations_account_for_the_box(self):
        system = toy_system(
            ["x", "y"],
            equalities=[Equality(linear(x=1, y=1), Fraction(1), "augmentation")],
            mu_forms=[
                MuForm("chi", 0, linear(x=1), 3),
                MuForm("psi", 0, linear(y=1), 3),
            ],
        )
        box = solve_box(system)
        search = BoxSearch(system, box)
        solutions = search.run()
        assert len(solutions) + sum(search.eliminations.values()) == box.size


class TestPropagation:
    def test_modulus_snaps_bounds_to_residue(self):
        # 1 + x in [0, 4] and even
        lo, hi = [None], [None]
        assert propagate([Row("r", (1,), 1, 0, 4, 2)], lo, hi) is None
        assert (lo, hi) == ([-1], [3])

    def test_failing_row_is_named(self):
        lo, hi = [0], [0]
        assert propagate([Row("r", (1,), 1, 0, 4, 2)], lo, hi) == "r"

    def test_tally_counts_removed_points(self):
        lo, hi = [0, 0], [3, 3]
        tally = Counter()
        assert propagate([Row("sum", (1, 1), -1, 0, 0)], lo, hi, tally) is None
        assert (lo, hi) == ([0, 0], [1, 1])
        assert tally["sum"] == 12

    def test_pass_limit_is_logged(self, monkeypatch):
        events = []

        class Recorder:
            def warning(self, event, **fields):
                events.append((event, fields))

        monkeypatch.setattr(box_search, "_MAX_PASSES", 1)
        monkeypatch.setattr(box_search, "logger", Recorder())
        lo, hi = [None], [None]
        # the first pass still tightens, so the limit cuts the fixpoint short
        assert propagate([Row("r", (1,), 1, 0, 4, 2)], lo, hi) is None
        assert events == [("Propagation pass limit reached", {"passes": 1, "rows": 1})]


class TestTrivialUnits:
    def test_counts(self, two_s5, gl25):
        assert [u.pa.trivial_class for u in trivial_solutions(two_s5, 12)] == ["12a", "12b"]
        assert len(trivial_solutions(gl25, 24)) == 4
        assert trivial_solutions(two_s5, 7) == []

    def test_trees_follow_the_power_maps(self, two_s5):
        (unit,) = [u for u in trivial_solutions(two_s5, 12) if u.pa.trivial_class == "12a"]
        assert unit.child(2).pa.trivial_class == "6a"
        assert unit.child(3).pa.trivial_class == "4b"
        assert unit.power(12).order == 1
        assert unit.tree_trivial
        assert check_coherence(unit, two_s5.power_maps) == []

    def test_central_translate(self, two_s5):
        three = PAVector.trivial(two_s5.class_ids, 3, "3a")
        image = central_translate(two_s5, three, "2a")
        assert image.trivial_class == "6a"
        assert image.unit_order == 6

    def test_central_translate_moves_every_entry(self, two_s5):
        pa = PAVector.from_mapping(two_s5.class_ids, 5, {"5a": 2, "10a": -1})
        image = central_translate(two_s5, pa, "2a")
        assert image.entries == {"5a": -1, "10a": 2}

    def test_central_translate_needs_central_class(self, two_s5):
        with pytest.raises(InvalidArgumentError):
            central_translate(two_s5, PAVector.trivial(two_s5.class_ids, 3, "3a"), "4b")


class TestPowerAssignments:
    def test_one_choice_per_prime(self, two_s5):
        solved = {4: verdict(4, trivial_solutions(two_s5, 4))}
        assignments = enumerate_power_assignments(solved, 8)
        assert [a.unit(2).pa.trivial_class for a in assignments] == ["4a", "4b"]

    def test_diamond_coherence(self, two_s5):
        solved = {
            6: verdict(6, trivial_solutions(two_s5, 6)),
            4: verdict(4, trivial_solutions(two_s5, 4)),
        }
        for a in enumerate_power_assignments(solved, 12):
            assert a.is_coherent()
            assert a.unit(2).child(3).key == a.unit(3).child(2).key

    def test_excluded_divisor_gives_no_assignments(self, two_s5):
        solved = {4: verdict(4, ())}
        assert enumerate_power_assignments(solved, 8) == []

    def test_missing_divisor(self):
        with pytest.raises(DependencyError):
            enumerate_power_assignments({}, 8)


class TestSolveOrder:
    def test_order_one(self, s5):
        result = solve_order(s5, 1, {}, ConstraintOptions())
        assert [u.pa.trivial_class for u in result.solutions] == ["1a"]
        assert result.status is ZC1Status.VERIFIED_TRIVIAL

    def test_nonpositive_order(self, s5):
        with pytest.raises(InvalidArgumentError):
            solve_order(s5, 0, {}, ConstraintOptions())

    def test_fusion_needs_solved_quotient(self, two_s5):
        solved = {1: solve_order(two_s5, 1, {}, ConstraintOptions())}
        with pytest.raises(DependencyError):
            solve_order(two_s5, 2, solved, ConstraintOptions())

    def test_central_involution(self, two_s5, s5_quotient):
        one = solve_order(two_s5, 1, {}, ConstraintOptions())
        result = solve_order(two_s5, 2, {1: one}, ConstraintOptions(), s5_quotient)
        assert [u.pa.trivial_class for u in result.solutions] == ["2a"]
        assert result.settled

    def test_quotients_optional_without_fusion(self, two_s5, monkeypatch):
        solved_orders = []

        def record(g, n, solved, options, quotients, **kwargs):
            solved_orders.append(n)
            return OrderVerdict(n, (), ZC1Status.VERIFIED_TRIVIAL)

        monkeypatch.setattr(driver, "solve_order", record)
        result = verify_zc1(two_s5, ConstraintOptions(fusion=False))
        assert solved_orders == result.solved_orders
        assert 8 in solved_orders

    def test_fusion_needs_every_quotient(self, two_s5):
        with pytest.raises(DependencyError):
            verify_zc1(two_s5, ConstraintOptions())


# ordinary characters, fusion, Berman-Higman and order divisibility
ORDINARY_ONLY = "ordinary,fusion,berman-higman,remark2,p-parts"

MONOTONE_CASES = [
    ("s5", 2, "ordinary,p-parts", "ordinary,p-parts,berman-higman"),
    ("s5", 3, "ordinary,p-parts", "ordinary,p-parts,remark2,berman-higman,modular"),
    ("s5", 2, "ordinary,berman-higman,p-parts", None),
    ("s5", 3, "ordinary,berman-higman,p-parts", None),
    pytest.param(
        "two_s5", 8, ORDINARY_ONLY, ORDINARY_ONLY + ",modular", marks=pytest.mark.slow
    ),
]


class TestMonotonicity:
    """Enabling another constraint family never adds solutions"""

    @pytest.mark.parametrize("name, n, weaker, stricter", MONOTONE_CASES)
    def test_stricter_toggles_give_a_subset(self, request, s5_quotient, name, n, weaker, stricter):
        g = request.getfixturevalue(name)
        quotients = s5_quotient if g.quotients else None
        loose = solve_through(g, n, ConstraintOptions.from_toggles(weaker), quotients)
        tight = solve_through(g, n, ConstraintOptions.from_toggles(stricter), quotients)
        tight_keys = {u.key for u in tight.solutions}
        assert tight_keys <= {u.key for u in loose.solutions}
        assert {u.key for u in trivial_solutions(g, n)} <= tight_keys


class TestExhaustiveSearch:
    """S5 at prime orders against a plain scan of a box"""

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [2, 3])
    def test_ordinary_characters_match_a_full_scan(self, s5, n):
        bound = 5
        scanned = exhaustive_units(s5, n, bound)
        # group elements of another order pass the multiplicity test but not rational conjugacy
        wrong_order = {
            PAVector.trivial(s5.class_ids, n, c.id).values
            for c in s5.classes
            if c.element_order != n
        }
        assert wrong_order & scanned
        result = solve_through(s5, n, ConstraintOptions.from_toggles("ordinary"))
        solved = {u.pa.values for u in result.solutions}
        in_box = {values for values in solved if all(abs(v) <= bound for v in values)}
        assert in_box == scanned - wrong_order
        assert {u.pa.values for u in trivial_solutions(s5, n)} <= solved


class TestS5:
    """S5 verified from its own table"""

    def test_verified(self, s5_result):
        assert s5_result.verified
        assert s5_result.open_orders == []

    def test_solutions_are_the_group_elements(self, s5, s5_result):
        for n in s5_result.solved_orders:
            expected = {u.key for u in trivial_solutions(s5, n)}
            assert {u.key for u in s5_result[n].solutions} == expected

    @pytest.mark.parametrize("n", [10, 12, 15, 20, 30, 60])
    def test_no_units_of_non_element_orders(self, s5_result, n):
        assert s5_result[n].solutions == ()

    def test_spectrum_without_quotients(self, s5):
        candidates, excluded = order_spectrum(s5)
        assert candidates == [1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]
        assert excluded == []

    def test_quotient_solutions_lookup(self, s5, s5_result):
        solved = QuotientSolutions(s5, s5_result)
        assert len(solved.solutions(1)) == 1
        assert len(solved.solutions(2)) == 2
        assert solved.solutions(7) == ()

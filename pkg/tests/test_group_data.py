"""
Tests for group files: loading, invariant checks, power maps and quotient links
"""

import json
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from zc_help.cyclotomic import from_terms, rational
from zc_help.errors import DataIOError, GroupValidationError, InvalidArgumentError, ParseError
from zc_help.groups import (
    brauer_from_ordinary_difference,
    dumps_group,
    element_mu_values,
    fused_partition,
    load_group,
    load_group_file,
    p_regular_classes,
    validate_quotient_link,
)
from zc_help.groups.validation import _check_second_orthogonality


def load_document(document: dict):
    return load_group(json.dumps(document))


def expect_invariant(document: dict, invariant: str) -> GroupValidationError:
    with pytest.raises(GroupValidationError) as info:
        load_document(document)
    assert info.value.invariant == invariant
    return info.value


def expect_link_error(document: dict, quotient, fragment: str) -> None:
    """The document loads on its own; the link to `quotient` is rejected."""
    g = load_document(document)
    with pytest.raises(GroupValidationError) as info:
        validate_quotient_link(g, g.quotient_link(quotient.name), quotient)
    assert info.value.invariant == "quotient-link"
    assert fragment in info.value.message


class TestBundledGroups:
    """The shipped tables load and validate"""

    def test_s5(self, s5):
        assert s5.name == "S5"
        assert s5.order == 120
        assert len(s5.classes) == len(s5.characters) == 7
        assert s5.brauer_primes == (5,)
        assert s5.exponent == 60

    def test_two_s5(self, two_s5):
        assert two_s5.order == 240
        assert two_s5.central_ids == frozenset({"1a", "2a"})
        assert two_s5.element_orders == frozenset({1, 2, 3, 4, 5, 6, 8, 10, 12})
        assert [q.quotient_name for q in two_s5.quotients] == ["S5"]

    def test_gl25(self, gl25):
        assert gl25.order == 480
        assert 24 in gl25.element_orders
        assert len(gl25.central_ids) == 4

    def test_dump_reloads_to_same_table(self, two_s5):
        text = dumps_group(two_s5)
        reloaded = load_group(text)
        assert reloaded.class_ids == two_s5.class_ids
        assert reloaded.characters == two_s5.characters
        assert dumps_group(reloaded) == text

    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(DataIOError):
            load_group_file(tmp_path / "absent.json")


class TestStructure:
    def test_power_class_composes_prime_maps(self, two_s5):
        assert two_s5.power_class("12a", 2) == "6a"
        assert two_s5.power_class("12a", 3) == "4b"
        assert two_s5.power_class("12a", 4) == "3a"
        assert two_s5.power_class("12a", 5) == "12b"
        assert two_s5.power_class("12a", 12) == "1a"

    def test_power_class_with_prime_coprime_to_group(self, two_s5):
        # 7 does not divide |G|; 8a is real and 12a^7 = 12a^5
        assert two_s5.power_class("8a", 7) == "8a"
        assert two_s5.power_class("12a", 7) == two_s5.power_class("12a", 5) == "12b"

    def test_central_multiply(self, two_s5):
        assert two_s5.central_multiply("2a", "3a") == "6a"
        assert two_s5.central_multiply("2a", "4b") == "4b"

    def test_p_regular_classes(self, two_s5):
        assert p_regular_classes(two_s5, 5) == [
            "1a", "4a", "2a", "6a", "3a", "8a", "8b", "4b", "12a", "12b",
        ]

    def test_brauer_character_from_difference(self, two_s5):
        phi = two_s5.brauer_table(5).characters[0]
        assert phi.degree == 2
        assert (phi.plus, phi.minus) == ("chi11", "chi6")

    def test_spin_brauer_recipe(self, two_s5):
        regular = p_regular_classes(two_s5, 5)
        phi = brauer_from_ordinary_difference(two_s5, 5, "chi11", "chi6")
        assert phi.values[regular.index("8a")] == from_terms(8, [(1, -1), (3, 1)])
        assert phi.values[regular.index("3a")] == rational(-1)
        assert phi.values[regular.index("6a")] == rational(1)
        # chi5 has the same degree but would make 3a act trivially
        wrong = brauer_from_ordinary_difference(two_s5, 5, "chi11", "chi5")
        assert wrong.values[regular.index("3a")] == rational(2)

    def test_gl25_brauer_recipe(self, gl25):
        phi = gl25.brauer_table(5).characters[0]
        assert (phi.plus, phi.minus) == ("chi9", "chi15")
        rebuilt = brauer_from_ordinary_difference(gl25, 5, "chi9", "chi15")
        assert rebuilt.degree == phi.degree == 2
        regular = p_regular_classes(gl25, 5)
        assert rebuilt.values[regular.index("24a")] == from_terms(24, [(1, 1), (5, 1)])
        with pytest.raises(InvalidArgumentError):
            brauer_from_ordinary_difference(gl25, 5, "chi15", "chi9")

    def test_fused_partition(self, two_s5):
        link = two_s5.quotient_link("S5")
        assert fused_partition(link, "6a") == ["12a", "12b"]
        assert fused_partition(link, "1a") == ["1a", "2a"]
        assert link.kernel_size == 2

    def test_eigenvalue_multiplicities_of_an_element(self, s5):
        chi7 = s5.character("chi7")
        values = element_mu_values(s5, "5a", lambda c: s5.value(chi7, c))
        assert values == [Fraction(2), Fraction(1), Fraction(1), Fraction(1), Fraction(1)]
        assert sum(values) == chi7.degree

    def test_quotient_link_against_quotient_table(self, two_s5, s5, gl25):
        validate_quotient_link(two_s5, two_s5.quotient_link("S5"), s5)
        with pytest.raises(GroupValidationError):
            validate_quotient_link(two_s5, two_s5.quotient_link("S5"), gl25)


class TestParsing:
    def test_float_rejected(self, s5_document):
        text = json.dumps(s5_document).replace('"order": 120', '"order": 120.0')
        with pytest.raises(ParseError):
            load_group(text)

    def test_malformed_json(self):
        with pytest.raises(ParseError):
            load_group('{"name": "S5",')

    def test_missing_field_is_schema_violation(self, s5_document):
        del s5_document["order"]
        expect_invariant(s5_document, "schema")

    def test_unknown_field_is_schema_violation(self, s5_document):
        s5_document["comment"] = "extra"
        expect_invariant(s5_document, "schema")


class TestInvariants:
    """Each mutation trips exactly the named invariant"""

    def test_duplicate_class_id(self, s5_document):
        s5_document["classes"][6]["id"] = "4a"
        expect_invariant(s5_document, "class-ids")

    def test_class_size_must_divide_order(self, s5_document):
        s5_document["classes"][1]["size"] = 14
        expect_invariant(s5_document, "class-sizes")

    def test_class_sizes_must_sum_to_order(self, s5_document):
        s5_document["classes"][1]["size"] = 12
        error = expect_invariant(s5_document, "class-sizes")
        assert "sum to 117" in error.message

    def test_power_map_into_unknown_class(self, s5_document):
        s5_document["power_maps"]["3"]["4a"] = "9z"
        expect_invariant(s5_document, "power-map-coverage")

    def test_missing_power_map(self, s5_document):
        del s5_document["power_maps"]["5"]
        expect_invariant(s5_document, "power-map-coverage")

    def test_power_map_order_inconsistency(self, s5_document):
        s5_document["power_maps"]["2"]["4a"] = "1a"
        error = expect_invariant(s5_document, "power-map-consistency")
        assert "4a" in error.message

    def test_central_classes_must_be_the_singletons(self, two_s5_document):
        two_s5_document["central"]["classes"] = [{"id": "1a", "inverse": "1a"}]
        expect_invariant(two_s5_document, "central-classes")

    def test_central_multiplication_must_be_bijective(self, two_s5_document):
        two_s5_document["central"]["mult"]["2a"]["8a"] = "8a"
        expect_invariant(two_s5_document, "central-mult-bijection")

    def test_central_multiplication_must_be_total(self, two_s5_document):
        del two_s5_document["central"]["mult"]["2a"]["8a"]
        expect_invariant(two_s5_document, "central-mult-bijection")

    def test_degree_must_match_identity_value(self, s5_document):
        s5_document["characters"][2]["degree"] = 5
        expect_invariant(s5_document, "character-degree")

    def test_row_length(self, s5_document):
        s5_document["characters"][6]["values"].pop()
        expect_invariant(s5_document, "character-length")

    def test_first_orthogonality(self, s5_document):
        s5_document["characters"][6]["values"][1] = 2
        expect_invariant(s5_document, "first-orthogonality")

    def test_second_orthogonality(self, s5):
        # rows that pass the first relation always pass the second; corrupt a loaded table
        rows = list(s5.characters)
        rows[1] = replace(rows[1], values=rows[0].values)
        with pytest.raises(GroupValidationError) as info:
            _check_second_orthogonality(replace(s5, characters=tuple(rows)))
        assert info.value.invariant == "second-orthogonality"

    def test_brauer_recipe_with_negative_degree(self, s5_document):
        s5_document["brauer"][0]["differences"][0] = {"id": "bad", "plus": "chi1", "minus": "chi3"}
        expect_invariant(s5_document, "brauer-recipe")

    def test_brauer_prime_must_divide_order(self, s5_document):
        s5_document["brauer"][0]["p"] = 7
        expect_invariant(s5_document, "brauer-recipe")

    def test_kernel_must_be_central(self, two_s5_document):
        two_s5_document["quotients"][0]["kernel"] = ["1a", "4b"]
        expect_invariant(two_s5_document, "quotient-link")

    def test_fusion_of_unknown_class(self, two_s5_document):
        two_s5_document["quotients"][0]["fusion"]["99z"] = "1a"
        expect_invariant(two_s5_document, "quotient-link")

    def test_fusion_fibre_sizes(self, two_s5_document, s5):
        two_s5_document["quotients"][0]["fusion"]["8b"] = "2a"
        expect_link_error(two_s5_document, s5, "classes fusing to 2a have total size 60")

    def test_fusion_must_be_onto(self, two_s5_document, s5):
        two_s5_document["quotients"][0]["fusion"]["4b"] = "2a"
        expect_link_error(two_s5_document, s5, "not onto")

    def test_published_anchor_mismatch(self, two_s5_document):
        two_s5_document["published"][0]["values"]["6a"] = -1
        error = expect_invariant(two_s5_document, "published-value")
        assert "chi5(6a)" in error.message

    def test_error_payload(self, s5_document):
        del s5_document["power_maps"]["5"]
        error = expect_invariant(s5_document, "power-map-coverage")
        payload = error.to_dict()
        assert payload["category"] == "validation-error"
        assert payload["invariant"] == "power-map-coverage"
        assert error.exit_code == 3

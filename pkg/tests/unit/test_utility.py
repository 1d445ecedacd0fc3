"""
Unit tests for utility specs, evaluation and the multilinear extension.
"""
import json

import numpy as np
import pytest

from shared.errors import DimensionMismatch, NonPositiveScale, ParseError
from socialeu.analysis import double_sum
from socialeu.game import Profile, centroid_profile, pure_profile
from socialeu.probes import random_probes
from socialeu.social import LinearInequalityAversion, StepInequalityAversion
from socialeu.utility import (
    Affine,
    Difference,
    EUTable,
    SocialSpec,
    Sum,
    UtilityTable,
    evaluate,
    evaluate_profiles,
    induced_social,
    is_structurally_bilinear,
    load_spec,
    multilinear_extension,
    restrict_to_pure,
    spec_from_dict,
    spec_to_dict,
    validate_spec,
)


class TestUtilityTable:
    """Tests for UtilityTable."""

    def test_read_only(self):
        """Table values should not be writable."""
        table = UtilityTable([[1, 2], [3, 4]])
        with pytest.raises(ValueError):
            table.values[0, 0] = 0.0

    def test_equality(self):
        """Tables compare by value."""
        assert UtilityTable([[1, 2]]) == UtilityTable([[1.0, 2.0]])
        assert UtilityTable([[1, 2]]) != UtilityTable([[2, 1]])

    def test_rejects_vector(self):
        """A flat vector is not a table."""
        with pytest.raises(ParseError):
            UtilityTable([1, 2, 3])

    def test_rejects_nan(self):
        """Non-finite utils should be rejected."""
        with pytest.raises(ParseError):
            UtilityTable([[float('nan')]])


class TestMultilinearExtension:
    """Tests for the multilinear extension of a table."""

    def test_pure_profile_reads_entry(self, game):
        """At a pure profile the extension is the table entry."""
        table = UtilityTable([[1, 2], [3, 4]])
        assert multilinear_extension(table, pure_profile(game, 1, 0)) == 3.0

    def test_centroid_is_average(self, game):
        """At the centroid the extension is the mean entry."""
        table = UtilityTable([[1, 2], [3, 4]])
        assert multilinear_extension(table, centroid_profile(game)) == 2.5

    def test_one_by_one(self):
        """A 1x1 table is constant."""
        assert multilinear_extension(UtilityTable([[7.0]]), Profile.of([1], [1])) == 7.0

    def test_dimension_mismatch(self, game):
        """A profile of the wrong shape should raise."""
        with pytest.raises(DimensionMismatch):
            multilinear_extension(UtilityTable([[1, 2, 3]]), centroid_profile(game))

    def test_matches_double_sum(self, three_by_three, rng):
        """The einsum kernel should agree with a plain double loop on 1000 profiles."""
        values = rng.uniform(-10, 10, size=(3, 3))
        table = UtilityTable(values)
        for p in random_probes(three_by_three, 1000, seed=3):
            assert multilinear_extension(table, p) == pytest.approx(double_sum(values.tolist(), p), abs=1e-12)


class TestEvaluate:
    """Tests for spec evaluation."""

    def test_eu_table_matches_extension(self, three_by_three, rng):
        """An EUTable evaluates to its own extension everywhere."""
        spec = EUTable.of(rng.uniform(-5, 5, size=(3, 3)))
        for p in random_probes(three_by_three, 200, seed=11):
            assert evaluate(spec, three_by_three, p) == pytest.approx(
                multilinear_extension(spec.table, p), abs=1e-9)

    def test_social_spec(self, game, at_mix, step):
        """A social spec evaluates the functional at expected payoffs."""
        assert evaluate(step, game, at_mix) == 0.0

    def test_affine(self, game):
        """Affine(T, 2, 5) at a pure profile is 2 T[i][j] + 5."""
        spec = Affine(EUTable.of([[1, 2], [3, 4]]), 2.0, 5.0)
        assert evaluate(spec, game, pure_profile(game, 0, 1)) == 9.0

    def test_affine_rejects_non_positive_scale(self):
        """Scale must be positive."""
        with pytest.raises(NonPositiveScale):
            Affine(EUTable.of([[1]]), 0.0)

    def test_nested_affine_composes(self, three_by_three, rng):
        """Nested affine maps equal one map with the product scale."""
        base = EUTable.of(rng.uniform(-5, 5, size=(3, 3)))
        nested = Affine(Affine(base, 1.5, 2.0), 3.0, -1.0)
        single = Affine(base, 4.5, 5.0)
        for p in random_probes(three_by_three, 50, seed=5):
            assert evaluate(nested, three_by_three, p) == pytest.approx(evaluate(single, three_by_three, p), abs=1e-9)

    def test_sum_undoes_difference(self, game):
        """Sum(Difference(f, g), g) evaluates like f."""
        f = SocialSpec(LinearInequalityAversion(alpha=0.3, beta=0.7))
        g = EUTable.of([[1, -2], [0.5, 4]])
        restored = Sum(Difference(f, g), g)
        for p in random_probes(game, 50, seed=9):
            assert evaluate(restored, game, p) == pytest.approx(evaluate(f, game, p), abs=1e-9)

    def test_evaluate_profiles_batch(self, game):
        """Batch evaluation should match one-by-one evaluation."""
        spec = EUTable.of([[1, 2], [3, 4]])
        probes = random_probes(game, 10, seed=1)
        batch = evaluate_profiles(spec, game, probes)
        assert batch.tolist() == pytest.approx([evaluate(spec, game, p) for p in probes])

    def test_table_must_fit_game(self, game):
        """Evaluating a 3x3 table on a 2x2 game should raise."""
        with pytest.raises(DimensionMismatch):
            evaluate(EUTable.of(np.zeros((3, 3))), game, centroid_profile(game))


class TestRestrictToPure:
    """Tests for restriction to pure profiles."""

    def test_vertex_agreement(self, game):
        """The extension of the restriction agrees with the utility spec at every vertex."""
        spec = Difference(EUTable.of([[1, 2], [3, 4]]), SocialSpec(StepInequalityAversion()))
        table = restrict_to_pure(spec, game)
        for i in range(2):
            for j in range(2):
                p = pure_profile(game, i, j)
                assert multilinear_extension(table, p) == evaluate(spec, game, p)

    def test_step_restriction_is_constant(self, game, step):
        """Every pure profile of the example is unequal, so the restriction is all -1."""
        assert restrict_to_pure(step, game).to_rows() == [[-1.0, -1.0], [-1.0, -1.0]]


class TestStructure:
    """Tests for structural bilinearity and validation."""

    def test_table_trees_are_structural(self):
        """Trees of tables are bilinear by construction."""
        t = EUTable.of([[1]])
        assert is_structurally_bilinear(Sum(Affine(t, 2.0, 1.0), Difference(t, t)))

    def test_social_leaf_is_not_structural(self, step):
        """A social functional anywhere makes the tree non-structural."""
        assert not is_structurally_bilinear(Difference(EUTable.of([[1]]), step))

    def test_validate_names_source(self, game):
        """A table of the wrong shape deep in a tree should be reported with its source."""
        spec = Sum(EUTable.of([[1, 2], [3, 4]]), Affine(EUTable.of([[1, 2, 3]]), 1.0))
        with pytest.raises(DimensionMismatch) as exc:
            validate_spec(spec, game, source='u.json')
        assert exc.value.source == 'u.json'

    def test_induced_social(self):
        """induced_social is the difference u_g - u_d."""
        u_g, u_d = EUTable.of([[1]]), EUTable.of([[2]])
        s = induced_social(u_g, u_d)
        assert isinstance(s, Difference)
        assert s.left is u_g and s.right is u_d


class TestSpecSerialization:
    """Tests for reading and writing spec files."""

    def test_round_trip(self, game):
        """A composite spec should survive a JSON round trip."""
        spec = Sum(
            Affine(EUTable.of([[1, 2], [3, 4]]), 2.0, -1.0),
            Difference(SocialSpec(StepInequalityAversion(penalty=2.0)), EUTable.of([[0, 1], [1, 0]])),
        )
        text = json.dumps(spec_to_dict(spec))
        parsed = spec_from_dict(json.loads(text))
        assert spec_to_dict(parsed) == spec_to_dict(spec)
        for p in random_probes(game, 20, seed=2):
            assert evaluate(parsed, game, p) == evaluate(spec, game, p)

    def test_unknown_type(self):
        """Unknown spec types should be rejected."""
        with pytest.raises(ParseError):
            spec_from_dict({'type': 'polynomial'})

    def test_missing_values(self):
        """An eu_table without values should be rejected."""
        with pytest.raises(ParseError):
            spec_from_dict({'type': 'eu_table'}, source='u.json')

    def test_affine_bad_scale(self):
        """A zero scale in a file should be a parse error."""
        data = {'type': 'affine', 'base': {'type': 'eu_table', 'values': [[1]]}, 'scale': 0}
        with pytest.raises(ParseError) as exc:
            spec_from_dict(data, source='u.json')
        assert exc.value.source == 'u.json'

    @pytest.mark.parametrize('key', ['scale', 'shift'])
    def test_affine_huge_number(self, key):
        """A scale or shift too large for a float should be a parse error."""
        data = {'type': 'affine', 'base': {'type': 'eu_table', 'values': [[1]]}, 'scale': 1, 'shift': 0}
        data[key] = 10 ** 400
        with pytest.raises(ParseError) as exc:
            spec_from_dict(data, source='u.json')
        assert exc.value.reason == f"affine '{key}' is not finite"

    def test_huge_table_entry(self):
        """A table entry too large for a float should be a parse error."""
        with pytest.raises(ParseError) as exc:
            spec_from_dict({'type': 'eu_table', 'values': [[1, 10 ** 400]]}, source='u.json')
        assert exc.value.reason == 'values[0][1] is not finite'

    def test_nested_error_keeps_source(self):
        """Errors inside a nested spec should carry the file name."""
        data = {'type': 'sum', 'left': {'type': 'eu_table', 'values': [[1]]}, 'right': {'kind': 'step'}}
        with pytest.raises(ParseError) as exc:
            spec_from_dict(data, source='u.json')
        assert exc.value.source == 'u.json'

    def test_load_spec(self, tmp_path):
        """load_spec should read a spec file from disk."""
        path = tmp_path / 'u.json'
        path.write_text(json.dumps({'type': 'eu_table', 'values': [[4], [14]]}), encoding='utf-8')
        spec = load_spec(str(path))
        assert spec.table.to_rows() == [[4.0], [14.0]]

"""Attribute-to-visual mapping: frozen oracle values plus property checks.

The clinical six-task fixture doubles as the ground truth here: every
expected percentage, lane and scale below was computed by hand with the
plain formulas in tests/oracles.py and frozen as literals.
"""
import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles
from pm3d import blocks
from pm3d.blocks import TaskBlock
from pm3d.mapping import (
    DEFAULT_LANES,
    ConfigSyntaxError,
    InvalidConfig,
    MappingConfig,
    MappingKind,
    MappingTuple,
    Style,
    config_warnings,
    parse_config,
    resolve,
    swim_lanes,
    validate_config,
)
from pm3d.model import NumericValue, TextValue

TASKS = ("t1", "t2", "t3", "t4", "t5", "t6")

DURATION = (20.0, 5.0, 15.0, 10.0, 45.0, 20.0)
ROLE_DURATION = (1.0, 5.0, 15.0, 1.0, 45.0, 20.0)
COST = (1.0, 10.0, 40.0, 1.0, 90.0, 40.0)
LOCATION = ("Waiting Room", "Treatment Room", "Laboratory",
            "Laboratory", "Laboratory", "Consulting Room")
ROLE = ("Nurse", "Nurse", "Doctor", "Nurse", "Doctor", "Doctor")

# Hand-computed normalizations, frozen.
COST_PCT = (0.0, 9 / 89, 39 / 89, 0.0, 1.0, 39 / 89)
DURATION_PCT = (0.375, 0.0, 0.25, 0.125, 1.0, 0.375)
ROLE_DURATION_PCT = (0.0, 1 / 11, 7 / 22, 0.0, 1.0, 19 / 44)
DURATION_LANES_K5 = (1, 0, 1, 0, 4, 1)
COST_LANES_K5 = (0, 0, 2, 0, 4, 2)
ROLE_LANES = (0, 0, 1, 0, 1, 1)          # Nurse first, then Doctor
LOCATION_LANES = (0, 1, 2, 2, 2, 3)      # first-appearance order


def one_tuple(style, attribute, mapping, k=None):
    return MappingConfig(tuples=(MappingTuple(style, attribute, mapping, k),))


def chain(bags, name="chain"):
    tree = [TaskBlock(label=f"T{i + 1}", arguments=bag, id=f"t{i + 1}")
            for i, bag in enumerate(bags)]
    return blocks.build_model(tree, name=name)


def visual(model, config, node_id):
    return resolve(model, config)[node_id]


class TestRelativeOracle:
    def test_cost_percentages_via_scale_z(self, blood_model):
        config = one_tuple(Style.SCALE_Z, "Cost", MappingKind.RELATIVE)
        out = resolve(blood_model, config)
        for tid, pct in zip(TASKS, COST_PCT):
            assert out[tid].scale[2] == pytest.approx(1.0 + pct, rel=1e-12)

    def test_cost_offsets_via_position_y(self, blood_model):
        config = one_tuple(Style.POSITION_Y, "Cost", MappingKind.RELATIVE)
        out = resolve(blood_model, config)
        for tid, pct in zip(TASKS, COST_PCT):
            assert out[tid].offset_y == pytest.approx(pct * (DEFAULT_LANES - 1), rel=1e-12)

    def test_duration_percentages(self, blood_model):
        config = one_tuple(Style.SCALE_X, "Duration", MappingKind.RELATIVE)
        out = resolve(blood_model, config)
        for tid, pct in zip(TASKS, DURATION_PCT):
            assert out[tid].scale[0] == pytest.approx(1.0 + pct, rel=1e-12)

    def test_role_duration_percentages(self, blood_model):
        config = one_tuple(Style.SCALE_Y, "Role Duration", MappingKind.RELATIVE)
        out = resolve(blood_model, config)
        for tid, pct in zip(TASKS, ROLE_DURATION_PCT):
            assert out[tid].scale[1] == pytest.approx(1.0 + pct, rel=1e-12)

    def test_matches_brute_force_oracle_for_every_style(self, blood_model):
        values = list(DURATION)
        for style in (Style.POSITION_Y, Style.POSITION_Z):
            out = resolve(blood_model, one_tuple(style, "Duration", MappingKind.RELATIVE))
            for tid, v in zip(TASKS, values):
                got = out[tid].offset_y if style is Style.POSITION_Y else out[tid].offset_z
                want = oracles.relative_offset(values, v, DEFAULT_LANES)
                assert got == pytest.approx(want, rel=1e-12)
        for style, axis in ((Style.SCALE_X, 0), (Style.SCALE_Y, 1), (Style.SCALE_Z, 2)):
            out = resolve(blood_model, one_tuple(style, "Duration", MappingKind.RELATIVE))
            for tid, v in zip(TASKS, values):
                assert out[tid].scale[axis] == pytest.approx(
                    oracles.relative_scale(values, v), rel=1e-12)

    def test_lane_count_widens_position_range(self, blood_model):
        config = one_tuple(Style.POSITION_Y, "Cost", MappingKind.RELATIVE, 11)
        out = resolve(blood_model, config)
        assert out["t5"].offset_y == pytest.approx(10.0)
        assert out["t1"].offset_y == 0.0


class TestDiscreteOracle:
    def test_duration_lanes_and_scales(self, blood_model):
        config = one_tuple(Style.SCALE_Y, "Duration", MappingKind.DISCRETE)
        out = resolve(blood_model, config)
        for tid, lane in zip(TASKS, DURATION_LANES_K5):
            assert out[tid].lane_assignments["scaleY"] == lane
            assert out[tid].scale[1] == pytest.approx(1.0 + lane / 4)

    def test_cost_lanes(self, blood_model):
        config = one_tuple(Style.POSITION_Y, "Cost", MappingKind.DISCRETE)
        out = resolve(blood_model, config)
        for tid, lane in zip(TASKS, COST_LANES_K5):
            assert out[tid].offset_y == float(lane)
            assert out[tid].lane_assignments["positionY"] == lane

    def test_role_text_lanes(self, blood_model):
        config = one_tuple(Style.POSITION_Z, "Role", MappingKind.DISCRETE)
        out = resolve(blood_model, config)
        for tid, lane in zip(TASKS, ROLE_LANES):
            assert out[tid].offset_z == float(lane)

    def test_role_text_scales_two_groups(self, blood_model):
        config = one_tuple(Style.SCALE_Z, "Role", MappingKind.DISCRETE)
        out = resolve(blood_model, config)
        for tid, lane in zip(TASKS, ROLE_LANES):
            assert out[tid].scale[2] == pytest.approx(1.0 + lane)

    def test_location_lanes_first_appearance(self, blood_model):
        config = one_tuple(Style.POSITION_Y, "Location", MappingKind.DISCRETE)
        out = resolve(blood_model, config)
        for tid, lane in zip(TASKS, LOCATION_LANES):
            assert out[tid].offset_y == float(lane)

    def test_location_scales_four_groups(self, blood_model):
        config = one_tuple(Style.SCALE_X, "Location", MappingKind.DISCRETE)
        out = resolve(blood_model, config)
        for tid, lane in zip(TASKS, LOCATION_LANES):
            assert out[tid].scale[0] == pytest.approx(1.0 + lane / 3)

    def test_location_lanes_lexicographic(self, blood_model):
        config = MappingConfig(
            tuples=(MappingTuple(Style.POSITION_Y, "Location", MappingKind.DISCRETE),),
            text_lane_order="lexicographic",
        )
        out = resolve(blood_model, config)
        order = oracles.text_lanes_lexicographic(list(LOCATION))
        for tid, loc in zip(TASKS, LOCATION):
            assert out[tid].offset_y == float(order[loc])

    def test_matches_brute_force_oracle(self, blood_model):
        values = list(COST)
        for k in (2, 3, 5, 7):
            out = resolve(blood_model, one_tuple(Style.POSITION_Y, "Cost", MappingKind.DISCRETE, k))
            for tid, v in zip(TASKS, values):
                assert out[tid].offset_y == float(oracles.numeric_lane(values, v, k))


class TestDirectOracle:
    def test_position_uses_raw_value(self, blood_model):
        config = one_tuple(Style.POSITION_Y, "Duration", MappingKind.DIRECT)
        out = resolve(blood_model, config)
        for tid, v in zip(TASKS, DURATION):
            assert out[tid].offset_y == v

    def test_scale_uses_raw_value(self, blood_model):
        config = one_tuple(Style.SCALE_X, "Duration", MappingKind.DIRECT)
        out = resolve(blood_model, config)
        for tid, v in zip(TASKS, DURATION):
            assert out[tid].scale[0] == v

    def test_scale_clamps_tiny_values(self):
        model = chain([{"W": NumericValue(0.0)}, {"W": NumericValue(-3.0)},
                       {"W": NumericValue(2.0)}])
        out = resolve(model, one_tuple(Style.SCALE_X, "W", MappingKind.DIRECT))
        assert out["t1"].scale[0] == 0.01
        assert out["t2"].scale[0] == 0.01
        assert out["t3"].scale[0] == 2.0


class TestLabels:
    def test_default_labels(self, blood_model):
        out = resolve(blood_model, MappingConfig(tuples=()))
        assert out["t4"].face_labels == {"top": "t4", "front": "Centrifugation"}
        assert out["start"].face_labels == {"top": "start"}

    def test_full_mapping_label_tuples(self, blood_model, full_config):
        out = resolve(blood_model, full_config)
        assert out["t1"].face_labels["front"] == "Obtain/Update Patient Data"
        assert out["t1"].face_labels["top"] == "t1"
        assert out["t1"].face_labels["back"] == "Patient Database"
        assert "back" not in out["t2"].face_labels
        assert out["t5"].face_labels["back"] == "Disease Identification"

    def test_numeric_label_includes_unit(self, blood_model):
        config = one_tuple(Style.LABEL_BOTTOM, "Duration", MappingKind.DIRECT)
        out = resolve(blood_model, config)
        assert out["t2"].face_labels["bottom"] == "5 min"

    def test_virtual_id_attribute(self, blood_model):
        config = one_tuple(Style.LABEL_RIGHT, "Id", MappingKind.DIRECT)
        out = resolve(blood_model, config)
        assert out["p1.split"].face_labels["right"] == "p1.split"


class TestValidation:
    def test_duplicate_style_rejected(self):
        config = MappingConfig(tuples=(
            MappingTuple(Style.SCALE_X, "A", MappingKind.RELATIVE),
            MappingTuple(Style.SCALE_X, "B", MappingKind.RELATIVE),
        ))
        model = chain([{"A": NumericValue(1.0), "B": NumericValue(2.0)}])
        rules = [v.rule for v in validate_config(model, config)]
        assert "duplicate-style" in rules

    def test_text_attribute_needs_discrete(self, blood_model):
        config = one_tuple(Style.POSITION_Y, "Role", MappingKind.RELATIVE)
        rules = [v.rule for v in validate_config(blood_model, config)]
        assert rules == ["text-needs-discrete"]

    def test_text_attribute_direct_scale_rejected(self, blood_model):
        config = one_tuple(Style.SCALE_Z, "Location", MappingKind.DIRECT)
        rules = [v.rule for v in validate_config(blood_model, config)]
        assert rules == ["text-needs-discrete"]

    def test_text_attribute_fine_for_labels(self, blood_model):
        config = one_tuple(Style.LABEL_FRONT, "Role", MappingKind.DIRECT)
        assert validate_config(blood_model, config) == []

    def test_label_requires_direct(self, blood_model):
        config = one_tuple(Style.LABEL_FRONT, "Cost", MappingKind.RELATIVE)
        rules = [v.rule for v in validate_config(blood_model, config)]
        assert rules == ["label-needs-direct"]

    def test_mixed_kind_rejected_everywhere(self):
        model = chain([{"X": NumericValue(1.0)}, {"X": TextValue("yes")}])
        for style in (Style.POSITION_Y, Style.SCALE_X, Style.LABEL_FRONT):
            mapping = MappingKind.DIRECT if style.is_label else MappingKind.DISCRETE
            rules = [v.rule for v in validate_config(model, one_tuple(style, "X", mapping))]
            assert "mixed-kind" in rules

    def test_lane_count_bounds(self, blood_model):
        bad = one_tuple(Style.POSITION_Y, "Cost", MappingKind.DISCRETE, 1)
        rules = [v.rule for v in validate_config(blood_model, bad)]
        assert "lane-count" in rules

    def test_lane_count_applies_to_relative_positions_too(self, blood_model):
        bad = one_tuple(Style.POSITION_Y, "Cost", MappingKind.RELATIVE, 1)
        rules = [v.rule for v in validate_config(blood_model, bad)]
        assert "lane-count" in rules

    def test_text_lane_order_vocabulary(self, blood_model):
        config = MappingConfig(tuples=(), text_lane_order="alphabetical")
        rules = [v.rule for v in validate_config(blood_model, config)]
        assert rules == ["text-lane-order"]

    def test_resolve_raises_on_invalid_config(self, blood_model):
        config = one_tuple(Style.POSITION_Y, "Role", MappingKind.RELATIVE)
        with pytest.raises(InvalidConfig) as err:
            resolve(blood_model, config)
        assert err.value.violations[0].rule == "text-needs-discrete"

    def test_absent_attribute_warns_but_validates(self, blood_model):
        config = one_tuple(Style.SCALE_X, "Priority", MappingKind.RELATIVE)
        assert validate_config(blood_model, config) == []
        warnings = config_warnings(blood_model, config)
        assert [w.rule for w in warnings] == ["empty-attribute"]

    def test_full_mapping_config_validates(self, blood_model, full_config):
        assert validate_config(blood_model, full_config) == []


class TestDegenerate:
    def test_constant_values_relative_all_zero(self):
        model = chain([{"C": NumericValue(7.0)} for _ in range(4)])
        out = resolve(model, one_tuple(Style.POSITION_Y, "C", MappingKind.RELATIVE))
        assert all(out[f"t{i}"].offset_y == 0.0 for i in range(1, 5))
        out = resolve(model, one_tuple(Style.SCALE_X, "C", MappingKind.RELATIVE))
        assert all(out[f"t{i}"].scale[0] == 1.0 for i in range(1, 5))

    def test_single_text_group_one_lane_unit_scale(self):
        model = chain([{"G": TextValue("only")} for _ in range(3)])
        out = resolve(model, one_tuple(Style.SCALE_Y, "G", MappingKind.DISCRETE))
        assert all(out[f"t{i}"].scale[1] == 1.0 for i in range(1, 4))
        lanes = swim_lanes(model, one_tuple(Style.POSITION_Y, "G", MappingKind.DISCRETE))
        assert len(lanes) == 1 and lanes[0].index == 0

    def test_absent_attribute_gives_defaults(self, blood_model):
        config = one_tuple(Style.SCALE_Z, "Missing", MappingKind.RELATIVE)
        out = resolve(blood_model, config)
        for node in blood_model.nodes:
            assert out[node.id].offset_y == 0.0
            assert out[node.id].offset_z == 0.0
            assert out[node.id].scale == (1.0, 1.0, 1.0)

    def test_single_carrier_relative_is_zero_pct(self):
        model = chain([{"V": NumericValue(42.0)}, {}])
        out = resolve(model, one_tuple(Style.SCALE_X, "V", MappingKind.RELATIVE))
        assert out["t1"].scale[0] == 1.0
        assert out["t2"].scale[0] == 1.0


class TestSwimLanes:
    def test_full_mapping_lane_sets(self, blood_model, full_config):
        lanes = swim_lanes(blood_model, full_config)
        by_style = {}
        for lane in lanes:
            by_style.setdefault(lane.style, []).append(lane)
        assert [l.label for l in by_style[Style.POSITION_Y]] == [
            "Waiting Room", "Treatment Room", "Laboratory", "Consulting Room"]
        assert [l.label for l in by_style[Style.POSITION_Z]] == ["Nurse", "Doctor"]
        assert [l.index for l in by_style[Style.POSITION_Y]] == [0, 1, 2, 3]

    def test_numeric_lanes_report_value_ranges(self, blood_model):
        config = one_tuple(Style.POSITION_Y, "Cost", MappingKind.DISCRETE)
        lanes = swim_lanes(blood_model, config)
        assert len(lanes) == 5
        assert ".." in lanes[0].label

    def test_scale_tuples_make_no_lanes(self, blood_model):
        config = one_tuple(Style.SCALE_X, "Role", MappingKind.DISCRETE)
        assert swim_lanes(blood_model, config) == []


class TestConfigParsing:
    def test_full_mapping_file(self, full_config):
        styles = [t.style for t in full_config.tuples]
        assert styles == [Style.POSITION_Y, Style.POSITION_Z, Style.SCALE_X,
                          Style.SCALE_Y, Style.SCALE_Z, Style.LABEL_FRONT,
                          Style.LABEL_TOP, Style.LABEL_BACK]
        assert full_config.tuples[2].attribute == "Duration"
        assert full_config.tuples[3].attribute == "Role Duration"

    def test_explicit_lane_count(self):
        config = parse_config("positionY = Cost : discrete : 7\n")
        assert config.tuples[0].lane_count == 7

    def test_comments_and_blanks_ignored(self):
        config = parse_config("# heading\n\nscaleX = Duration : relative\n")
        assert len(config.tuples) == 1

    def test_text_lane_order_directive(self):
        config = parse_config("text-lane-order = lexicographic\n")
        assert config.text_lane_order == "lexicographic"

    def test_unknown_style_reports_line(self):
        with pytest.raises(ConfigSyntaxError) as err:
            parse_config("# one\nscaleW = Cost : relative\n")
        assert err.value.line == 2

    def test_unknown_mapping_reports_line(self):
        with pytest.raises(ConfigSyntaxError) as err:
            parse_config("scaleX = Cost : sideways\n")
        assert err.value.line == 1

    def test_garbage_line_rejected(self):
        with pytest.raises(ConfigSyntaxError):
            parse_config("scaleX Cost relative\n")

    def test_bad_lane_count_rejected(self):
        with pytest.raises(ConfigSyntaxError):
            parse_config("positionY = Cost : discrete : zero\n")


numeric_lists = st.lists(
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False),
    min_size=1, max_size=12,
)


@settings(max_examples=60, deadline=None)
@given(numeric_lists)
def test_relative_preserves_order(values):
    model = chain([{"V": NumericValue(v)} for v in values])
    out = resolve(model, one_tuple(Style.POSITION_Y, "V", MappingKind.RELATIVE))
    offsets = [out[f"t{i + 1}"].offset_y for i in range(len(values))]
    for i in range(len(values)):
        for j in range(len(values)):
            if values[i] < values[j]:
                assert offsets[i] <= offsets[j]
            if values[i] == values[j]:
                assert offsets[i] == offsets[j]


@settings(max_examples=60, deadline=None)
@given(numeric_lists,
       st.floats(min_value=0.05, max_value=20, allow_nan=False),
       st.floats(min_value=-100, max_value=100, allow_nan=False))
def test_relative_is_affine_invariant(values, a, b):
    # Only well-posed while the scaled spread survives rounding; a tiny
    # range shifted by b collapses to a constant and the premise is gone.
    spread = max(values) - min(values)
    magnitude = a * max(abs(v) for v in values) + abs(b) + 1.0
    assume(spread == 0 or a * spread >= 1e-3 * magnitude)
    model1 = chain([{"V": NumericValue(v)} for v in values])
    model2 = chain([{"V": NumericValue(a * v + b)} for v in values])
    config = one_tuple(Style.SCALE_X, "V", MappingKind.RELATIVE)
    out1 = resolve(model1, config)
    out2 = resolve(model2, config)
    for i in range(len(values)):
        tid = f"t{i + 1}"
        assert out1[tid].scale[0] == pytest.approx(out2[tid].scale[0], abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(numeric_lists, st.integers(min_value=2, max_value=9))
def test_discrete_lanes_stay_in_range(values, k):
    model = chain([{"V": NumericValue(v)} for v in values])
    out = resolve(model, one_tuple(Style.POSITION_Y, "V", MappingKind.DISCRETE, k))
    for i, v in enumerate(values):
        lane = out[f"t{i + 1}"].lane_assignments["positionY"]
        assert 0 <= lane < k
        assert lane == oracles.numeric_lane(values, v, k)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(["a", "b", "c", "d"]), min_size=1, max_size=10))
def test_text_lanes_match_oracle(words):
    model = chain([{"G": TextValue(w)} for w in words])
    out = resolve(model, one_tuple(Style.POSITION_Y, "G", MappingKind.DISCRETE))
    lanes = oracles.text_lanes_first_appearance(words)
    for i, w in enumerate(words):
        assert out[f"t{i + 1}"].offset_y == float(lanes[w])


@settings(max_examples=60, deadline=None)
@given(numeric_lists)
def test_normalized_scales_stay_in_unit_band(values):
    model = chain([{"V": NumericValue(v)} for v in values])
    for mapping in (MappingKind.RELATIVE, MappingKind.DISCRETE):
        out = resolve(model, one_tuple(Style.SCALE_Y, "V", mapping))
        for i in range(len(values)):
            assert 1.0 <= out[f"t{i + 1}"].scale[1] <= 2.0


@settings(max_examples=30, deadline=None)
@given(numeric_lists)
def test_resolve_is_pure(values):
    model = chain([{"V": NumericValue(v)} for v in values])
    config = one_tuple(Style.POSITION_Z, "V", MappingKind.RELATIVE)
    first = resolve(model, config)
    second = resolve(model, config)
    assert first == second

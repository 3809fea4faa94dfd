import pytest
from hypothesis import given, settings, strategies as st

from conftest import fixture_text
from pm3d import blocks
from pm3d.generator import GenSpec, generate
from pm3d.model import NodeKind, NumericValue, TextValue, validate
from pm3d.parser import (
    InvalidDocument,
    MalformedXml,
    ParseError,
    UnbalancedBlock,
    UnknownElement,
    detect_value,
    format_number,
    format_value,
    parse,
    serialize,
)


class TestDetectValue:
    def test_plain_integer(self):
        assert detect_value("20") == NumericValue(20.0)

    def test_number_with_unit(self):
        assert detect_value("20 min") == NumericValue(20.0, "min")
        assert detect_value("1 €") == NumericValue(1.0, "€")

    def test_signed_and_decimal(self):
        assert detect_value("-3.5 kg") == NumericValue(-3.5, "kg")
        assert detect_value("+7") == NumericValue(7.0)

    def test_text_fallbacks(self):
        assert detect_value("Waiting Room") == TextValue("Waiting Room")
        assert detect_value("20 min each") == TextValue("20 min each")
        assert detect_value("3.5.2") == TextValue("3.5.2")
        assert detect_value("") == TextValue("")

    def test_exponent_notation_is_text(self):
        # Scientific notation is not part of the value grammar.
        assert detect_value("1e5") == TextValue("1e5")


class TestFormatting:
    def test_integral_numbers_drop_the_point(self):
        assert format_number(20.0) == "20"
        assert format_number(-3.0) == "-3"

    def test_fractional_numbers_keep_repr(self):
        assert format_number(0.5) == "0.5"
        assert format_number(12.25) == "12.25"

    def test_value_with_unit(self):
        assert format_value(NumericValue(20.0, "min")) == "20 min"
        assert format_value(TextValue("Nurse")) == "Nurse"

    @given(st.floats(min_value=-1e9, max_value=1e9, allow_nan=False)
           .filter(lambda v: v == 0 or abs(v) >= 1e-4),
           st.sampled_from([None, "min", "s", "€"]))
    @settings(max_examples=200, deadline=None)
    def test_format_detect_round_trip(self, value, unit):
        original = NumericValue(value, unit)
        assert detect_value(format_value(original)) == NumericValue(float(format_number(value)), unit)
        assert float(format_number(value)) == pytest.approx(value, rel=0, abs=0)


class TestParseFixtures:
    def test_blood_structure(self, blood_model):
        assert blood_model.name == "Blood Analysis"
        assert [n.id for n in blood_model.nodes] == [
            "start", "t1", "t2", "p1.split", "t3", "t4", "p1.join", "t5", "t6", "end"]
        assert blood_model.node("p1.split").kind is NodeKind.PARALLEL_SPLIT
        assert blood_model.node("t4").arguments["Cost"] == NumericValue(1.0, "€")
        assert blood_model.node("t3").arguments["Location"] == TextValue("Laboratory")
        assert validate(blood_model) == []

    def test_order_structure(self, order_model):
        assert order_model.name == "Order Process"
        kinds = [n.kind for n in order_model.nodes]
        assert kinds.count(NodeKind.XOR_SPLIT) == 1
        assert kinds.count(NodeKind.PARALLEL_SPLIT) == 1
        assert validate(order_model) == []

    def test_empty_process(self):
        model, diagnostics = parse(fixture_text("empty.xml"))
        assert [n.id for n in model.nodes] == ["start", "end"]
        assert diagnostics.warnings == ()

    def test_deep_nesting(self):
        model, _ = parse(fixture_text("deep_nesting.xml"))
        assert validate(model) == []
        kinds = [n.kind for n in model.nodes]
        assert kinds.count(NodeKind.LOOP_HEAD) == 3
        assert kinds.count(NodeKind.PARALLEL_SPLIT) == 3
        assert kinds.count(NodeKind.XOR_SPLIT) == 2

    def test_source_name_recorded(self):
        _, diagnostics = parse("<description/>", source_name="input.xml")
        assert diagnostics.source_name == "input.xml"


class TestConditionFolding:
    def test_condition_becomes_label_of_unlabelled_first_node(self):
        model, diagnostics = parse(
            "<description>\n"
            "  <choose>\n"
            "    <alternative condition='payment ok'><call id='a'/></alternative>\n"
            "    <alternative><call id='b' label='B'/></alternative>\n"
            "  </choose>\n"
            "</description>\n"
        )
        assert model.node("a").label == "payment ok"
        assert diagnostics.warnings == ()

    def test_condition_conflicting_with_label_warns(self):
        _, diagnostics = parse(
            "<description>\n"
            "  <choose>\n"
            "    <alternative condition='c'><call id='a' label='A'/></alternative>\n"
            "    <alternative><call id='b'/></alternative>\n"
            "  </choose>\n"
            "</description>\n"
        )
        assert len(diagnostics.warnings) == 1
        line, message = diagnostics.warnings[0]
        assert line == 3
        assert "label" in message

    def test_condition_on_empty_alternative_warns(self):
        _, diagnostics = parse(
            "<description>\n"
            "  <choose>\n"
            "    <alternative condition='never'/>\n"
            "    <alternative><call id='a'/></alternative>\n"
            "  </choose>\n"
            "</description>\n"
        )
        assert any("empty alternative" in msg for _, msg in diagnostics.warnings)


class TestErrors:
    def test_malformed_xml(self):
        with pytest.raises(MalformedXml) as err:
            parse("<description>\n  <call\n")
        assert err.value.line is not None
        assert "line" in str(err.value)

    def test_unknown_element(self):
        with pytest.raises(UnknownElement) as err:
            parse("<description>\n  <bogus/>\n</description>\n")
        assert err.value.line == 2

    def test_unknown_root(self):
        with pytest.raises(UnknownElement):
            parse("<process/>")

    def test_known_element_out_of_place(self):
        with pytest.raises(UnbalancedBlock) as err:
            parse("<description>\n  <parallel_branch/>\n</description>\n")
        assert err.value.line == 2

    def test_alternative_inside_parallel(self):
        with pytest.raises(UnbalancedBlock):
            parse("<description><parallel><alternative/></parallel></description>")

    def test_branchless_gateway(self):
        with pytest.raises(UnbalancedBlock):
            parse("<description><parallel/></description>")
        with pytest.raises(UnbalancedBlock):
            parse("<description><choose/></description>")

    def test_stray_text(self):
        with pytest.raises(InvalidDocument):
            parse("<description>hello<call id='a'/></description>")

    def test_argument_needs_name_and_value(self):
        with pytest.raises(InvalidDocument):
            parse("<description><call id='a'><argument name='X'/></call></description>")

    def test_duplicate_id_reports_both_lines(self):
        with pytest.raises(InvalidDocument) as err:
            parse("<description>\n  <call id='a'/>\n  <call id='a'/>\n</description>\n")
        assert err.value.line == 3
        assert "line 2" in str(err.value)

    def test_duplicate_id_against_start_node(self):
        with pytest.raises(InvalidDocument):
            parse("<description><call id='start'/></description>")

    def test_entity_declarations_rejected(self):
        text = (
            "<?xml version='1.0'?>\n"
            "<!DOCTYPE description [<!ENTITY x 'boom'>]>\n"
            "<description><call id='a' label='&x;'/></description>\n"
        )
        with pytest.raises(InvalidDocument):
            parse(text)

    def test_errors_are_parse_errors(self):
        for bad in ("<", "<description><bogus/></description>",
                    "<description><parallel/></description>"):
            with pytest.raises(ParseError):
                parse(bad)


class TestWarnings:
    def test_unknown_attribute_warns(self):
        _, diagnostics = parse("<description>\n  <call id='a' color='red'/>\n</description>\n")
        assert len(diagnostics.warnings) == 1
        line, message = diagnostics.warnings[0]
        assert line == 2
        assert "color" in message

    def test_repeated_argument_keeps_last(self):
        model, diagnostics = parse(
            "<description><call id='a'>"
            "<argument name='X' value='1'/><argument name='X' value='2'/>"
            "</call></description>"
        )
        assert model.node("a").arguments["X"] == NumericValue(2.0)
        assert len(diagnostics.warnings) == 1


class TestSerialize:
    def test_header_and_trailing_newline(self, blood_model):
        text = serialize(blood_model)
        assert text.startswith('<?xml version="1.0" encoding="UTF-8"?>\n')
        assert text.endswith("\n")

    def test_empty_model_form(self):
        model, _ = parse("<description/>")
        assert serialize(model) == '<?xml version="1.0" encoding="UTF-8"?>\n<description/>\n'

    def test_name_attr_only_when_non_default(self):
        model, _ = parse("<description><call id='a'/></description>")
        assert "<description>" in serialize(model)
        named, _ = parse("<description name='X'><call id='a'/></description>")
        assert '<description name="X">' in serialize(named)

    def test_ids_always_explicit(self):
        model, _ = parse("<description><call/><loop><call/></loop></description>")
        text = serialize(model)
        assert 'id="t1"' in text and 'id="t2"' in text
        assert 'id="l1.head"' in text and 'tail="l1.tail"' in text

    def test_attribute_escaping(self):
        model, _ = parse('<description><call id="a" label="a &lt;b&gt; &amp; c"/></description>')
        text = serialize(model)
        assert "a &lt;b&gt; &amp; c" in text
        reparsed, _ = parse(text)
        assert reparsed.node("a").label == "a <b> & c"

    def test_round_trip_all_fixtures(self):
        for name in ("blood_analysis.xml", "order_process.xml", "empty.xml",
                     "deep_nesting.xml"):
            model, _ = parse(fixture_text(name))
            text = serialize(model)
            again, _ = parse(text)
            assert again == model, name
            assert serialize(again) == text, name

    def test_round_trip_generated_models(self):
        for seed in range(40):
            nodes = 1 + seed % 17
            model = generate(GenSpec(nodes=nodes,
                                     control_flow_elements=min(seed % 6, nodes),
                                     arguments=seed % 4, seed=seed))
            again, _ = parse(serialize(model))
            assert again == model


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(["Analysis", "Review", "Sign-off"]), min_size=0, max_size=5),
       st.integers(min_value=0, max_value=2**32))
def test_round_trip_random_chains_with_arguments(labels, seed):
    bags = []
    for i, _ in enumerate(labels):
        bags.append({
            "Cost": NumericValue(float(seed % 97) + i, "€"),
            "Phase": TextValue(f"phase {i}"),
        })
    tree = [blocks.TaskBlock(label=label, arguments=bag)
            for label, bag in zip(labels, bags)]
    model = blocks.build_model(tree)
    again, _ = parse(serialize(model))
    assert again == model

import pytest
from hypothesis import given, settings, strategies as st

from compatpair.dsl import (ACTION_KINDS, ScenarioDoc, parse, serialize,
                            validate)
from compatpair.errors import ScenarioParseError, ScenarioValidationError

MINIMAL = """
# minimal quantum-plane scenario
[scenario]
name = demo

[algebra]
gamma = 0.25

[action]
kind = qplane
alpha = 0.5
beta = 0.5

[checks]
compat = 1e-6
"""


class TestParse:
    def test_minimal_document(self):
        doc = parse(MINIMAL)
        assert doc.get("scenario", "name") == "demo"
        assert doc.get("action", "kind") == "qplane"
        assert doc.sections["checks"]["compat"] == (1e-6,)

    def test_comments_and_blanks(self):
        doc = parse("# top\n\n[scenario]\nname = a # trailing\n")
        assert doc.get("scenario", "name") == "a"

    def test_duplicate_key_rejected(self):
        with pytest.raises(ScenarioParseError) as e:
            parse("[scenario]\nname = a\nname = b\n")
        assert e.value.line == 3

    def test_duplicate_section_rejected(self):
        with pytest.raises(ScenarioParseError):
            parse("[scenario]\n[scenario]\n")

    def test_entry_outside_section(self):
        with pytest.raises(ScenarioParseError) as e:
            parse("name = a\n")
        assert e.value.line == 1

    def test_location_reported(self):
        with pytest.raises(ScenarioParseError) as e:
            parse("[scenario]\nname = \x00bad\n")
        assert e.value.line == 2
        assert e.value.column > 1

    def test_bytes_accepted(self):
        doc = parse(MINIMAL.encode())
        assert doc.get("scenario", "name") == "demo"

    def test_invalid_utf8(self):
        with pytest.raises(ScenarioParseError):
            parse(b"\xff\xfe[scenario]")

    @settings(max_examples=300, deadline=None)
    @given(st.binary(max_size=200))
    def test_total_on_arbitrary_bytes(self, blob):
        try:
            parse(blob)
        except ScenarioParseError:
            pass  # the only admissible failure mode

    @settings(max_examples=300, deadline=None)
    @given(st.text(max_size=200))
    def test_total_on_arbitrary_text(self, text):
        try:
            parse(text)
        except ScenarioParseError:
            pass


def docs():
    ident = st.from_regex(r"[A-Za-z][A-Za-z0-9_-]{0,8}", fullmatch=True)
    atom = st.one_of(ident, st.integers(-1000, 1000),
                     st.floats(allow_nan=False, allow_infinity=False,
                               min_value=-1e6, max_value=1e6))
    entry = st.tuples(ident, st.lists(atom, min_size=1, max_size=3))
    section = st.lists(entry, min_size=0, max_size=4,
                       unique_by=lambda kv: kv[0])
    return st.dictionaries(ident, section, min_size=1, max_size=4).map(
        lambda d: ScenarioDoc({s: dict(kvs) for s, kvs in
                               ((s, [(k, tuple(v)) for k, v in kvs])
                                for s, kvs in d.items())}))


class TestRoundTrip:
    @settings(max_examples=150, deadline=None)
    @given(docs())
    def test_serialize_parse_identity(self, doc):
        text = serialize(doc)
        again = parse(text)
        assert again == doc
        assert parse(serialize(again)) == again

    def test_corpus_round_trip(self):
        from compatpair.cli import corpus_dir
        for path in sorted(corpus_dir().rglob("*.cp")):
            doc = parse(path.read_bytes())
            assert parse(serialize(doc)) == doc


class TestValidate:
    def test_minimal_validates_with_defaults(self):
        sc = validate(parse(MINIMAL))
        assert sc.kind == "s5"
        assert sc.grid_n == 256 and sc.box == 8.0 and sc.hermite == 32
        assert sc.checks["compat"] == 1e-6

    def test_constraint_violation(self):
        bad = MINIMAL.replace("beta = 0.5", "beta = 0.4")
        with pytest.raises(ScenarioValidationError) as e:
            validate(parse(bad))
        assert any("gamma" in msg for msg in e.value.errors)

    def test_b4_requires_half_shift(self):
        text = """
[scenario]
name = bad-b4
[algebra]
gamma = 0.25
[action]
kind = b4
alpha = 0.5
beta = 0.5
"""
        with pytest.raises(ScenarioValidationError) as e:
            validate(parse(text))
        assert any("gamma + 1/2" in msg for msg in e.value.errors)

    def test_unknown_kind_lists_valid_ones(self):
        text = "[scenario]\nname = a\n[action]\nkind = bogus\n"
        with pytest.raises(ScenarioValidationError) as e:
            validate(parse(text))
        msg = "; ".join(e.value.errors)
        for kind in ACTION_KINDS:
            assert kind in msg

    def test_errors_are_aggregated(self):
        text = "[scenario]\nseed = 2\n[action]\nkind = bogus\n[bogus-section]\nz = 1\n"
        with pytest.raises(ScenarioValidationError) as e:
            validate(parse(text))
        assert len(e.value.errors) >= 3

    def test_wrong_corrupt_tag(self):
        text = MINIMAL.replace("kind = qplane", "kind = qplane\ncorrupt = flip-sign")
        with pytest.raises(ScenarioValidationError) as e:
            validate(parse(text))
        assert any("control" in m for m in e.value.errors)

    def test_corpus_validates(self):
        from compatpair.cli import corpus_dir
        count = 0
        for path in sorted(corpus_dir().rglob("*.cp")):
            validate(parse(path.read_bytes()))
            count += 1
        assert count >= 21

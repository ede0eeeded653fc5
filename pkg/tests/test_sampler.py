"""Sampler behavior: prompt construction and fidelity, config validation,
the stub backend's determinism and gap handling, repair and distinctness."""
import json
import math
from pathlib import Path

import pytest

from facet.coverage import coverage, distinctness_signature, render_gap_instructions
from facet.sampler import (GENERATION_QUERY, MalformedResponse, StubBackend,
                           build_prompt, load_template, sample, stub_backend,
                           validate_config)
from facet.schema import (ComponentSchema, ImpactScore, PropertyKind,
                          PropertySpec, SamplingRequest, ViContextKind,
                          ViContextOccurrence, source_digest)

DATA = Path(__file__).parent / "data"


def request_for(product_card, count=4, gaps="", instruction=None, existing=()):
    schema, impacts = product_card
    return SamplingRequest(schema=schema, impacts=tuple(impacts),
                           existing=tuple(existing), coverage_gaps=gaps,
                           user_instruction=instruction, count=count)


class ScriptedBackend:
    """Returns canned responses in order; records every call."""

    def __init__(self, *responses):
        self.responses = list(responses)
        self.calls = []

    def complete(self, system_prompt, user_message, json_mode=True):
        self.calls.append((system_prompt, user_message))
        if not self.responses:
            raise AssertionError("backend called more times than scripted")
        return self.responses.pop(0)


class TestBuildPrompt:
    def test_blanked_slots_reproduce_template_byte_for_byte(self, product_card):
        req = request_for(product_card)
        assert build_prompt(req, blank_slots=True) == load_template()

    def test_filled_prompt_content(self, product_card):
        req = request_for(product_card, count=4)
        prompt = build_prompt(req)
        assert "Component: ProductCard" in prompt
        assert "Has Children: true" in prompt
        assert "(where N = 4)" in prompt
        assert "https://placehold.co/{width}x{height}" in prompt
        high = prompt.split("*High Visual Impact Properties:*")[1] \
                     .split("*Medium Visual Impact Properties:*")[0]
        assert "- variant (categorical)" in high
        assert "- showBadge (boolean)" in high
        assert "- imageUrl (string)" in high
        assert "- title (string)" not in high
        medium = prompt.split("*Medium Visual Impact Properties:*")[1] \
                       .split("*Low Visual Impact Properties:*")[0]
        assert "- title (string)" in medium
        assert "- price (number)" in medium

    def test_usage_examples_show_highest_base_contexts(self, product_card):
        prompt = build_prompt(request_for(product_card))
        assert "- Usage Examples:" in prompt
        assert '[structure] variant === "detailed"' in prompt

    def test_empty_gaps_render_none_line(self, product_card):
        prompt = build_prompt(request_for(product_card, gaps=""))
        section = prompt.split("**Coverage Requirements**")[1] \
                        .split("**User Instructions**")[0]
        assert section.strip() == "(none)"

    def test_instruction_rendered_verbatim(self, product_card):
        text = "Arabic notifications with images"
        prompt = build_prompt(request_for(product_card, instruction=text))
        assert prompt.split("**User Instructions**")[1].strip() == text

    def test_gap_text_fills_coverage_slot(self, product_card):
        gaps = '- Property "variant": generate at least one variation with value "detailed"'
        prompt = build_prompt(request_for(product_card, gaps=gaps))
        assert gaps in prompt


class TestValidateConfig:
    def test_valid_config_accepted(self, product_card):
        schema, _ = product_card
        config, violations = validate_config(schema, {
            "name": "Detailed", "description": "d",
            "properties": {"variant": "detailed", "title": "Ceramic Mug",
                           "price": 24,
                           "imageUrl": "https://placehold.co/600x400"}})
        assert violations == []
        assert config.assignments["price"] == 24

    def test_corpus_produces_documented_reasons(self, product_card):
        schema, _ = product_card
        corpus = json.loads((DATA / "malformed_responses.json").read_text())
        for entry in corpus["malformed"]:
            if "duplicate_pair" in entry:
                continue
            config, violations = validate_config(schema, entry["config"])
            assert config is None, entry["case"]
            for expected in entry["expect"]:
                assert any(expected in v for v in violations), \
                    f"{entry['case']}: {expected!r} not in {violations}"

    def test_coercions(self, product_card):
        schema, _ = product_card
        corpus = json.loads((DATA / "malformed_responses.json").read_text())
        for entry in corpus["coerced"]:
            config, violations = validate_config(schema, entry["config"])
            assert violations == [], entry["case"]
            for key, value in entry["value"].items():
                assert config.assignments[key] == value

    def test_unknown_property_dropped_with_warning(self, product_card, caplog):
        schema, _ = product_card
        with caplog.at_level("WARNING", logger="facet.sampler"):
            config, violations = validate_config(schema, {
                "name": "X", "description": "",
                "properties": {"title": "T", "price": 1, "color": "red"}})
        assert violations == []
        assert "color" not in config.assignments
        assert any("unknown property" in r.message for r in caplog.records)

    def test_node_property_dropped(self, product_card, caplog):
        schema, _ = product_card
        with caplog.at_level("WARNING", logger="facet.sampler"):
            config, _ = validate_config(schema, {
                "name": "X", "description": "",
                "properties": {"title": "T", "price": 1, "children": "inner"}})
        assert "children" not in config.assignments


class TestStubBackend:
    def test_pure_in_prompt_and_seed(self, product_card):
        prompt = build_prompt(request_for(product_card))
        stub = stub_backend(7)
        assert stub.complete(prompt, GENERATION_QUERY) == \
            stub.complete(prompt, GENERATION_QUERY)
        assert StubBackend(7).complete(prompt, GENERATION_QUERY) == \
            stub.complete(prompt, GENERATION_QUERY)

    def test_different_seed_changes_output(self, product_card):
        prompt = build_prompt(request_for(product_card))
        assert StubBackend(1).complete(prompt, GENERATION_QUERY) != \
            StubBackend(2).complete(prompt, GENERATION_QUERY)

    def test_gap_first_rule(self, product_card):
        gaps = ('- Property "variant": generate at least one variation '
                'with value "detailed"')
        prompt = build_prompt(request_for(product_card, gaps=gaps))
        configs = json.loads(StubBackend(3).complete(prompt, GENERATION_QUERY))
        assert configs[0]["properties"]["variant"] == "detailed"

    def test_respects_count(self, product_card):
        prompt = build_prompt(request_for(product_card, count=7))
        configs = json.loads(StubBackend(0).complete(prompt, GENERATION_QUERY))
        assert len(configs) == 7


class TestSample:
    def test_stub_round_accepts_type_correct_distinct_configs(self, product_card):
        schema, impacts = product_card
        outcome = sample(request_for(product_card, count=4), stub_backend(1))
        assert len(outcome.accepted) == 4
        assert outcome.rejected == []
        signatures = {distinctness_signature(schema, impacts, c)
                      for c in outcome.accepted}
        assert len(signatures) == 4
        for config in outcome.accepted:
            _, violations = validate_config(schema, config.to_dict())
            assert violations == []

    def test_duplicate_of_existing_dropped_by_signature(self, product_card):
        schema, impacts = product_card
        corpus = json.loads((DATA / "malformed_responses.json").read_text())
        pair = next(e for e in corpus["malformed"] if "duplicate_pair" in e)
        backend = ScriptedBackend(json.dumps(pair["duplicate_pair"]))
        outcome = sample(request_for(product_card, count=2), backend)
        assert len(outcome.accepted) == 1
        assert len(outcome.rejected) == 1
        raw, reasons = outcome.rejected[0]
        assert any("non-distinct" in r for r in reasons)
        # signature-equality oracle: f-mapped impactful values coincide
        a, b = (validate_config(schema, c)[0] for c in pair["duplicate_pair"])
        assert distinctness_signature(schema, impacts, a) == \
            distinctness_signature(schema, impacts, b)

    def test_repair_round_fixes_invalid_config(self, product_card):
        bad = [{"name": "Fixable", "description": "",
                "properties": {"title": "Mug", "price": "cheap"}}]
        fixed = [{"name": "Fixable", "description": "",
                  "properties": {"title": "Mug", "price": 9}}]
        backend = ScriptedBackend(json.dumps(bad), json.dumps(fixed))
        outcome = sample(request_for(product_card, count=1), backend)
        assert outcome.repaired_count == 1
        assert [c.name for c in outcome.accepted] == ["Fixable"]
        assert outcome.rejected == []
        assert "price: expected number" in backend.calls[1][1]

    def test_failed_repair_reports_documented_reason(self, product_card):
        bad = [{"name": "Stubborn", "description": "",
                "properties": {"title": "Mug", "price": "cheap"}}]
        backend = ScriptedBackend(json.dumps(bad), json.dumps(bad))
        outcome = sample(request_for(product_card, count=1), backend)
        assert outcome.accepted == []
        raw, reasons = outcome.rejected[0]
        assert reasons == ["price: expected number"]

    def test_malformed_after_reask_raises(self, product_card):
        backend = ScriptedBackend("not json at all", "still not json")
        with pytest.raises(MalformedResponse):
            sample(request_for(product_card, count=1), backend)

    def test_reask_recovers_from_garbage_first_reply(self, product_card):
        good = [{"name": "Ok", "description": "",
                 "properties": {"title": "Mug", "price": 2}}]
        backend = ScriptedBackend("garbage", json.dumps(good))
        outcome = sample(request_for(product_card, count=1), backend)
        assert [c.name for c in outcome.accepted] == ["Ok"]

    def test_wrapped_object_response_accepted(self, product_card):
        good = {"configurations": [{"name": "Ok", "description": "",
                                    "properties": {"title": "Mug", "price": 2}}]}
        backend = ScriptedBackend(json.dumps(good))
        outcome = sample(request_for(product_card, count=1), backend)
        assert len(outcome.accepted) == 1

    def test_name_collision_with_existing_gets_suffix(self, product_card):
        schema, impacts = product_card
        existing = [sample(request_for(product_card, count=1),
                           stub_backend(5)).accepted[0]]
        response = [{"name": existing[0].name, "description": "",
                     "properties": {"title": "Other", "price": 77,
                                    "variant": "detailed", "showBadge": True,
                                    "imageUrl": "https://placehold.co/10x10"}}]
        backend = ScriptedBackend(json.dumps(response))
        outcome = sample(request_for(product_card, count=1, existing=existing),
                         backend)
        if outcome.accepted:
            assert outcome.accepted[0].name != existing[0].name


def synthetic_component(n_allowed=5):
    values = tuple(f"v{i}" for i in range(n_allowed))
    specs = (
        PropertySpec("mode", PropertyKind.CATEGORICAL, allowed_values=values),
        PropertySpec("active", PropertyKind.BOOLEAN),
    )
    schema = ComponentSchema(component_name="Synth", has_children=False,
                             properties=specs, source_digest=source_digest("s"))
    impacts = tuple(
        ImpactScore.compute(p.name, [ViContextOccurrence(
            property=p.name, kind=ViContextKind.STRUCTURE, span=(0, 1),
            snippet="x")])
        for p in specs)
    return schema, impacts


class TestGapClosureLoop:
    @pytest.mark.parametrize("n_allowed,count", [(5, 2), (4, 4), (2, 1)])
    def test_closure_within_bound(self, n_allowed, count):
        schema, impacts = synthetic_component(n_allowed)
        bound = math.ceil(n_allowed / count) + 1
        existing = []
        aggregates = [coverage(schema, impacts, existing).aggregate]
        for round_index in range(bound):
            report = coverage(schema, impacts, existing)
            if report.fully_covered:
                break
            gaps = render_gap_instructions(report, impacts)
            req = SamplingRequest(schema=schema, impacts=impacts,
                                  existing=tuple(existing), coverage_gaps=gaps,
                                  user_instruction=None, count=count)
            outcome = sample(req, stub_backend(11 + round_index))
            existing.extend(outcome.accepted)
            aggregates.append(coverage(schema, impacts, existing).aggregate)
        final = coverage(schema, impacts, existing)
        assert final.fully_covered, f"not covered after {bound} rounds"
        increasing = [b - a for a, b in zip(aggregates, aggregates[1:])]
        assert all(d > 0 for d in increasing), aggregates

"""Robustness sweep: every fixture component goes through the full pipeline
(analyze, sample with the stub, coverage, emit, extract) without errors."""
import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from facet.cli import main
from facet.coverage import coverage, extract_from_story_source, render_gap_instructions
from facet.impact import analyze_component
from facet.sampler import sample, stub_backend, validate_config
from facet.schema import SamplingRequest
from facet.story import emit_json, emit_story_module

FIXTURES = sorted((Path(__file__).parent / "fixtures").glob("*.tsx"))


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
def test_full_pipeline_on_fixture(path):
    source = path.read_text(encoding="utf-8")
    schema, impacts = analyze_component(source, path.name)
    assert schema.properties

    report = coverage(schema, impacts, [])
    gaps = render_gap_instructions(report, impacts)
    req = SamplingRequest(schema=schema, impacts=tuple(impacts), existing=(),
                          coverage_gaps=gaps, user_instruction=None, count=4)
    outcome = sample(req, stub_backend(1))
    assert outcome.accepted, f"{path.name}: stub produced nothing"
    for config in outcome.accepted:
        _, violations = validate_config(schema, config.to_dict())
        assert violations == [], f"{path.name}: {violations}"

    after = coverage(schema, impacts, outcome.accepted)
    assert after.aggregate >= report.aggregate

    doc = emit_json(schema, outcome.accepted)
    assert json.loads(doc)["component"] == schema.component_name
    story = emit_story_module(schema, outcome.accepted)
    extracted = extract_from_story_source(story, f"{path.stem}.stories.tsx")
    assert extracted == list(outcome.accepted)


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
def test_cli_analyze_runs_on_fixture(path):
    result = CliRunner().invoke(main, ["analyze", str(path)])
    assert result.exit_code == 0, result.output

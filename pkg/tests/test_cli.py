"""CLI behavior: output shapes, exit codes, deterministic stub generation."""
import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from facet.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
PRODUCT_CARD = str(FIXTURES / "ProductCard.tsx")


@pytest.fixture()
def runner():
    return CliRunner()


class TestAnalyze:
    def test_table_lists_scores(self, runner):
        result = runner.invoke(main, ["analyze", PRODUCT_CARD])
        assert result.exit_code == 0
        line = next(l for l in result.output.splitlines()
                    if l.startswith("variant"))
        assert "118.13" in line and "High" in line

    def test_json_report(self, runner):
        result = runner.invoke(main, ["analyze", PRODUCT_CARD, "--json"])
        assert result.exit_code == 0
        body = json.loads(result.output)
        assert body["schema"]["component_name"] == "ProductCard"
        assert len(body["impacts"]) == 7

    def test_missing_file_exits_1(self, runner):
        result = runner.invoke(main, ["analyze", "no/such/file.tsx"])
        assert result.exit_code == 1

    def test_parse_error_exits_1(self, runner, tmp_path):
        bad = tmp_path / "Bad.tsx"
        bad.write_text("export const C = () => <div><b></div>;")
        result = runner.invoke(main, ["analyze", str(bad)])
        assert result.exit_code == 1
        assert "error:" in result.output


class TestGenerate:
    def test_stub_generation_is_deterministic(self, runner, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            result = runner.invoke(main, [
                "generate", PRODUCT_CARD, "--count", "4", "--stub",
                "--seed", "1", "--out", str(out)])
            assert result.exit_code == 0, result.output
        json_a = (out_a / "ProductCard.variations.json").read_text()
        json_b = (out_b / "ProductCard.variations.json").read_text()
        assert json_a == json_b
        story_a = (out_a / "ProductCard.stories.tsx").read_text()
        story_b = (out_b / "ProductCard.stories.tsx").read_text()
        assert story_a == story_b

    def test_second_round_merges_into_existing(self, runner, tmp_path):
        for round_seed in ("1", "2"):
            result = runner.invoke(main, [
                "generate", PRODUCT_CARD, "--count", "2", "--stub",
                "--seed", round_seed, "--out", str(tmp_path)])
            assert result.exit_code == 0, result.output
        doc = json.loads((tmp_path / "ProductCard.variations.json").read_text())
        assert len(doc["variations"]) == 4

    def test_all_duplicates_exit_2(self, runner, tmp_path):
        # Same seed, saturated coverage: the repeat round yields only
        # signature duplicates, which are rejected.
        first = runner.invoke(main, [
            "generate", PRODUCT_CARD, "--count", "6", "--stub", "--seed", "3",
            "--out", str(tmp_path)])
        assert first.exit_code == 0, first.output
        second = runner.invoke(main, [
            "generate", PRODUCT_CARD, "--count", "6", "--stub", "--seed", "3",
            "--out", str(tmp_path)])
        third = runner.invoke(main, [
            "generate", PRODUCT_CARD, "--count", "6", "--stub", "--seed", "3",
            "--out", str(tmp_path)])
        # by the third identical round the prompt and seed repeat exactly,
        # so every config is a duplicate
        assert third.exit_code == 2, third.output
        assert "rejected" in third.output


class TestCoverage:
    def test_fully_covered_exits_0(self, runner, tmp_path):
        gen = runner.invoke(main, [
            "generate", PRODUCT_CARD, "--count", "4", "--stub", "--seed", "1",
            "--out", str(tmp_path)])
        assert gen.exit_code == 0
        for target in ("ProductCard.variations.json", "ProductCard.stories.tsx"):
            result = runner.invoke(main, [
                "coverage", PRODUCT_CARD, "--stories", str(tmp_path / target)])
            assert result.exit_code == 0, (target, result.output)
            assert "fully covered: yes" in result.output

    def test_incomplete_coverage_exits_3(self, runner, tmp_path):
        stories = tmp_path / "one.variations.json"
        doc = {"component": "ProductCard", "source_digest": "0" * 64,
               "variations": [{"name": "Only", "description": "",
                               "properties": {"title": "T", "price": 1,
                                              "variant": "summary"}}]}
        stories.write_text(json.dumps(doc))
        result = runner.invoke(main, [
            "coverage", PRODUCT_CARD, "--stories", str(stories)])
        assert result.exit_code == 3
        assert "fully covered: no" in result.output

    def test_unreadable_stories_exit_1(self, runner):
        result = runner.invoke(main, [
            "coverage", PRODUCT_CARD, "--stories", "missing.json"])
        assert result.exit_code == 1

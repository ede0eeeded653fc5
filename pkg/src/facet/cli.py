"""Command line interface: analyze, generate, coverage, serve.

Exit codes: 0 success, 1 I/O or parse errors, 2 generate finished with
rejected configs, 3 coverage incomplete.
"""
from __future__ import annotations

import json
import os
import re
import sys
from pathlib import Path
from typing import Optional

import click

from .coverage import (NotAStoryFile, coverage, extract_from_story_source,
                       render_gap_instructions)
from .impact import analyze_component, impact_report
from .sampler import (BackendUnavailable, MalformedResponse, QuotaExceeded,
                      RemoteBackend, StubBackend, sample)
from .schema import SamplingRequest
from .story import emit_json, emit_story_module, parse_variations_json
from .tsx import NoComponentFound, TsxSyntaxError

ENV_API_KEY = "FACET_LLM_API_KEY"
ENV_BASE_URL = "FACET_LLM_BASE_URL"
ENV_MODEL = "FACET_LLM_MODEL"
DEFAULT_BASE_URL = "https://api.openai.com/v1"
DEFAULT_MODEL = "gpt-4o"
CONFIG_FILE = "facet.toml"


def _fail(message: str, code: int = 1):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_source(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        _fail(f"cannot read {path}: {exc}")


def _analyze_file(path: str):
    source = _read_source(path)
    try:
        return source, analyze_component(source, path)
    except TsxSyntaxError as exc:
        _fail(str(exc))
    except NoComponentFound as exc:
        _fail(str(exc))


def _load_toml_config(path: Path) -> dict:
    try:
        import tomllib as toml_reader  # Python >= 3.11
    except ImportError:
        try:
            import tomli as toml_reader  # type: ignore
        except ImportError:
            toml_reader = None
    if toml_reader is not None:
        with open(path, "rb") as fh:
            return toml_reader.load(fh)
    # Minimal fallback: [section] plus key = "value" / key = value lines.
    data: dict = {}
    section = data
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[([^\]]+)\]", line)
        if m:
            section = data.setdefault(m.group(1), {})
            continue
        m = re.fullmatch(r"([\w.-]+)\s*=\s*(.+)", line)
        if m:
            value = m.group(2).strip()
            if value and value[0] in "\"'":
                value = value[1:-1]
            section[m.group(1)] = value
    return data


def _llm_config(api_key: Optional[str], base_url: Optional[str],
                model: Optional[str]) -> dict:
    """Flags > environment > facet.toml > defaults."""
    file_cfg = {}
    config_path = Path(CONFIG_FILE)
    if config_path.is_file():
        file_cfg = _load_toml_config(config_path).get("llm", {})
    return {
        "api_key": api_key or os.environ.get(ENV_API_KEY)
        or file_cfg.get("api_key"),
        "base_url": base_url or os.environ.get(ENV_BASE_URL)
        or file_cfg.get("base_url") or DEFAULT_BASE_URL,
        "model": model or os.environ.get(ENV_MODEL)
        or file_cfg.get("model") or DEFAULT_MODEL,
    }


def _make_backend(stub: bool, seed: int, api_key: Optional[str],
                  base_url: Optional[str], model: Optional[str]):
    if stub:
        return StubBackend(seed)
    config = _llm_config(api_key, base_url, model)
    if not config["api_key"]:
        _fail(f"no API key: pass --api-key, set {ENV_API_KEY}, or add "
              f"[llm] api_key to {CONFIG_FILE} (or use --stub)")
    return RemoteBackend(base_url=config["base_url"],
                         api_key=config["api_key"], model=config["model"])


@click.group()
@click.version_option(package_name="facet")
def main():
    """Design-space exploration for parameterized UI components."""


@main.command()
@click.argument("file", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="Emit the JSON report.")
def analyze(file: str, as_json: bool):
    """Rank a component's properties by visual impact."""
    _, (schema, impacts) = _analyze_file(file)
    if as_json:
        click.echo(json.dumps({"schema": schema.to_dict(),
                               "impacts": impact_report(impacts)},
                              indent=2, ensure_ascii=False))
        return
    click.echo(f"component: {schema.component_name}  "
               f"(properties: {len(schema.properties)}, "
               f"impactful: {sum(1 for s in impacts if s.impactful)})")
    header = f"{'property':<20} {'n':>3} {'base':>5} {'impact':>8}  " \
             f"{'level':<6} impactful"
    click.echo(header)
    click.echo("-" * len(header))
    for score in impacts:
        click.echo(f"{score.property:<20} {score.n:>3} {score.base:>5.0f} "
                   f"{score.impact:>8.2f}  {score.level.value:<6} "
                   f"{'yes' if score.impactful else 'no'}")


@main.command()
@click.argument("file", type=click.Path())
@click.option("--count", type=click.IntRange(1, 50), default=4,
              help="Variations to request this round.")
@click.option("--instruction", default=None,
              help="Steering instruction passed to the sampler.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              default=".", help="Output directory (merges with prior rounds).")
@click.option("--stub", is_flag=True, help="Use the deterministic offline sampler.")
@click.option("--seed", type=int, default=0, help="Stub sampler seed.")
@click.option("--api-key", default=None)
@click.option("--base-url", default=None)
@click.option("--model", default=None)
def generate(file: str, count: int, instruction: Optional[str], out_dir: str,
             stub: bool, seed: int, api_key: Optional[str],
             base_url: Optional[str], model: Optional[str]):
    """Sample distinguishing variations and write JSON + story module."""
    _, (schema, impacts) = _analyze_file(file)
    backend = _make_backend(stub, seed, api_key, base_url, model)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / f"{schema.component_name}.variations.json"
    story_path = out / f"{schema.component_name}.stories.tsx"

    existing = []
    if json_path.is_file():
        try:
            _, _, existing = parse_variations_json(
                json_path.read_text(encoding="utf-8"))
        except (ValueError, KeyError) as exc:
            _fail(f"cannot parse existing {json_path}: {exc}")

    report = coverage(schema, impacts, existing)
    gaps = render_gap_instructions(report, impacts)
    request = SamplingRequest(schema=schema, impacts=tuple(impacts),
                              existing=tuple(existing), coverage_gaps=gaps,
                              user_instruction=instruction, count=count)
    try:
        outcome = sample(request, backend)
    except (BackendUnavailable, QuotaExceeded, MalformedResponse) as exc:
        _fail(str(exc))

    merged = existing + outcome.accepted
    json_path.write_text(emit_json(schema, merged), encoding="utf-8")
    import_path = f"./{Path(file).stem}"
    story_path.write_text(emit_story_module(schema, merged, import_path),
                          encoding="utf-8")

    fresh = coverage(schema, impacts, merged)
    click.echo(f"accepted {len(outcome.accepted)} variation(s) "
               f"({outcome.repaired_count} repaired); total {len(merged)}")
    click.echo(f"aggregate coverage: {fresh.aggregate:.3f} "
               f"(fully covered: {'yes' if fresh.fully_covered else 'no'})")
    click.echo(f"wrote {json_path}")
    click.echo(f"wrote {story_path}")
    if outcome.rejected:
        click.echo(f"rejected {len(outcome.rejected)} config(s):", err=True)
        for raw, reasons in outcome.rejected:
            name = raw.get("name", "<unnamed>") if isinstance(raw, dict) else "<raw>"
            click.echo(f"  - {name}: {'; '.join(reasons)}", err=True)
        sys.exit(2)


@main.command("coverage")
@click.argument("file", type=click.Path())
@click.option("--stories", "stories_path", type=click.Path(), required=True,
              help="Variations JSON or story module to measure.")
@click.option("--json", "as_json", is_flag=True, help="Emit the JSON report.")
def coverage_cmd(file: str, stories_path: str, as_json: bool):
    """Measure design-space coverage of an existing variation set."""
    _, (schema, impacts) = _analyze_file(file)
    text = _read_source(stories_path)
    try:
        if stories_path.endswith(".json"):
            _, _, variations = parse_variations_json(text)
        else:
            variations = extract_from_story_source(text, stories_path)
    except (ValueError, KeyError, NotAStoryFile, TsxSyntaxError) as exc:
        _fail(f"cannot load variations from {stories_path}: {exc}")

    report = coverage(schema, impacts, variations)
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2, ensure_ascii=False))
    else:
        impactful = {s.property for s in impacts if s.impactful}
        click.echo(f"{'property':<20} {'ratio':>6}  missing")
        for entry in report.entries:
            mark = "*" if entry.property in impactful else " "
            missing = "; ".join(entry.missing) or "-"
            click.echo(f"{entry.property:<19}{mark} {entry.ratio:>6.2f}  {missing}")
        click.echo(f"aggregate (impactful): {report.aggregate:.3f}  "
                   f"fully covered: {'yes' if report.fully_covered else 'no'}")
    if not report.fully_covered:
        sys.exit(3)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8710)
@click.option("--stub", is_flag=True, help="Sample with the offline stub.")
@click.option("--seed", type=int, default=0, help="Stub base seed.")
@click.option("--state-dir", type=click.Path(file_okay=False), default=None,
              help="Snapshot sessions here on shutdown and restore on start.")
@click.option("--static-dir", type=click.Path(file_okay=False), default=None,
              help="Serve a built explorer UI from this directory.")
@click.option("--api-key", default=None)
@click.option("--base-url", default=None)
@click.option("--model", default=None)
def serve(host: str, port: int, stub: bool, seed: int,
          state_dir: Optional[str], static_dir: Optional[str],
          api_key: Optional[str], base_url: Optional[str],
          model: Optional[str]):
    """Run the explorer HTTP service."""
    import uvicorn

    from .service import create_app

    backend = None if stub else _make_backend(False, seed, api_key, base_url,
                                              model)
    if static_dir is None:
        # repo layout: src/facet/cli.py -> repo root -> frontend/dist
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if bundled.is_dir():
            static_dir = str(bundled)
    app = create_app(backend=backend, seed=seed, static_dir=static_dir,
                     state_dir=state_dir)
    click.echo(f"facet explorer on http://{host}:{port} "
               f"({'stub' if stub else 'remote'} sampler)")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()

"""HTTP service wiring the analysis/sampling/coverage loop for the explorer
UI and batch clients. Sessions are in-memory, keyed by component name, with
optional JSON snapshots on shutdown.
"""
from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from .coverage import coverage, render_gap_instructions
from .impact import analyze_component, impact_report
from .sampler import (BackendUnavailable, MalformedResponse, QuotaExceeded,
                      SamplerBackend, StubBackend, ValidationOutcome,
                      sample, validate_config)
from .schema import (ComponentSchema, ImpactScore, SamplingRequest,
                     VariationConfig)
from .story import emit_story_module
from .tsx import NoComponentFound, TsxSyntaxError

log = logging.getLogger(__name__)

MAX_SOURCE_BYTES = 1 << 20  # 1 MiB
MAX_GENERATE_COUNT = 20


@dataclass
class Session:
    schema: ComponentSchema
    impacts: Tuple[ImpactScore, ...]
    variations: List[VariationConfig] = field(default_factory=list)
    generate_calls: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def coverage(self):
        return coverage(self.schema, self.impacts, self.variations)


class SessionStore:
    def __init__(self):
        self._sessions: Dict[str, Session] = {}
        self._lock = threading.Lock()

    def put(self, session: Session):
        with self._lock:
            self._sessions[session.schema.component_name] = session

    def get(self, component: str) -> Optional[Session]:
        with self._lock:
            return self._sessions.get(component)

    def names(self) -> List[str]:
        with self._lock:
            return sorted(self._sessions)


class AnalyzeRequest(BaseModel):
    source: str
    filename: str = "Component.tsx"


class GenerateRequest(BaseModel):
    component: str
    count: int = Field(default=4, ge=1, le=MAX_GENERATE_COUNT)
    instruction: Optional[str] = None
    seed: Optional[int] = None


class UpdateRequest(BaseModel):
    properties: Dict[str, Any]
    name: Optional[str] = None
    description: Optional[str] = None


def _error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, **extra})


def _config_dict(session: Session, config: VariationConfig) -> dict:
    order = [p.name for p in session.schema.properties]
    return config.to_dict(key_order=order)


def create_app(backend: Optional[SamplerBackend] = None, seed: int = 0,
               static_dir: Optional[str] = None,
               state_dir: Optional[str] = None,
               enable_cors: bool = True) -> FastAPI:
    """Build the service. With no backend configured, sampling runs against
    the deterministic stub seeded from `seed` plus a per-session counter."""
    store = SessionStore()

    if state_dir:
        from contextlib import asynccontextmanager

        @asynccontextmanager
        async def lifespan(_app: FastAPI):
            _load_snapshots(store, Path(state_dir))
            yield
            _write_snapshots(store, Path(state_dir))

        app = FastAPI(title="facet explorer service", lifespan=lifespan)
    else:
        app = FastAPI(title="facet explorer service")
    app.state.sessions = store
    stub_mode = backend is None

    if enable_cors:
        app.add_middleware(CORSMiddleware, allow_origins=["*"],
                           allow_methods=["*"], allow_headers=["*"])

    # -- analysis ---------------------------------------------------------

    @app.post("/api/analyze")
    def http_analyze(req: AnalyzeRequest):
        if len(req.source.encode("utf-8")) > MAX_SOURCE_BYTES:
            return _error(413, "source exceeds 1 MiB")
        if not req.source.strip():
            return _error(400, "empty source")
        try:
            schema, impacts = analyze_component(req.source, req.filename)
        except TsxSyntaxError as exc:
            return _error(400, exc.message, line=exc.line, col=exc.col)
        except NoComponentFound as exc:
            return _error(400, str(exc))
        session = Session(schema=schema, impacts=tuple(impacts))
        store.put(session)
        return {"schema": schema.to_dict(), "impacts": impact_report(impacts)}

    # -- sampling loop -------------------------------------------------------

    @app.post("/api/generate")
    def http_generate(req: GenerateRequest):
        session = store.get(req.component)
        if session is None:
            return _error(404, f"unknown component '{req.component}'")
        with session.lock:
            report = session.coverage()
            gaps = render_gap_instructions(report, session.impacts)
            request = SamplingRequest(
                schema=session.schema, impacts=session.impacts,
                existing=tuple(session.variations), coverage_gaps=gaps,
                user_instruction=req.instruction, count=req.count)
            round_backend = backend
            if round_backend is None:
                round_seed = req.seed if req.seed is not None \
                    else seed + session.generate_calls
                round_backend = StubBackend(round_seed)
            try:
                outcome = sample(request, round_backend)
            except (BackendUnavailable, ConnectionError) as exc:
                return _error(502, f"sampling backend unavailable: {exc}")
            except QuotaExceeded as exc:
                return _error(502, f"sampling backend quota exceeded: {exc}",
                              quota_exceeded=True)
            except MalformedResponse as exc:
                return _error(422, str(exc))
            session.generate_calls += 1
            session.variations.extend(outcome.accepted)
            fresh = session.coverage()
            return {
                "accepted": [_config_dict(session, c) for c in outcome.accepted],
                "rejected": [{"config": raw, "reasons": reasons}
                             for raw, reasons in outcome.rejected],
                "coverage": fresh.to_dict(),
            }

    # -- coverage ---------------------------------------------------------------

    @app.get("/api/coverage")
    def http_coverage(component: str):
        session = store.get(component)
        if session is None:
            return _error(404, f"unknown component '{component}'")
        with session.lock:
            return session.coverage().to_dict()

    # -- variation editing ---------------------------------------------------

    @app.put("/api/variations/{component}/{name}")
    def http_update_variation(component: str, name: str, req: UpdateRequest):
        session = store.get(component)
        if session is None:
            return _error(404, f"unknown component '{component}'")
        with session.lock:
            index = next((i for i, v in enumerate(session.variations)
                          if v.name == name), None)
            if index is None:
                return _error(404, f"unknown variation '{name}'")
            current = session.variations[index]
            new_name = req.name if req.name is not None else current.name
            if new_name != current.name and \
                    any(v.name == new_name for v in session.variations):
                return _error(409, f"variation '{new_name}' already exists")
            raw = {
                "name": new_name,
                "description": (req.description if req.description is not None
                                else current.description),
                "properties": req.properties,
            }
            config, violations = validate_config(session.schema, raw)
            if config is None:
                return JSONResponse(status_code=422,
                                    content={"error": "invalid variation",
                                             "violations": violations})
            session.variations[index] = config
            return {"config": _config_dict(session, config),
                    "coverage": session.coverage().to_dict()}

    # -- explorer support routes ----------------------------------------------

    @app.get("/api/components")
    def http_components():
        return {"components": store.names(), "stub": stub_mode}

    @app.get("/api/variations/{component}")
    def http_variations(component: str):
        session = store.get(component)
        if session is None:
            return _error(404, f"unknown component '{component}'")
        with session.lock:
            return {
                "component": component,
                "schema": session.schema.to_dict(),
                "impacts": impact_report(session.impacts),
                "variations": [_config_dict(session, v)
                               for v in session.variations],
            }

    @app.get("/api/story/{component}/{name}")
    def http_story(component: str, name: str):
        session = store.get(component)
        if session is None:
            return _error(404, f"unknown component '{component}'")
        with session.lock:
            config = next((v for v in session.variations if v.name == name), None)
            if config is None:
                return _error(404, f"unknown variation '{name}'")
            code = emit_story_module(session.schema, [config])
            return PlainTextResponse(code)

    # -- static explorer UI -------------------------------------------------------

    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="explorer")

    return app


# ---------------------------------------------------------------------------
# snapshots
# ---------------------------------------------------------------------------

def _write_snapshots(store: SessionStore, state_dir: Path):
    state_dir.mkdir(parents=True, exist_ok=True)
    for name in store.names():
        session = store.get(name)
        if session is None:
            continue
        order = [p.name for p in session.schema.properties]
        doc = {
            "schema": session.schema.to_dict(),
            "impacts": impact_report(session.impacts),
            "variations": [v.to_dict(key_order=order)
                           for v in session.variations],
            "generate_calls": session.generate_calls,
        }
        path = state_dir / f"{name}.session.json"
        path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n",
                        encoding="utf-8")
        log.info("session snapshot written: %s", path)


def _load_snapshots(store: SessionStore, state_dir: Path):
    if not state_dir.is_dir():
        return
    for path in sorted(state_dir.glob("*.session.json")):
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
            schema = ComponentSchema.from_dict(doc["schema"])
            impacts = _impacts_from_report(doc.get("impacts", []))
            session = Session(schema=schema, impacts=impacts,
                              generate_calls=doc.get("generate_calls", 0))
            session.variations = [VariationConfig.from_dict(v)
                                  for v in doc.get("variations", [])]
            store.put(session)
            log.info("session snapshot restored: %s", path)
        except (KeyError, ValueError) as exc:
            log.warning("skipping corrupt snapshot %s: %s", path, exc)


def _impacts_from_report(report: List[dict]) -> Tuple[ImpactScore, ...]:
    from .schema import ImpactLevel, ViContextKind, ViContextOccurrence
    scores = []
    for item in report:
        occs = tuple(
            ViContextOccurrence(property=item["property"],
                                kind=ViContextKind(o["kind"]),
                                span=tuple(o["span"]), snippet=o["snippet"])
            for o in item.get("occurrences", ()))
        scores.append(ImpactScore(
            property=item["property"], occurrences=occs, n=item["n"],
            base=item["base"], coefficient=item["coefficient"],
            impact=item["impact"], level=ImpactLevel(item["level"]),
            impactful=item["impactful"]))
    return tuple(scores)

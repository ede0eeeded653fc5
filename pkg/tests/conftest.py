import json
from pathlib import Path

import jsonschema
import pytest
from referencing import Registry, Resource

from facet.impact import analyze_component

FIXTURES = Path(__file__).parent / "fixtures"
SCHEMA_DIR = Path(__file__).parent.parent / "src" / "facet" / "schemas"


@pytest.fixture(scope="session")
def product_card_source() -> str:
    return (FIXTURES / "ProductCard.tsx").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def product_card(product_card_source):
    """(schema, impacts) for the golden ProductCard fixture."""
    return analyze_component(product_card_source, "ProductCard.tsx")


@pytest.fixture(scope="session")
def impact_labels() -> dict:
    labels = json.loads((FIXTURES / "impact_labels.json").read_text("utf-8"))
    return {k: v for k, v in labels.items() if not k.startswith("_")}


def load_schema_validator(name: str) -> jsonschema.Draft202012Validator:
    common = json.loads((SCHEMA_DIR / "common.defs.json").read_text("utf-8"))
    target = json.loads((SCHEMA_DIR / name).read_text("utf-8"))
    registry = Registry().with_resources([
        ("facet/common.defs.json", Resource.from_contents(common)),
        (f"facet/{name}", Resource.from_contents(target)),
    ])
    return jsonschema.Draft202012Validator(target, registry=registry)


@pytest.fixture(scope="session")
def validators():
    names = [
        "analyze_response.schema.json",
        "generate_response.schema.json",
        "coverage_report.schema.json",
        "variation_update_response.schema.json",
        "variations_document.schema.json",
        "variations_list_response.schema.json",
    ]
    return {name: load_schema_validator(name) for name in names}

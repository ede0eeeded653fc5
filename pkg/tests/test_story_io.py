"""Story emission: canonical JSON idempotence, CSF round-trips, identifier
sanitization."""
import json
import random

from facet.coverage import extract_from_story_source
from facet.schema import (ComponentSchema, PropertyKind, PropertySpec,
                          VariationConfig, source_digest)
from facet.story import (emit_json, emit_story_module, parse_variations_json,
                         sanitize_identifier)
from facet.tsx.parser import parse_module


def make_schema():
    return ComponentSchema(
        component_name="ProductCard", has_children=False,
        properties=(
            PropertySpec("variant", PropertyKind.CATEGORICAL,
                         allowed_values=("summary", "detailed")),
            PropertySpec("title", PropertyKind.STRING, required=True),
            PropertySpec("price", PropertyKind.NUMBER, required=True),
            PropertySpec("tags", PropertyKind.ARRAY,
                         element_schema=(PropertySpec("item", PropertyKind.STRING),)),
            PropertySpec("meta", PropertyKind.OBJECT,
                         element_schema=(PropertySpec("sku", PropertyKind.STRING),)),
        ),
        source_digest=source_digest("pc"))


def config(name, description="", **assignments):
    return VariationConfig(name=name, description=description,
                           assignments=assignments)


class TestEmitJson:
    def test_document_shape(self):
        schema = make_schema()
        text = emit_json(schema, [config("A", title="T", price=1)])
        doc = json.loads(text)
        assert doc["component"] == "ProductCard"
        assert doc["source_digest"] == schema.source_digest
        assert len(doc["variations"]) == 1

    def test_empty_set(self):
        doc = json.loads(emit_json(make_schema(), []))
        assert doc["variations"] == []

    def test_idempotent_byte_for_byte(self):
        schema = make_schema()
        variations = [
            config("B", "second", price=2, title="Zed", variant="summary"),
            config("A", "first", title="Lämp 🟡", price=9.75,
                   tags=["x", "y"], meta={"sku": "A-1"}),
        ]
        first = emit_json(schema, variations)
        _, _, parsed = parse_variations_json(first)
        second = emit_json(schema, parsed)
        assert first == second

    def test_keys_follow_schema_order(self):
        schema = make_schema()
        text = emit_json(schema, [config("A", price=1, title="T",
                                         variant="summary")])
        props = json.loads(text)["variations"][0]["properties"]
        assert list(props) == ["variant", "title", "price"]


class TestSanitization:
    def test_spec_example(self):
        assert sanitize_identifier("Sale! 50%") == "Sale_50"

    def test_leading_digit(self):
        assert sanitize_identifier("3 Columns") == "V3_Columns"

    def test_reserved_word(self):
        assert sanitize_identifier("default") == "default_"

    def test_empty_fallback(self):
        assert sanitize_identifier("@!#") == "V"


class TestStoryModuleRoundTrip:
    def test_example_export_shape(self):
        schema = make_schema()
        text = emit_story_module(schema, [config(
            "DetailedDark", "dark-mode look", variant="detailed",
            title="Mug", price=3)])
        assert 'import { ProductCard } from "./ProductCard";' in text
        assert "export const DetailedDark = {" in text
        assert '    variant: "detailed",' in text
        assert "/** dark-mode look */" in text

    def test_emitted_module_is_parseable(self):
        schema = make_schema()
        text = emit_story_module(schema, [
            config("A", "desc", title="T", price=1, tags=["a"],
                   meta={"sku": "S"})])
        parse_module(text, "out.stories.tsx")  # must not raise

    def test_name_sanitization_preserves_display_name(self):
        schema = make_schema()
        text = emit_story_module(schema, [config("Sale! 50%", title="T",
                                                 price=1)])
        assert "export const Sale_50 = {" in text
        assert 'name: "Sale! 50%",' in text
        configs = extract_from_story_source(text, "s.tsx")
        assert configs[0].name == "Sale! 50%"

    def test_identifier_collisions_get_suffixes(self):
        schema = make_schema()
        text = emit_story_module(schema, [
            config("My Card!", title="a", price=1),
            config("My-Card", title="b", price=2)])
        assert "export const My_Card = {" in text
        assert "export const My_Card2 = {" in text
        configs = extract_from_story_source(text, "s.tsx")
        assert [c.name for c in configs] == ["My Card!", "My-Card"]

    def test_round_trip_hundred_randomized_sets(self):
        rng = random.Random(20_26)
        schema = make_schema()
        for trial in range(100):
            variations = [self.random_config(rng, i)
                          for i in range(rng.randint(1, 5))]
            emitted = emit_story_module(schema, variations)
            extracted = extract_from_story_source(emitted, f"t{trial}.tsx")
            assert extracted == variations, f"trial {trial}"

    WORDS = ["Mug", "Lamp", "Desk", "Ivory chair", "Sofa — wide", "Tisch",
             "چراغ", "'quoted'", 'say "hi"', "line\nbreak", "tab\tchar",
             "emoji 🌱", "back\\slash"]

    def random_config(self, rng, index):
        def rand_value(depth=0):
            kinds = ["str", "int", "float", "bool", "null"]
            if depth < 2:
                kinds += ["list", "dict"]
            kind = rng.choice(kinds)
            if kind == "str":
                return rng.choice(self.WORDS)
            if kind == "int":
                return rng.randint(-10_000, 10_000)
            if kind == "float":
                return round(rng.uniform(-100, 100), rng.randint(0, 6))
            if kind == "bool":
                return rng.random() < 0.5
            if kind == "null":
                return None
            if kind == "list":
                return [rand_value(depth + 1) for _ in range(rng.randint(0, 3))]
            return {f"k{j}": rand_value(depth + 1)
                    for j in range(rng.randint(0, 3))}

        assignments = {"title": rng.choice(self.WORDS),
                       "price": rand_value(), "tags": rand_value(),
                       "meta": rand_value()}
        name = rng.choice(["Plain", "Sale! 50%", "3 Columns", "désk", "A B"]) \
            + str(index)
        description = rng.choice(["", "one sentence.", "emoji 🌱 note"])
        return config(name, description, **assignments)

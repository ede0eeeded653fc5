"""HTTP service contract: routes, error codes, schema-valid responses, and
stub-mode replay determinism."""
import json

import pytest
from fastapi.testclient import TestClient

from facet.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app(seed=0))


def analyze(client, source, filename="ProductCard.tsx"):
    return client.post("/api/analyze",
                       json={"source": source, "filename": filename})


class TestAnalyze:
    def test_product_card_analysis(self, client, product_card_source,
                                   validators):
        resp = analyze(client, product_card_source)
        assert resp.status_code == 200
        body = resp.json()
        validators["analyze_response.schema.json"].validate(body)
        assert len(body["schema"]["properties"]) == 8
        assert sum(1 for s in body["impacts"] if s["impactful"]) == 3

    def test_invalid_tsx_reports_position(self, client):
        resp = analyze(client, "export const C = () => <div><b></div>;")
        assert resp.status_code == 400
        body = resp.json()
        assert "line" in body and "col" in body

    def test_empty_source_is_400(self, client):
        resp = analyze(client, "   ")
        assert resp.status_code == 400

    def test_oversize_body_is_413(self, client):
        resp = analyze(client, "//" + "x" * (1 << 20))
        assert resp.status_code == 413

    def test_no_component_is_400(self, client):
        resp = analyze(client, "export const n = 1;")
        assert resp.status_code == 400


class TestGenerate:
    def test_first_round_raises_aggregate_from_zero(self, client,
                                                    product_card_source,
                                                    validators):
        analyze(client, product_card_source)
        before = client.get("/api/coverage", params={"component": "ProductCard"})
        assert before.json()["aggregate"] == 0.0
        resp = client.post("/api/generate",
                           json={"component": "ProductCard", "count": 4})
        assert resp.status_code == 200
        body = resp.json()
        validators["generate_response.schema.json"].validate(body)
        assert len(body["accepted"]) == 4
        assert body["coverage"]["aggregate"] > 0.0

    def test_instruction_lands_in_prompt(self, client, product_card_source,
                                         monkeypatch):
        analyze(client, product_card_source)
        captured = {}
        from facet import service as service_module
        original = service_module.sample

        def spy(req, backend, seed=None):
            captured["instruction"] = req.user_instruction
            return original(req, backend, seed)

        monkeypatch.setattr(service_module, "sample", spy)
        client.post("/api/generate",
                    json={"component": "ProductCard", "count": 1,
                          "instruction": "searchable and selectable"})
        assert captured["instruction"] == "searchable and selectable"

    def test_unknown_component_is_404(self, client):
        resp = client.post("/api/generate", json={"component": "Ghost",
                                                  "count": 2})
        assert resp.status_code == 404

    def test_count_bounds_enforced(self, client, product_card_source):
        analyze(client, product_card_source)
        resp = client.post("/api/generate",
                           json={"component": "ProductCard", "count": 21})
        assert resp.status_code == 422
        resp = client.post("/api/generate",
                           json={"component": "ProductCard", "count": 0})
        assert resp.status_code == 422


class TestCoverage:
    def test_fresh_session_all_zero(self, client, product_card_source,
                                    validators):
        analyze(client, product_card_source)
        resp = client.get("/api/coverage", params={"component": "ProductCard"})
        body = resp.json()
        validators["coverage_report.schema.json"].validate(body)
        assert all(e["ratio"] == 0.0 for e in body["entries"])
        assert not body["fully_covered"]

    def test_unknown_component_is_404(self, client):
        resp = client.get("/api/coverage", params={"component": "Nope"})
        assert resp.status_code == 404

    def test_full_session_reports_fully_covered(self, client,
                                                product_card_source):
        analyze(client, product_card_source)
        client.post("/api/generate", json={"component": "ProductCard",
                                           "count": 6})
        resp = client.get("/api/coverage", params={"component": "ProductCard"})
        assert resp.json()["fully_covered"] is True


class TestUpdateVariation:
    def setup_session(self, client, source):
        analyze(client, source)
        body = client.post("/api/generate",
                           json={"component": "ProductCard", "count": 4}).json()
        return body["accepted"]

    def test_edit_theme_flips_coverage(self, client, product_card_source,
                                       validators):
        accepted = self.setup_session(client, product_card_source)
        # force theme=light everywhere, then flip one to dark
        for item in accepted:
            props = dict(item["properties"], theme="light")
            resp = client.put(f"/api/variations/ProductCard/{item['name']}",
                              json={"properties": props})
            assert resp.status_code == 200
        report = client.get("/api/coverage",
                            params={"component": "ProductCard"}).json()
        theme = next(e for e in report["entries"] if e["property"] == "theme")
        assert theme["ratio"] == 0.5
        target = accepted[0]
        props = dict(target["properties"], theme="dark")
        resp = client.put(f"/api/variations/ProductCard/{target['name']}",
                          json={"properties": props})
        body = resp.json()
        validators["variation_update_response.schema.json"].validate(body)
        theme = next(e for e in body["coverage"]["entries"]
                     if e["property"] == "theme")
        assert theme["ratio"] == 1.0

    def test_invalid_edit_is_422_with_violations(self, client,
                                                 product_card_source):
        accepted = self.setup_session(client, product_card_source)
        target = accepted[0]
        props = dict(target["properties"], variant="fancy")
        resp = client.put(f"/api/variations/ProductCard/{target['name']}",
                          json={"properties": props})
        assert resp.status_code == 422
        assert any("not in allowed values" in v
                   for v in resp.json()["violations"])

    def test_rename_collision_is_409(self, client, product_card_source):
        accepted = self.setup_session(client, product_card_source)
        first, second = accepted[0], accepted[1]
        resp = client.put(f"/api/variations/ProductCard/{first['name']}",
                          json={"name": second["name"],
                                "properties": first["properties"]})
        assert resp.status_code == 409

    def test_unknown_variation_is_404(self, client, product_card_source):
        analyze(client, product_card_source)
        resp = client.put("/api/variations/ProductCard/Ghost",
                          json={"properties": {}})
        assert resp.status_code == 404


class TestExplorerRoutes:
    def test_components_listing(self, client, product_card_source):
        analyze(client, product_card_source)
        body = client.get("/api/components").json()
        assert body["components"] == ["ProductCard"]
        assert body["stub"] is True

    def test_variations_listing(self, client, product_card_source, validators):
        analyze(client, product_card_source)
        client.post("/api/generate", json={"component": "ProductCard",
                                           "count": 2})
        body = client.get("/api/variations/ProductCard").json()
        validators["variations_list_response.schema.json"].validate(body)
        assert len(body["variations"]) == 2

    def test_story_endpoint_matches_emitter(self, client, product_card_source):
        from facet.impact import analyze_component
        from facet.schema import VariationConfig
        from facet.story import emit_story_module

        analyze(client, product_card_source)
        accepted = client.post("/api/generate",
                               json={"component": "ProductCard",
                                     "count": 1}).json()["accepted"]
        name = accepted[0]["name"]
        resp = client.get(f"/api/story/ProductCard/{name}")
        assert resp.status_code == 200
        schema, _ = analyze_component(product_card_source, "ProductCard.tsx")
        expected = emit_story_module(schema,
                                     [VariationConfig.from_dict(accepted[0])])
        assert resp.text == expected


class TestReplayDeterminism:
    SEQUENCE_COUNTS = [4, 3]

    def run_sequence(self, product_card_source):
        client = TestClient(create_app(seed=0))
        transcript = []
        transcript.append(analyze(client, product_card_source).json())
        for count in self.SEQUENCE_COUNTS:
            transcript.append(client.post(
                "/api/generate",
                json={"component": "ProductCard", "count": count}).json())
        transcript.append(client.get(
            "/api/coverage", params={"component": "ProductCard"}).json())
        return transcript

    def test_identical_transcripts_on_fresh_services(self, product_card_source):
        first = self.run_sequence(product_card_source)
        second = self.run_sequence(product_card_source)
        assert json.dumps(first, sort_keys=True) == \
            json.dumps(second, sort_keys=True)

    def test_explicit_seed_overrides_round_counter(self, product_card_source):
        client = TestClient(create_app(seed=0))
        analyze(client, product_card_source)
        a = client.post("/api/generate",
                        json={"component": "ProductCard", "count": 2,
                              "seed": 123}).json()
        client2 = TestClient(create_app(seed=0))
        analyze(client2, product_card_source)
        b = client2.post("/api/generate",
                         json={"component": "ProductCard", "count": 2,
                               "seed": 123}).json()
        assert a == b

"""Session snapshots: written on shutdown, restored on startup."""
import json

from fastapi.testclient import TestClient

from facet.service import create_app


def test_sessions_survive_restart_via_state_dir(tmp_path, product_card_source):
    state_dir = str(tmp_path / "state")

    with TestClient(create_app(seed=0, state_dir=state_dir)) as client:
        client.post("/api/analyze", json={"source": product_card_source,
                                          "filename": "ProductCard.tsx"})
        generated = client.post("/api/generate",
                                json={"component": "ProductCard",
                                      "count": 3}).json()
        assert len(generated["accepted"]) == 3
    # leaving the context manager fires the shutdown hook

    snapshot = tmp_path / "state" / "ProductCard.session.json"
    assert snapshot.is_file()
    doc = json.loads(snapshot.read_text())
    assert len(doc["variations"]) == 3

    with TestClient(create_app(seed=0, state_dir=state_dir)) as client:
        listing = client.get("/api/variations/ProductCard")
        assert listing.status_code == 200
        names = [v["name"] for v in listing.json()["variations"]]
        assert names == [v["name"] for v in generated["accepted"]]
        report = client.get("/api/coverage",
                            params={"component": "ProductCard"}).json()
        assert report["aggregate"] > 0


def test_corrupt_snapshot_is_skipped(tmp_path, product_card_source):
    state = tmp_path / "state"
    state.mkdir()
    (state / "Broken.session.json").write_text("{not json")
    with TestClient(create_app(seed=0, state_dir=str(state))) as client:
        assert client.get("/api/components").json()["components"] == []

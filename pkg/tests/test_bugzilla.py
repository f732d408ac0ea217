"""Fetch client against recorded response fixtures (no live traffic)."""

import json
from pathlib import Path

import pytest

from roilab.bugzilla import BugzillaClient, record_from_bug, see_also_id
from roilab.corpus import REQUIRES, build_pairs
from roilab.errors import SchemaError

FIXTURE = Path(__file__).parent / "fixtures" / "bugzilla_enhancements.json"


class FakeResponse:
    def __init__(self, payload, status=200):
        self.payload = payload
        self.status = status

    def raise_for_status(self):
        if self.status >= 400:
            raise RuntimeError(f"HTTP {self.status}")

    def json(self):
        return self.payload


class FakeSession:
    """Replays a recorded payload and records the request it saw."""

    def __init__(self, payload):
        self.payload = payload
        self.requests = []

    def get(self, url, params=None, timeout=None):
        self.requests.append((url, dict(params or {})))
        return FakeResponse(self.payload)


@pytest.fixture
def recorded():
    return json.loads(FIXTURE.read_text())


class TestSeeAlsoParsing:
    def test_plain_id(self):
        assert see_also_id("1399203") == "1399203"

    def test_show_bug_url(self):
        assert see_also_id("https://bugzilla.mozilla.org/show_bug.cgi?id=1322110") == "1322110"

    def test_path_style_url(self):
        assert see_also_id("https://example.org/tracker/view/777") == "777"

    def test_unparseable(self):
        assert see_also_id("https://example.org/not-an-issue") is None


class TestFetch:
    def test_request_shape(self, recorded):
        session = FakeSession(recorded)
        client = BugzillaClient("https://bugzilla.example.org/", session=session)
        client.fetch_enhancements(product="Firefox", limit=100)
        url, params = session.requests[0]
        assert url == "https://bugzilla.example.org/rest/bug"
        assert params["type"] == "enhancement"
        assert params["product"] == "Firefox"
        assert params["limit"] == 100
        assert "depends_on" in params["include_fields"]

    def test_record_mapping(self, recorded):
        client = BugzillaClient("https://x.example", session=FakeSession(recorded))
        records = client.fetch_enhancements()
        assert [r.id for r in records] == ["1450114", "1399203", "1412001"]
        assert records[0].title.startswith("Add option to sync")
        assert records[0].depends_on == ["1399203", "1412001"]
        assert records[0].see_also == ["1322110"]
        # self-link in the fixture is dropped, URL see_also parsed
        assert records[2].depends_on == []
        assert records[2].see_also == ["1399203", "777"]

    def test_missing_bugs_field(self):
        client = BugzillaClient("https://x.example", session=FakeSession({"faults": []}))
        with pytest.raises(SchemaError):
            client.fetch_enhancements()

    def test_feeds_pair_builder(self, recorded):
        client = BugzillaClient("https://x.example", session=FakeSession(recorded))
        records = client.fetch_enhancements()
        # all three records are interlinked, so no independent pairs fit
        pairs = build_pairs(records, independent_ratio=0.1, seed=0)
        requires = {p.key for p in pairs if p.label == REQUIRES}
        assert ("1399203", "1450114") in requires


class TestRecordFromBug:
    def test_requires_id(self):
        with pytest.raises(SchemaError):
            record_from_bug({"summary": "no id"})

    def test_defaults(self):
        record = record_from_bug({"id": 5})
        assert record.id == "5"
        assert record.title == ""
        assert record.depends_on == []

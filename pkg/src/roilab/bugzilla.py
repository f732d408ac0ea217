"""Minimal client for Bugzilla-compatible REST endpoints.

Fetches enhancement-type issues with the fields the corpus loader expects
and maps them onto :class:`RequirementRecord`. The HTTP session is
injectable so tests run entirely against recorded response fixtures.
"""

from __future__ import annotations

import re

import requests

from .corpus import RequirementRecord
from .errors import SchemaError

INCLUDE_FIELDS = ("id", "summary", "product", "priority", "type", "depends_on", "see_also")

_SEE_ALSO_ID = re.compile(r"(?:[?&]id=|/)(\d+)\s*$")


def see_also_id(entry) -> str | None:
    """Extract the issue id from a see_also entry (plain id or issue URL)."""
    text = str(entry).strip()
    if text.isdigit():
        return text
    match = _SEE_ALSO_ID.search(text)
    return match.group(1) if match else None


def record_from_bug(bug: dict) -> RequirementRecord:
    if "id" not in bug:
        raise SchemaError("bug entry missing 'id'")
    rid = str(bug["id"])
    depends = [str(d) for d in bug.get("depends_on") or []]
    see_also = [s for s in (see_also_id(e) for e in bug.get("see_also") or []) if s]
    return RequirementRecord(
        id=rid,
        title=str(bug.get("summary") or ""),
        product=str(bug.get("product") or ""),
        priority=str(bug.get("priority") or ""),
        issue_type=str(bug.get("type") or ""),
        depends_on=[d for d in depends if d != rid],
        see_also=[s for s in see_also if s != rid],
    )


class BugzillaClient:
    """GETs ``<base_url>/rest/bug`` for enhancement-type issues."""

    def __init__(self, base_url: str, session=None, timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.session = session if session is not None else requests.Session()
        self.timeout = timeout

    def fetch_enhancements(
        self, product: str | None = None, limit: int = 500, offset: int = 0
    ) -> list[RequirementRecord]:
        params = {
            "type": "enhancement",
            "include_fields": ",".join(INCLUDE_FIELDS),
            "limit": limit,
            "offset": offset,
        }
        if product:
            params["product"] = product
        response = self.session.get(
            f"{self.base_url}/rest/bug", params=params, timeout=self.timeout
        )
        response.raise_for_status()
        payload = response.json()
        if not isinstance(payload, dict) or "bugs" not in payload:
            raise SchemaError("endpoint response missing 'bugs' field")
        return [record_from_bug(b) for b in payload["bugs"]]

"""Parsing of structured reasoning rollouts.

A well-formed response is exactly one ``<thinking>...</thinking>`` block
followed (up to whitespace) by exactly one ``<answer>...</answer>`` block,
case-sensitive, nothing else around them. The thinking text may carry
"Camera Center:" / "Object Center:" lines whose bracketed coordinate arrays
feed the spatial reward; labels are matched case-insensitively and malformed
arrays are skipped rather than failing the parse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

_STRUCTURE_RE = re.compile(
    r"\s*<thinking>(.*)</thinking>\s*<answer>(.*)</answer>\s*\Z", re.DOTALL
)

_NUM = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_TRIPLE = rf"\[\s*({_NUM})\s*,\s*({_NUM})\s*,\s*({_NUM})\s*\]"
_TRIPLE_ANON = rf"\[\s*{_NUM}\s*,\s*{_NUM}\s*,\s*{_NUM}\s*\]"

_TRIPLE_RE = re.compile(_TRIPLE)
_TRIPLE_LIST_RE = re.compile(rf"\[\s*{_TRIPLE_ANON}(?:\s*,\s*{_TRIPLE_ANON})*\s*\]")
_CENTER_LABEL_RE = re.compile(r"(camera|object)\s+center\s*:\s*", re.IGNORECASE)

_LETTER_PREFIX_RE = re.compile(r"([A-Za-z])[.)]\s+\S")


@dataclass
class ParsedResponse:
    structural_ok: bool
    thinking: str = ""
    answer: str = ""
    camera_centers: list = field(default_factory=list)
    object_centers: list = field(default_factory=list)


@dataclass
class AnswerResolution:
    matched_index: int | None
    method: str  # "letter", "text", or "none"


def parse_structure(text: str) -> ParsedResponse:
    """Check the tag grammar and pull out the raw thinking/answer texts.

    Failure never raises; it returns structural_ok=False with empty fields.
    """
    if not isinstance(text, str):
        return ParsedResponse(False)
    if (
        text.count("<thinking>") != 1
        or text.count("</thinking>") != 1
        or text.count("<answer>") != 1
        or text.count("</answer>") != 1
    ):
        return ParsedResponse(False)
    match = _STRUCTURE_RE.fullmatch(text)
    if not match:
        return ParsedResponse(False)
    return ParsedResponse(True, thinking=match.group(1), answer=match.group(2))


def _triples_in(span: str) -> list:
    return [
        np.array([float(m.group(1)), float(m.group(2)), float(m.group(3))])
        for m in _TRIPLE_RE.finditer(span)
    ]


def extract_centers(thinking: str) -> tuple[list, list]:
    """All Camera Center / Object Center coordinates, in document order.

    After each label the scanner accepts either a single "[x, y, z]" triple or
    a bracketed list of triples. A label not followed by a parsable array is
    skipped and scanning continues.
    """
    camera_centers: list = []
    object_centers: list = []
    if not isinstance(thinking, str):
        return camera_centers, object_centers
    for label in _CENTER_LABEL_RE.finditer(thinking):
        target = camera_centers if label.group(1).lower() == "camera" else object_centers
        pos = label.end()
        list_match = _TRIPLE_LIST_RE.match(thinking, pos)
        if list_match:
            target.extend(_triples_in(list_match.group(0)))
            continue
        single = _TRIPLE_RE.match(thinking, pos)
        if single:
            target.append(np.array([float(single.group(k)) for k in (1, 2, 3)]))
    return camera_centers, object_centers


def parse_response(text: str) -> ParsedResponse:
    """parse_structure plus center extraction from the thinking block."""
    parsed = parse_structure(text)
    if parsed.structural_ok:
        parsed.camera_centers, parsed.object_centers = extract_centers(parsed.thinking)
    return parsed


def normalize_answer(answer_text: str, options: list) -> AnswerResolution:
    """Resolve an answer string against the option list.

    Tries, in order: a bare option letter (A..), a case-insensitive match of
    the option text, then a letter prefix like "B. some text".
    """
    if not options:
        raise ValueError("options must be non-empty")
    s = (answer_text or "").strip()
    n = len(options)

    if len(s) == 1:
        index = ord(s.upper()) - ord("A")
        if 0 <= index < n:
            return AnswerResolution(index, "letter")

    lowered = s.lower()
    for k, option in enumerate(options):
        if lowered == str(option).strip().lower():
            return AnswerResolution(k, "text")

    prefix = _LETTER_PREFIX_RE.match(s)
    if prefix:
        index = ord(prefix.group(1).upper()) - ord("A")
        if 0 <= index < n:
            return AnswerResolution(index, "letter")

    return AnswerResolution(None, "none")


def format_response(
    thinking: str,
    answer: str,
    camera_centers=None,
    object_centers=None,
) -> str:
    """Canonical serializer: the exact inverse of parse_response for
    well-formed inputs. Center lists, when given, are appended to the thinking
    text as labelled bracketed arrays."""
    parts = [thinking] if thinking else []
    if camera_centers is not None and len(camera_centers):
        parts.append("Camera Center:" + _format_triples(camera_centers))
    if object_centers is not None and len(object_centers):
        parts.append("Object Center:" + _format_triples(object_centers))
    body = "\n".join(parts)
    return f"<thinking>{body}</thinking>\n<answer>{answer}</answer>"


def _format_triples(points) -> str:
    rows = [f"[{float(p[0])!r}, {float(p[1])!r}, {float(p[2])!r}]" for p in points]
    if len(rows) == 1:
        return rows[0]
    return "[" + ", ".join(rows) + "]"

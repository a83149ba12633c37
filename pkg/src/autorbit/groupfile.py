"""The .group text format: ingestion path for externally exported groups.

Grammar (UTF-8, line oriented, full-line comments start with ``#``)::

    name: A5
    degree: 5
    claim omega: 4
    gens:
    (1 2 3 4 5)
    (3 4 5)

``name:`` and ``claim`` lines are optional; ``degree:`` and at least one
generator line are required.  Generators are either cycle strings with
space-separated points (``()`` is the identity) or image lists like
``[2,3,1,5,4]``.  Claim lines carry invariants the verifier must check; a
mismatch is a FAIL, which is how crafted corpora exercise the failure paths.
"""

from __future__ import annotations

from pathlib import Path

from .catalog import GroupDescriptor
from .errors import AutorbitError, GroupFileError
from .perm import Permutation, parse_cycle_string

CLAIM_KEYS = ("at", "omega", "order", "simple", "solvable", "spectrum")


def _parse_claim_value(key: str, raw: str, line_no: int):
    raw = raw.strip()
    try:
        if key in ("order", "omega"):
            return int(raw)
        if key in ("solvable", "simple", "at"):
            if raw not in ("true", "false"):
                raise ValueError(raw)
            return raw == "true"
        if key == "spectrum":
            vals = tuple(int(tok) for tok in raw.split())
            if not vals or list(vals) != sorted(set(vals)):
                raise ValueError(raw)
            return vals
    except ValueError:
        raise GroupFileError(f"bad value {raw!r} for claim {key!r}", line_no) from None
    raise GroupFileError(f"unknown claim key {key!r} (known: {', '.join(CLAIM_KEYS)})", line_no)


def _parse_generator(text: str, degree: int, line_no: int) -> Permutation:
    text = text.strip()
    try:
        if text.startswith("["):
            if not text.endswith("]"):
                raise GroupFileError("unterminated image list", line_no)
            body = text[1:-1].strip()
            images = [int(tok) for tok in body.split(",")] if body else []
            if len(images) != degree:
                raise GroupFileError(
                    f"image list has {len(images)} entries, degree is {degree}", line_no
                )
            return Permutation(images)
        return parse_cycle_string(text, degree)
    except GroupFileError:
        raise
    except (AutorbitError, ValueError) as exc:
        raise GroupFileError(str(exc), line_no) from None


def parse_group_file(text: str, default_name: str | None = None) -> GroupDescriptor:
    """Parse a .group document; diagnostics carry line numbers."""
    name = None
    degree = None
    claims: list[tuple[str, object]] = []
    gens: list[Permutation] = []
    in_gens = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if in_gens:
            gens.append(_parse_generator(line, degree, line_no))
            continue
        if line == "gens:":
            if degree is None:
                raise GroupFileError("degree must be declared before gens:", line_no)
            in_gens = True
            continue
        if ":" not in line:
            raise GroupFileError(f"expected 'key: value', got {line!r}", line_no)
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "name":
            name = value
        elif key == "degree":
            try:
                degree = int(value)
            except ValueError:
                raise GroupFileError(f"degree must be an integer, got {value!r}", line_no) from None
            if degree < 1:
                raise GroupFileError("degree must be at least 1", line_no)
        elif key.startswith("claim "):
            ckey = key[len("claim "):].strip()
            claims.append((ckey, _parse_claim_value(ckey, value, line_no)))
        else:
            raise GroupFileError(f"unknown header field {key!r}", line_no)
    if degree is None:
        raise GroupFileError("missing degree: line")
    if not gens:
        raise GroupFileError("missing generators (need a gens: section with at least one line)")
    if name is None:
        name = default_name or "anonymous"
    from .perm import PermGroup

    G = PermGroup(gens, name=name)
    return GroupDescriptor(
        name, degree, G.order(), tuple(gens), "ingested group file", tuple(sorted(claims))
    )


def serialize_group_file(desc: GroupDescriptor) -> str:
    """Canonical text form; parse(serialize(parse(t))) == parse(t)."""
    lines = []
    if desc.name:
        lines.append(f"name: {desc.name}")
    lines.append(f"degree: {desc.degree}")
    for key, value in sorted(desc.claims):
        if key == "spectrum":
            value = " ".join(str(v) for v in value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"claim {key}: {value}")
    lines.append("gens:")
    for g in desc.generators:
        lines.append(g.cycle_string())
    return "\n".join(lines) + "\n"


def load_group_file(path) -> GroupDescriptor:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise GroupFileError(f"cannot read {path}: {exc}") from None
    try:
        return parse_group_file(text, default_name=path.stem)
    except GroupFileError as exc:
        raise GroupFileError(f"{path}: {exc}") from None

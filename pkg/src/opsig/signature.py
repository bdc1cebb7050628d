"""Marked-CFG signature codec and the on-disk signature dictionary.

A signature serializes to exactly two lines:

    <descriptor>;<node_count>;<src>:<dst>[,<dst>...];...
    [<md5>, <md5>, ...]

Adjacency entries are sorted by source index, destination lists ascending,
and nodes without successors are omitted, so equal signatures always encode
to byte-identical text.

A dictionary file is a sequence of entries, each a ``@family <label>`` header
line followed by the signature's two lines (label ``-`` means no family).
Leading ``#`` comment lines hold free-text provenance.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .cfg import Cfg

_HEX32_RE = re.compile(r"^[0-9a-f]{32}$")
_HEADER_RE = re.compile(r"^(?P<desc>.*?);(?P<count>\d+);(?P<adj>(?:\d+:\d+(?:,\d+)*;)*)$")


class CodecError(ValueError):
    """Malformed signature text or dictionary file."""

    def __init__(self, message: str, line: int | None = None):
        self.raw_message = message
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Signature:
    descriptor: str
    node_count: int
    adjacency: dict[int, tuple[int, ...]]
    fingerprints: tuple[str, ...]
    family: str | None = None

    def __post_init__(self):
        if self.node_count <= 0:
            raise ValueError("node_count must be positive")
        if len(self.fingerprints) != self.node_count:
            raise ValueError("fingerprint count must equal node_count")
        for src, dsts in self.adjacency.items():
            if not 0 <= src < self.node_count or any(not 0 <= d < self.node_count for d in dsts):
                raise ValueError("adjacency index out of range")


@dataclass
class Dictionary:
    entries: list[Signature] = field(default_factory=list)
    provenance: str = ""


def from_cfg(cfg: Cfg, family: str | None = None) -> Signature:
    """Lift a built CFG into its serializable signature."""
    adjacency = {src: tuple(sorted(dsts)) for src, dsts in cfg.successors.items() if dsts}
    return Signature(
        descriptor=cfg.descriptor,
        node_count=len(cfg.blocks),
        adjacency=adjacency,
        fingerprints=cfg.fingerprints,
        family=family,
    )


def encode(sig: Signature) -> str:
    """Render the canonical two-line signature text (no trailing newline)."""
    adj = "".join(
        f"{src}:{','.join(str(d) for d in sorted(sig.adjacency[src]))};"
        for src in sorted(sig.adjacency)
        if sig.adjacency[src]
    )
    line1 = f"{sig.descriptor};{sig.node_count};{adj}"
    line2 = "[" + ", ".join(sig.fingerprints) + "]"
    return line1 + "\n" + line2


def decode(text: str, family: str | None = None) -> Signature:
    """Inverse of encode; raises CodecError on malformed input.

    CodecError.line is 1 for the header line, 2 for the fingerprint line.
    """
    lines = text.strip("\n").split("\n")
    if len(lines) != 2:
        raise CodecError(f"signature must be exactly 2 lines, got {len(lines)}", 1)
    m = _HEADER_RE.match(lines[0])
    if m is None:
        raise CodecError(f"malformed signature header {lines[0]!r}", 1)
    node_count = int(m.group("count"))

    adjacency: dict[int, tuple[int, ...]] = {}
    for entry in filter(None, m.group("adj").split(";")):
        src_s, _, dst_s = entry.partition(":")
        src = int(src_s)
        if src in adjacency:
            raise CodecError(f"duplicate adjacency source {src}", 1)
        adjacency[src] = tuple(int(d) for d in dst_s.split(","))

    fp_line = lines[1]
    if not (fp_line.startswith("[") and fp_line.endswith("]")):
        raise CodecError(f"malformed fingerprint list {fp_line!r}", 2)
    fingerprints = tuple(h.strip() for h in fp_line[1:-1].split(",")) if fp_line != "[]" else ()
    if len(fingerprints) != node_count:
        raise CodecError(f"{len(fingerprints)} fingerprints for node_count {node_count}", 2)
    for h in fingerprints:
        if not _HEX32_RE.match(h):
            raise CodecError(f"fingerprint {h!r} is not a 32-char lowercase hex digest", 2)

    try:
        return Signature(m.group("desc"), node_count, adjacency, fingerprints, family)
    except ValueError as exc:
        raise CodecError(str(exc), 1) from exc


def _format_entry(sig: Signature) -> str:
    return f"@family {sig.family if sig.family is not None else '-'}\n{encode(sig)}\n"


def dict_load(path: str | Path) -> Dictionary:
    """Load and validate a dictionary file."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    dictionary = Dictionary()
    provenance: list[str] = []
    seen: set[tuple[str, str | None]] = set()
    i = 0
    while i < len(lines):
        line = lines[i]
        if not line.strip() or line.startswith("#"):
            if line.startswith("#") and not dictionary.entries:
                provenance.append(line.lstrip("#").strip())
            i += 1
            continue
        if not line.startswith("@family "):
            raise CodecError(f"expected @family header, got {line!r}", i + 1)
        label = line[len("@family "):].strip()
        family = None if label == "-" else label
        if i + 2 >= len(lines):
            raise CodecError("truncated dictionary entry", i + 1)
        try:
            sig = decode(lines[i + 1] + "\n" + lines[i + 2], family)
        except CodecError as exc:
            raise CodecError(exc.raw_message, i + 1 + (exc.line or 1)) from None
        key = (sig.descriptor, sig.family)
        if key in seen:
            raise CodecError(f"duplicate dictionary entry {key}", i + 1)
        seen.add(key)
        dictionary.entries.append(sig)
        i += 3
    dictionary.provenance = "\n".join(provenance)
    return dictionary


def dict_add(path: str | Path, signatures: list[Signature]) -> Dictionary:
    """Append signatures to a dictionary file, creating it if missing.

    Re-adding a byte-identical entry is a silent no-op; a different signature
    under an already-used (descriptor, family) key is an error.
    """
    path = Path(path)
    dictionary = dict_load(path) if path.exists() else Dictionary()
    existing = {(s.descriptor, s.family): s for s in dictionary.entries}

    added: list[Signature] = []
    for sig in signatures:
        key = (sig.descriptor, sig.family)
        if key in existing:
            if encode(existing[key]) == encode(sig):
                continue
            raise CodecError(f"dictionary already holds a different signature for {key}")
        existing[key] = sig
        added.append(sig)

    with path.open("a", encoding="utf-8") as fh:
        for sig in added:
            fh.write(_format_entry(sig))
    dictionary.entries.extend(added)
    return dictionary


def dict_list(path: str | Path) -> list[tuple[str, str | None, int]]:
    """(descriptor, family, node_count) for every entry, in file order."""
    return [(s.descriptor, s.family, s.node_count) for s in dict_load(path).entries]


def with_family(sig: Signature, family: str | None) -> Signature:
    return replace(sig, family=family)

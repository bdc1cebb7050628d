"""Parser for the textual opcode-listing interchange format.

A listing file holds one or more disassembled methods:

    .method <descriptor>
    <addr:hex4> <opcode:hex2> <MNEMONIC> [operands...] [-> <target:hex4>[,<target:hex4>...]]
    .end method

Lines starting with ``#`` and blank lines are ignored.  Operands are opaque
and dropped at parse time; only addresses, opcode bytes, mnemonics and
branch targets survive into the instruction stream.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from .dalvik import KNOWN_MNEMONICS

logger = logging.getLogger(__name__)

# Instruction categories.
FALL = "FALL"
COND = "COND"
GOTO = "GOTO"
SWITCH = "SWITCH"
TERM = "TERM"

CATEGORIES = frozenset({FALL, COND, GOTO, SWITCH, TERM})

_INSTR_RE = re.compile(
    r"^(?P<addr>[0-9a-fA-F]{1,8})\s+(?P<op>[0-9a-fA-F]{1,2})\s+(?P<mn>[A-Z][A-Z0-9_]*)"
    r"(?P<rest>\s+.*)?$"
)


class ListingError(ValueError):
    """Raised on malformed or inconsistent listing input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Instruction:
    address: int
    opcode: int
    mnemonic: str
    category: str
    targets: tuple[int, ...]
    width: int


@dataclass(frozen=True)
class MethodListing:
    descriptor: str
    instructions: tuple[Instruction, ...]


def categorize(mnemonic: str) -> str:
    """Classify a mnemonic by its branch behaviour.

    The rules are total over uppercase tokens: IF_* is conditional, GOTO*
    unconditional, the two switch opcodes multi-way, RETURN*/THROW terminal,
    everything else falls through.  Tokens outside the standard Dalvik set
    are accepted (and logged) so exotic corpora still parse.
    """
    if mnemonic not in KNOWN_MNEMONICS:
        logger.warning("unknown mnemonic %r treated by prefix rules", mnemonic)
    if mnemonic.startswith("IF_"):
        return COND
    if mnemonic.startswith("GOTO"):
        return GOTO
    if mnemonic in ("PACKED_SWITCH", "SPARSE_SWITCH"):
        return SWITCH
    if mnemonic.startswith("RETURN") or mnemonic == "THROW":
        return TERM
    return FALL


def _parse_instruction(line: str, lineno: int) -> tuple[int, int, str, tuple[int, ...]]:
    body, targets = line, ()
    if "->" in line:
        body, _, target_part = line.partition("->")
        body = body.rstrip()
        try:
            targets = tuple(int(t.strip(), 16) for t in target_part.split(","))
        except ValueError:
            raise ListingError(f"malformed branch target list {target_part.strip()!r}", lineno)
    m = _INSTR_RE.match(body)
    if m is None:
        raise ListingError(f"unparseable instruction line {line!r}", lineno)
    return int(m.group("addr"), 16), int(m.group("op"), 16), m.group("mn"), targets


def _check_targets(category: str, targets: tuple[int, ...], lineno: int) -> None:
    if category == COND and len(targets) != 1:
        raise ListingError(f"conditional branch needs exactly 1 target, got {len(targets)}", lineno)
    if category == GOTO and len(targets) != 1:
        raise ListingError(f"goto needs exactly 1 target, got {len(targets)}", lineno)
    if category == SWITCH and not targets:
        raise ListingError("switch needs at least 1 target", lineno)
    if category in (FALL, TERM) and targets:
        raise ListingError(f"{category} instruction cannot carry branch targets", lineno)


def _build_method(
    descriptor: str,
    rows: list[tuple[int, int, int, str, tuple[int, ...]]],
    start_line: int,
) -> MethodListing:
    if not rows:
        raise ListingError(f"method {descriptor!r} has no instructions", start_line)
    if rows[0][1] != 0:
        raise ListingError(f"method {descriptor!r}: first instruction address must be 0", rows[0][0])

    seen: set[int] = set()
    for lineno, addr, _, _, _ in rows:
        if addr in seen:
            raise ListingError(f"duplicate address {addr:#06x}", lineno)
        seen.add(addr)
    for (_, a, _, _, _), (lineno, b, _, _, _) in zip(rows, rows[1:]):
        if b <= a:
            raise ListingError(f"addresses must be strictly increasing ({b:#06x} after {a:#06x})", lineno)

    for lineno, _, _, _, targets in rows:
        for t in targets:
            if t not in seen:
                raise ListingError(f"branch target {t:#06x} does not match any instruction address", lineno)

    instructions = []
    for i, (lineno, addr, opcode, mnemonic, targets) in enumerate(rows):
        category = categorize(mnemonic)
        _check_targets(category, targets, lineno)
        width = rows[i + 1][1] - addr if i + 1 < len(rows) else 1
        instructions.append(Instruction(addr, opcode, mnemonic, category, targets, width))

    last = instructions[-1]
    if last.category not in (TERM, GOTO):
        raise ListingError(
            f"method {descriptor!r} ends with {last.mnemonic}; control would fall off the end",
            rows[-1][0],
        )
    return MethodListing(descriptor, tuple(instructions))


def parse_listing(text: str) -> list[MethodListing]:
    """Parse an interchange document into one MethodListing per method block."""
    methods: list[MethodListing] = []
    descriptor: str | None = None
    rows: list[tuple[int, int, int, str, tuple[int, ...]]] = []
    start_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith(".method"):
            if descriptor is not None:
                raise ListingError("nested .method", lineno)
            descriptor = line[len(".method"):].strip()
            if not descriptor:
                raise ListingError(".method without descriptor", lineno)
            rows = []
            start_line = lineno
            continue
        if line == ".end method":
            if descriptor is None:
                raise ListingError(".end method without open .method", lineno)
            methods.append(_build_method(descriptor, rows, start_line))
            descriptor = None
            continue
        if descriptor is None:
            raise ListingError(f"instruction outside .method block: {line!r}", lineno)
        addr, opcode, mnemonic, targets = _parse_instruction(line, lineno)
        rows.append((lineno, addr, opcode, mnemonic, targets))

    if descriptor is not None:
        raise ListingError(f"method {descriptor!r} not closed by .end method", start_line)
    return methods


def serialize_listing(method: MethodListing) -> str:
    """Render a MethodListing back to interchange text (operands are gone)."""
    lines = [f".method {method.descriptor}"]
    for ins in method.instructions:
        line = f"{ins.address:04x} {ins.opcode:02x} {ins.mnemonic}"
        if ins.targets:
            line += " -> " + ",".join(f"{t:04x}" for t in ins.targets)
        lines.append(line)
    lines.append(".end method")
    return "\n".join(lines) + "\n"

"""Basic-block splitting and marked control-flow-graph construction.

Blocks are maximal leader-to-leader instruction runs.  A leader is address 0,
any branch target, or the instruction following a branch or terminator.
Each block is marked with the MD5 digest of its concatenated mnemonics, so
two blocks carry the same mark exactly when they contain the same opcode
sequence, register choices notwithstanding.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .listing import COND, FALL, GOTO, SWITCH, TERM, MethodListing


@dataclass(frozen=True)
class BasicBlock:
    index: int
    start_addr: int
    end_addr: int
    mnemonics: tuple[str, ...]
    fingerprint: str


@dataclass(frozen=True)
class Cfg:
    descriptor: str
    blocks: tuple[BasicBlock, ...]
    successors: dict[int, tuple[int, ...]]

    @property
    def fingerprints(self) -> tuple[str, ...]:
        return tuple(b.fingerprint for b in self.blocks)


def fingerprint_mnemonics(mnemonics: tuple[str, ...] | list[str]) -> str:
    """MD5 of the mnemonics concatenated with no separator, lowercase hex."""
    return hashlib.md5("".join(mnemonics).encode("utf-8")).hexdigest()


def fingerprint(block: BasicBlock) -> str:
    return fingerprint_mnemonics(block.mnemonics)


def leaders(method: MethodListing) -> set[int]:
    """Addresses that start a basic block."""
    out = {0}
    for ins in method.instructions:
        out.update(ins.targets)
        if ins.category in (COND, GOTO, SWITCH, TERM):
            follow = ins.address + ins.width
            if any(other.address == follow for other in method.instructions):
                out.add(follow)
    return out


def split_blocks(method: MethodListing) -> list[BasicBlock]:
    """Cut the method at its leaders, in address order, indexed from 0."""
    starts = sorted(leaders(method))
    start_set = set(starts)
    blocks: list[BasicBlock] = []
    current: list = []
    for ins in method.instructions:
        if ins.address in start_set and current:
            blocks.append(_make_block(len(blocks), current))
            current = []
        current.append(ins)
    blocks.append(_make_block(len(blocks), current))
    return blocks


def _make_block(index: int, instructions: list) -> BasicBlock:
    mnemonics = tuple(ins.mnemonic for ins in instructions)
    return BasicBlock(
        index=index,
        start_addr=instructions[0].address,
        end_addr=instructions[-1].address,
        mnemonics=mnemonics,
        fingerprint=fingerprint_mnemonics(mnemonics),
    )


def build_cfg(method: MethodListing) -> Cfg:
    """Split into blocks and wire successor edges from each block's last instruction."""
    blocks = split_blocks(method)
    by_start = {b.start_addr: b.index for b in blocks}
    last_of = {b.index: method.instructions[_index_of(method, b.end_addr)] for b in blocks}

    successors: dict[int, tuple[int, ...]] = {}
    for block in blocks:
        last = last_of[block.index]
        dests: set[int] = set()
        if last.category == COND:
            dests.add(_block_at(by_start, last.address + last.width))
            dests.add(_block_at(by_start, last.targets[0]))
        elif last.category == GOTO:
            dests.add(_block_at(by_start, last.targets[0]))
        elif last.category == SWITCH:
            dests.update(_block_at(by_start, t) for t in last.targets)
            dests.add(_block_at(by_start, last.address + last.width))
        elif last.category == FALL:
            dests.add(_block_at(by_start, last.address + last.width))
        # TERM: no successors
        if dests:
            successors[block.index] = tuple(sorted(dests))
    return Cfg(method.descriptor, tuple(blocks), successors)


def _index_of(method: MethodListing, address: int) -> int:
    for i, ins in enumerate(method.instructions):
        if ins.address == address:
            return i
    raise AssertionError(f"no instruction at {address:#06x}")


def _block_at(by_start: dict[int, int], address: int) -> int:
    # Leader construction guarantees every edge lands on a block start.
    assert address in by_start, f"edge into the middle of a block at {address:#06x}"
    return by_start[address]

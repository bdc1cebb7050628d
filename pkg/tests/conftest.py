"""Shared fixtures: golden listings and seeded generators."""
from __future__ import annotations

import random

import pytest

from opsig import cfg as cfglib
from opsig import listing as listinglib
from opsig.dalvik import MNEMONIC_TO_OPCODE, OPCODES

# 15-instruction DroidJack-style method: one conditional, three blocks.
Z_RUN_LISTING = """\
.method Lnet/droidjack/server/z.run()V
0000 54 IGET_OBJECT v0, v2
0002 12 CONST_4 v1
0003 46 AGET_OBJECT v0, v0, v1
0005 54 IGET_OBJECT v1, v2
0007 12 CONST_4 v3
0008 46 AGET_OBJECT v1, v1, v3
000a 12 CONST_4 v3
000b 38 IF_EQZ v1 -> 0017
000d 1a CONST_STRING v3
000f 6e INVOKE_VIRTUAL {v1, v3}
0012 0c MOVE_RESULT_OBJECT v1
0013 71 INVOKE_STATIC {v1}
0016 0c MOVE_RESULT_OBJECT v1
0017 69 SPUT_OBJECT v1
0019 0e RETURN_VOID
.end method
"""

# Frozen with an independent md5 tool (coreutils md5sum) before the build.
Z_RUN_FP_BLOCK0 = "16d9b1c593b446f7e139cd2a8e031101"
Z_RUN_FP_BLOCK1 = "da2eaa9550543071d1a11d6f753d5dfc"
Z_RUN_FP_BLOCK2 = "c7184d2fe117ed0b08f249676c96ab72"

Z_RUN_SIGNATURE_TEXT = (
    "Lnet/droidjack/server/z.run()V;3;0:1,2;1:2;\n"
    f"[{Z_RUN_FP_BLOCK0}, {Z_RUN_FP_BLOCK1}, {Z_RUN_FP_BLOCK2}]"
)

# Six-block graph: entry branches (out 2), one branch dead-ends early, the
# other runs down a goto chain.  Out-degrees 2,1,0,1,1,0.
REFERENT_6_LISTING = """\
.method Lsample/ref/Flow.run()V
0000 12 CONST_4 v0
0001 38 IF_EQZ v0 -> 0004
0002 1a CONST_STRING v1
0003 28 GOTO -> 0006
0004 62 SGET_OBJECT v1
0005 0e RETURN_VOID
0006 52 IGET v2
0007 28 GOTO -> 0008
0008 44 AGET v3
0009 28 GOTO -> 000a
000a 0e RETURN_VOID
.end method
"""

# Eight-block supergraph of the referent's shape: same spine with one extra
# leaf under the switch-like fan-out and one extra tail block.
CANDIDATE_8_LISTING = """\
.method Lsample/cand/Flow.run()V
0000 12 CONST_4 v0
0001 39 IF_NEZ v0 -> 0004
0002 22 NEW_INSTANCE v1
0003 0e RETURN_VOID
0004 1a CONST_STRING v1
0005 38 IF_EQZ v1 -> 0008
0006 54 IGET_OBJECT v2
0007 28 GOTO -> 000a
0008 46 AGET_OBJECT v3
0009 0e RETURN_VOID
000a 60 SGET v4
000b 28 GOTO -> 000c
000c 67 SPUT v4
000d 28 GOTO -> 000e
000e 0e RETURN_VOID
.end method
"""

REFERENCE_PAIR_ONES = {(0, 0), (1, 2), (2, 1), (3, 3), (4, 5), (5, 6)}

# Mnemonic pool for generated methods: plain fall-through instructions only.
_BRANCHY = {"PACKED_SWITCH", "SPARSE_SWITCH", "THROW"}
FALL_POOL = sorted(
    name
    for name in OPCODES.values()
    if not name.startswith(("IF_", "GOTO", "RETURN")) and name not in _BRANCHY
)


@pytest.fixture
def z_run_method():
    (method,) = listinglib.parse_listing(Z_RUN_LISTING)
    return method


@pytest.fixture
def z_run_cfg(z_run_method):
    return cfglib.build_cfg(z_run_method)


@pytest.fixture
def referent_method():
    (method,) = listinglib.parse_listing(REFERENT_6_LISTING)
    return method


@pytest.fixture
def candidate_method():
    (method,) = listinglib.parse_listing(CANDIDATE_8_LISTING)
    return method


def random_method(rng: random.Random, descriptor: str, n_instructions: int | None = None):
    """A structurally valid random method (width-1 addressing)."""
    n = n_instructions or rng.randint(3, 20)
    lines = [f".method {descriptor}"]
    for addr in range(n - 1):
        roll = rng.random()
        if roll < 0.15 and n > 3:
            target = rng.randrange(n)
            mn = rng.choice(["IF_EQZ", "IF_NEZ", "IF_LT", "IF_GE"])
            lines.append(f"{addr:04x} {MNEMONIC_TO_OPCODE[mn]:02x} {mn} -> {target:04x}")
        elif roll < 0.22 and n > 3:
            target = rng.randrange(n)
            lines.append(f"{addr:04x} 28 GOTO -> {target:04x}")
        else:
            mn = rng.choice(FALL_POOL)
            lines.append(f"{addr:04x} {MNEMONIC_TO_OPCODE[mn]:02x} {mn}")
    lines.append(f"{n - 1:04x} 0e RETURN_VOID")
    lines.append(".end method")
    (method,) = listinglib.parse_listing("\n".join(lines))
    return method


def random_reachable_cfg(rng: random.Random, descriptor: str):
    """Random CFG whose blocks are all reachable from the entry."""
    from opsig.matching import depth_map

    while True:
        cfg = cfglib.build_cfg(random_method(rng, descriptor))
        if all(d >= 0 for d in depth_map(cfg).values()):
            return cfg


def random_signature(rng: random.Random):
    """Random codec-valid signature (graph need not be a real CFG)."""
    from opsig.signature import Signature

    n = rng.randint(1, 10)
    adjacency = {}
    for src in range(n):
        if rng.random() < 0.6:
            n_dsts = rng.randint(1, min(3, n))
            adjacency[src] = tuple(sorted(rng.sample(range(n), n_dsts)))
    fingerprints = tuple(
        "".join(rng.choice("0123456789abcdef") for _ in range(32)) for _ in range(n)
    )
    descriptor = "L" + "".join(rng.choice("abcdefgh") for _ in range(6)) + "/T.m()V"
    family = rng.choice([None, "FamA", "FamB"])
    return Signature(descriptor, n, adjacency, fingerprints, family)

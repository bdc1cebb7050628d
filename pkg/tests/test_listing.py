import random

import pytest

from opsig.listing import (
    COND,
    FALL,
    GOTO,
    SWITCH,
    TERM,
    ListingError,
    categorize,
    parse_listing,
    serialize_listing,
)

from conftest import Z_RUN_LISTING, random_method


def test_parse_z_run_listing():
    methods = parse_listing(Z_RUN_LISTING)
    assert len(methods) == 1
    method = methods[0]
    assert method.descriptor == "Lnet/droidjack/server/z.run()V"
    assert len(method.instructions) == 15
    assert method.instructions[0].address == 0
    mnemonics = [ins.mnemonic for ins in method.instructions]
    assert mnemonics[0] == "IGET_OBJECT"
    assert mnemonics[7] == "IF_EQZ"
    assert mnemonics[-1] == "RETURN_VOID"


def test_empty_document_gives_empty_list():
    assert parse_listing("") == []
    assert parse_listing("# only a comment\n\n") == []


def test_conditional_instruction_fields():
    text = ".method La/B.c()V\n0000 39 IF_NEZ v2 -> 0014\n0014 0e RETURN_VOID\n.end method\n"
    (method,) = parse_listing(text)
    ins = method.instructions[0]
    assert ins.address == 0
    assert ins.opcode == 0x39
    assert ins.mnemonic == "IF_NEZ"
    assert ins.category == COND
    assert ins.targets == (0x14,)
    assert ins.width == 0x14


def test_width_is_gap_to_next_instruction(z_run_method):
    widths = [ins.width for ins in z_run_method.instructions]
    assert widths[0] == 2  # IGET_OBJECT at 0000, next at 0002
    assert widths[-1] == 1  # terminal instruction defaults to 1
    addresses = [ins.address for ins in z_run_method.instructions]
    assert all(
        a + w == b for a, w, b in zip(addresses, widths, addresses[1:])
    )


@pytest.mark.parametrize(
    "mnemonic,expected",
    [
        ("IF_EQZ", COND),
        ("IF_NEZ", COND),
        ("GOTO", GOTO),
        ("GOTO_16", GOTO),
        ("GOTO_32", GOTO),
        ("PACKED_SWITCH", SWITCH),
        ("SPARSE_SWITCH", SWITCH),
        ("RETURN_VOID", TERM),
        ("RETURN_OBJECT", TERM),
        ("THROW", TERM),
        ("INVOKE_VIRTUAL", FALL),
        ("CONST_4", FALL),
        ("NOP", FALL),
    ],
)
def test_categorize(mnemonic, expected):
    assert categorize(mnemonic) == expected


def test_categorize_unknown_mnemonic_falls_through(caplog):
    with caplog.at_level("WARNING"):
        assert categorize("FROBNICATE_FAST") == FALL
    assert "FROBNICATE_FAST" in caplog.text


def test_categorize_is_total_over_random_uppercase_tokens():
    rng = random.Random(7)
    alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ_0123456789"
    for _ in range(500):
        token = random.Random(rng.random()).choice("ABCDEFGHIJKLMNOPQRSTUVWXYZ") + "".join(
            rng.choice(alphabet) for _ in range(rng.randint(0, 12))
        )
        assert categorize(token) in {FALL, COND, GOTO, SWITCH, TERM}
        assert categorize(token) == categorize(token)


def test_multiple_methods_per_file():
    text = (
        ".method La/A.a()V\n0000 0e RETURN_VOID\n.end method\n"
        ".method La/B.b()V\n0000 00 NOP\n0001 0e RETURN_VOID\n.end method\n"
    )
    methods = parse_listing(text)
    assert [m.descriptor for m in methods] == ["La/A.a()V", "La/B.b()V"]


def test_operands_are_dropped():
    plain = ".method La/B.c()V\n0000 00 NOP\n0001 0e RETURN_VOID\n.end method\n"
    with_ops = ".method La/B.c()V\n0000 00 NOP v0, v1, {x}\n0001 0e RETURN_VOID\n.end method\n"
    assert parse_listing(plain) == parse_listing(with_ops)


@pytest.mark.parametrize(
    "text,fragment",
    [
        (".method La/B.c()V\n0001 00 NOP\n0002 0e RETURN_VOID\n.end method", "address must be 0"),
        (".method La/B.c()V\n0000 00 NOP\n0000 0e RETURN_VOID\n.end method", "duplicate address"),
        (
            ".method La/B.c()V\n0000 00 NOP\n0002 00 NOP\n0001 0e RETURN_VOID\n.end method",
            "strictly increasing",
        ),
        (
            ".method La/B.c()V\n0000 38 IF_EQZ -> 00aa\n0001 0e RETURN_VOID\n.end method",
            "does not match any instruction",
        ),
        (".method La/B.c()V\n0000 00 NOP\n.end method", "fall off the end"),
        (".method La/B.c()V\nga rb wat\n.end method", "unparseable"),
        (".method La/B.c()V\n0000 0e RETURN_VOID", "not closed"),
        ("0000 0e RETURN_VOID\n", "outside .method"),
        (".method La/B.c()V\n.end method", "no instructions"),
        (
            ".method La/B.c()V\n0000 28 GOTO -> 0000,0001\n0001 0e RETURN_VOID\n.end method",
            "exactly 1 target",
        ),
        (
            ".method La/B.c()V\n0000 00 NOP -> 0001\n0001 0e RETURN_VOID\n.end method",
            "cannot carry branch targets",
        ),
    ],
)
def test_rejects_malformed_input(text, fragment):
    with pytest.raises(ListingError, match=fragment):
        parse_listing(text)


def test_error_carries_line_number():
    text = ".method La/B.c()V\n0000 00 NOP\n0001 00 NOP\n0001 0e RETURN_VOID\n.end method"
    with pytest.raises(ListingError) as excinfo:
        parse_listing(text)
    assert excinfo.value.line == 4
    assert "line 4" in str(excinfo.value)


def test_switch_targets_inline():
    text = (
        ".method La/B.c()V\n"
        "0000 2b PACKED_SWITCH v0 -> 0002,0003\n"
        "0001 0e RETURN_VOID\n"
        "0002 0e RETURN_VOID\n"
        "0003 0e RETURN_VOID\n"
        ".end method\n"
    )
    (method,) = parse_listing(text)
    assert method.instructions[0].category == SWITCH
    assert method.instructions[0].targets == (2, 3)


def test_roundtrip_on_golden_listing(z_run_method):
    assert parse_listing(serialize_listing(z_run_method)) == [z_run_method]


def test_roundtrip_on_random_methods():
    rng = random.Random(1234)
    for i in range(200):
        method = random_method(rng, f"Lrt/T{i}.m()V")
        assert parse_listing(serialize_listing(method)) == [method]


def test_every_target_resolves_on_random_methods():
    rng = random.Random(99)
    for i in range(100):
        method = random_method(rng, f"Lck/T{i}.m()V")
        addresses = {ins.address for ins in method.instructions}
        for ins in method.instructions:
            assert all(t in addresses for t in ins.targets)

"""Standard Dalvik opcode table.

Maps opcode byte values to canonical mnemonics, normalized to the uppercase
underscore form used throughout this package (``const/4`` -> ``CONST_4``).
Gaps in the byte range (0x3e-0x43, 0x73, 0x79-0x7a, 0xe3-0xf9) are opcodes
the VM never emits in valid dex files.
"""

OPCODES: dict[int, str] = {
    0x00: "NOP",
    0x01: "MOVE",
    0x02: "MOVE_FROM16",
    0x03: "MOVE_16",
    0x04: "MOVE_WIDE",
    0x05: "MOVE_WIDE_FROM16",
    0x06: "MOVE_WIDE_16",
    0x07: "MOVE_OBJECT",
    0x08: "MOVE_OBJECT_FROM16",
    0x09: "MOVE_OBJECT_16",
    0x0A: "MOVE_RESULT",
    0x0B: "MOVE_RESULT_WIDE",
    0x0C: "MOVE_RESULT_OBJECT",
    0x0D: "MOVE_EXCEPTION",
    0x0E: "RETURN_VOID",
    0x0F: "RETURN",
    0x10: "RETURN_WIDE",
    0x11: "RETURN_OBJECT",
    0x12: "CONST_4",
    0x13: "CONST_16",
    0x14: "CONST",
    0x15: "CONST_HIGH16",
    0x16: "CONST_WIDE_16",
    0x17: "CONST_WIDE_32",
    0x18: "CONST_WIDE",
    0x19: "CONST_WIDE_HIGH16",
    0x1A: "CONST_STRING",
    0x1B: "CONST_STRING_JUMBO",
    0x1C: "CONST_CLASS",
    0x1D: "MONITOR_ENTER",
    0x1E: "MONITOR_EXIT",
    0x1F: "CHECK_CAST",
    0x20: "INSTANCE_OF",
    0x21: "ARRAY_LENGTH",
    0x22: "NEW_INSTANCE",
    0x23: "NEW_ARRAY",
    0x24: "FILLED_NEW_ARRAY",
    0x25: "FILLED_NEW_ARRAY_RANGE",
    0x26: "FILL_ARRAY_DATA",
    0x27: "THROW",
    0x28: "GOTO",
    0x29: "GOTO_16",
    0x2A: "GOTO_32",
    0x2B: "PACKED_SWITCH",
    0x2C: "SPARSE_SWITCH",
    0x2D: "CMPL_FLOAT",
    0x2E: "CMPG_FLOAT",
    0x2F: "CMPL_DOUBLE",
    0x30: "CMPG_DOUBLE",
    0x31: "CMP_LONG",
    0x32: "IF_EQ",
    0x33: "IF_NE",
    0x34: "IF_LT",
    0x35: "IF_GE",
    0x36: "IF_GT",
    0x37: "IF_LE",
    0x38: "IF_EQZ",
    0x39: "IF_NEZ",
    0x3A: "IF_LTZ",
    0x3B: "IF_GEZ",
    0x3C: "IF_GTZ",
    0x3D: "IF_LEZ",
    0x44: "AGET",
    0x45: "AGET_WIDE",
    0x46: "AGET_OBJECT",
    0x47: "AGET_BOOLEAN",
    0x48: "AGET_BYTE",
    0x49: "AGET_CHAR",
    0x4A: "AGET_SHORT",
    0x4B: "APUT",
    0x4C: "APUT_WIDE",
    0x4D: "APUT_OBJECT",
    0x4E: "APUT_BOOLEAN",
    0x4F: "APUT_BYTE",
    0x50: "APUT_CHAR",
    0x51: "APUT_SHORT",
    0x52: "IGET",
    0x53: "IGET_WIDE",
    0x54: "IGET_OBJECT",
    0x55: "IGET_BOOLEAN",
    0x56: "IGET_BYTE",
    0x57: "IGET_CHAR",
    0x58: "IGET_SHORT",
    0x59: "IPUT",
    0x5A: "IPUT_WIDE",
    0x5B: "IPUT_OBJECT",
    0x5C: "IPUT_BOOLEAN",
    0x5D: "IPUT_BYTE",
    0x5E: "IPUT_CHAR",
    0x5F: "IPUT_SHORT",
    0x60: "SGET",
    0x61: "SGET_WIDE",
    0x62: "SGET_OBJECT",
    0x63: "SGET_BOOLEAN",
    0x64: "SGET_BYTE",
    0x65: "SGET_CHAR",
    0x66: "SGET_SHORT",
    0x67: "SPUT",
    0x68: "SPUT_WIDE",
    0x69: "SPUT_OBJECT",
    0x6A: "SPUT_BOOLEAN",
    0x6B: "SPUT_BYTE",
    0x6C: "SPUT_CHAR",
    0x6D: "SPUT_SHORT",
    0x6E: "INVOKE_VIRTUAL",
    0x6F: "INVOKE_SUPER",
    0x70: "INVOKE_DIRECT",
    0x71: "INVOKE_STATIC",
    0x72: "INVOKE_INTERFACE",
    0x74: "INVOKE_VIRTUAL_RANGE",
    0x75: "INVOKE_SUPER_RANGE",
    0x76: "INVOKE_DIRECT_RANGE",
    0x77: "INVOKE_STATIC_RANGE",
    0x78: "INVOKE_INTERFACE_RANGE",
    0x7B: "NEG_INT",
    0x7C: "NOT_INT",
    0x7D: "NEG_LONG",
    0x7E: "NOT_LONG",
    0x7F: "NEG_FLOAT",
    0x80: "NEG_DOUBLE",
    0x81: "INT_TO_LONG",
    0x82: "INT_TO_FLOAT",
    0x83: "INT_TO_DOUBLE",
    0x84: "LONG_TO_INT",
    0x85: "LONG_TO_FLOAT",
    0x86: "LONG_TO_DOUBLE",
    0x87: "FLOAT_TO_INT",
    0x88: "FLOAT_TO_LONG",
    0x89: "FLOAT_TO_DOUBLE",
    0x8A: "DOUBLE_TO_INT",
    0x8B: "DOUBLE_TO_LONG",
    0x8C: "DOUBLE_TO_FLOAT",
    0x8D: "INT_TO_BYTE",
    0x8E: "INT_TO_CHAR",
    0x8F: "INT_TO_SHORT",
    0x90: "ADD_INT",
    0x91: "SUB_INT",
    0x92: "MUL_INT",
    0x93: "DIV_INT",
    0x94: "REM_INT",
    0x95: "AND_INT",
    0x96: "OR_INT",
    0x97: "XOR_INT",
    0x98: "SHL_INT",
    0x99: "SHR_INT",
    0x9A: "USHR_INT",
    0x9B: "ADD_LONG",
    0x9C: "SUB_LONG",
    0x9D: "MUL_LONG",
    0x9E: "DIV_LONG",
    0x9F: "REM_LONG",
    0xA0: "AND_LONG",
    0xA1: "OR_LONG",
    0xA2: "XOR_LONG",
    0xA3: "SHL_LONG",
    0xA4: "SHR_LONG",
    0xA5: "USHR_LONG",
    0xA6: "ADD_FLOAT",
    0xA7: "SUB_FLOAT",
    0xA8: "MUL_FLOAT",
    0xA9: "DIV_FLOAT",
    0xAA: "REM_FLOAT",
    0xAB: "ADD_DOUBLE",
    0xAC: "SUB_DOUBLE",
    0xAD: "MUL_DOUBLE",
    0xAE: "DIV_DOUBLE",
    0xAF: "REM_DOUBLE",
    0xB0: "ADD_INT_2ADDR",
    0xB1: "SUB_INT_2ADDR",
    0xB2: "MUL_INT_2ADDR",
    0xB3: "DIV_INT_2ADDR",
    0xB4: "REM_INT_2ADDR",
    0xB5: "AND_INT_2ADDR",
    0xB6: "OR_INT_2ADDR",
    0xB7: "XOR_INT_2ADDR",
    0xB8: "SHL_INT_2ADDR",
    0xB9: "SHR_INT_2ADDR",
    0xBA: "USHR_INT_2ADDR",
    0xBB: "ADD_LONG_2ADDR",
    0xBC: "SUB_LONG_2ADDR",
    0xBD: "MUL_LONG_2ADDR",
    0xBE: "DIV_LONG_2ADDR",
    0xBF: "REM_LONG_2ADDR",
    0xC0: "AND_LONG_2ADDR",
    0xC1: "OR_LONG_2ADDR",
    0xC2: "XOR_LONG_2ADDR",
    0xC3: "SHL_LONG_2ADDR",
    0xC4: "SHR_LONG_2ADDR",
    0xC5: "USHR_LONG_2ADDR",
    0xC6: "ADD_FLOAT_2ADDR",
    0xC7: "SUB_FLOAT_2ADDR",
    0xC8: "MUL_FLOAT_2ADDR",
    0xC9: "DIV_FLOAT_2ADDR",
    0xCA: "REM_FLOAT_2ADDR",
    0xCB: "ADD_DOUBLE_2ADDR",
    0xCC: "SUB_DOUBLE_2ADDR",
    0xCD: "MUL_DOUBLE_2ADDR",
    0xCE: "DIV_DOUBLE_2ADDR",
    0xCF: "REM_DOUBLE_2ADDR",
    0xD0: "ADD_INT_LIT16",
    0xD1: "RSUB_INT",
    0xD2: "MUL_INT_LIT16",
    0xD3: "DIV_INT_LIT16",
    0xD4: "REM_INT_LIT16",
    0xD5: "AND_INT_LIT16",
    0xD6: "OR_INT_LIT16",
    0xD7: "XOR_INT_LIT16",
    0xD8: "ADD_INT_LIT8",
    0xD9: "RSUB_INT_LIT8",
    0xDA: "MUL_INT_LIT8",
    0xDB: "DIV_INT_LIT8",
    0xDC: "REM_INT_LIT8",
    0xDD: "AND_INT_LIT8",
    0xDE: "OR_INT_LIT8",
    0xDF: "XOR_INT_LIT8",
    0xE0: "SHL_INT_LIT8",
    0xE1: "SHR_INT_LIT8",
    0xE2: "USHR_INT_LIT8",
    0xFA: "INVOKE_POLYMORPHIC",
    0xFB: "INVOKE_POLYMORPHIC_RANGE",
    0xFC: "INVOKE_CUSTOM",
    0xFD: "INVOKE_CUSTOM_RANGE",
    0xFE: "CONST_METHOD_HANDLE",
    0xFF: "CONST_METHOD_TYPE",
}

MNEMONIC_TO_OPCODE: dict[str, int] = {name: op for op, name in OPCODES.items()}

KNOWN_MNEMONICS: frozenset[str] = frozenset(OPCODES.values())

#!/usr/bin/env python3
"""Writes the homograph dictionary fixture data/confusables.txt.

Entries follow the Unicode confusables line format
`VARIANT_HEX ; SOURCE_HEX+ ; TYPE # comment` and use real lookalike
assignments (mathematical alphanumeric symbols, Cyrillic and Greek letters),
so every ASCII letter and digit has at least one non-ASCII variant.
"""
import pathlib
import unicodedata

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "confusables.txt"

lines = []


def add(variant_cp, source_cps, typ="MA"):
    if isinstance(source_cps, int):
        source_cps = [source_cps]
    src_field = " ".join(f"{cp:04X}" for cp in source_cps)
    variant = chr(variant_cp)
    source = "".join(chr(cp) for cp in source_cps)
    vname = unicodedata.name(variant, f"U+{variant_cp:04X}")
    lines.append(f"{variant_cp:04X} ;\t{src_field} ;\t{typ}\t"
                 f"# ( {variant} -> {source} ) {vname}")


# Mathematical alphanumeric styles without holes in the ranges we use.
LOWER_STYLES = [
    (0x1D41A, "bold"),
    (0x1D44E, "italic"),          # hole at h handled below
    (0x1D51E, "fraktur"),
    (0x1D552, "double-struck"),
    (0x1D5BA, "sans-serif"),
    (0x1D5EE, "sans-serif bold"),
    (0x1D68A, "monospace"),
]
UPPER_STYLES = [
    (0x1D400, "bold"),
    (0x1D434, "italic"),
    (0x1D5A0, "sans-serif"),
    (0x1D5D4, "sans-serif bold"),
    (0x1D670, "monospace"),
]
DIGIT_STYLES = [0x1D7CE, 0x1D7D8, 0x1D7E2, 0x1D7EC, 0x1D7F6]

for base, _ in LOWER_STYLES:
    for i in range(26):
        cp = base + i
        if cp == 0x1D455:       # reserved; Planck constant stands in for h
            cp = 0x210E
        add(cp, ord('a') + i)
for base, _ in UPPER_STYLES:
    for i in range(26):
        add(base + i, ord('A') + i)
for base in DIGIT_STYLES:
    for i in range(10):
        add(base + i, ord('0') + i)

# Cyrillic and Greek lookalikes.
CYRILLIC_LOWER = {0x0430: 'a', 0x0435: 'e', 0x043E: 'o', 0x0440: 'p',
                  0x0441: 'c', 0x0443: 'y', 0x0445: 'x', 0x0455: 's',
                  0x0456: 'i', 0x0458: 'j', 0x04BB: 'h', 0x0501: 'd'}
CYRILLIC_UPPER = {0x0410: 'A', 0x0412: 'B', 0x0415: 'E', 0x041A: 'K',
                  0x041C: 'M', 0x041D: 'H', 0x041E: 'O', 0x0420: 'P',
                  0x0421: 'C', 0x0422: 'T', 0x0425: 'X', 0x0405: 'S',
                  0x0406: 'I', 0x0408: 'J'}
GREEK_UPPER = {0x0391: 'A', 0x0392: 'B', 0x0395: 'E', 0x0396: 'Z',
               0x0397: 'H', 0x0399: 'I', 0x039A: 'K', 0x039C: 'M',
               0x039D: 'N', 0x039F: 'O', 0x03A1: 'P', 0x03A4: 'T',
               0x03A5: 'Y', 0x03A7: 'X'}
GREEK_LOWER = {0x03BF: 'o', 0x03B9: 'i'}
for table in (CYRILLIC_LOWER, CYRILLIC_UPPER, GREEK_UPPER, GREEK_LOWER):
    for cp, ch in sorted(table.items()):
        add(cp, ord(ch))

# Latin small letter open e and dotless i, marked with historical types to
# exercise the type filter.
add(0x0261, ord('g'), "SA")   # latin small letter script g
add(0x0131, ord('i'), "SL")   # latin small letter dotless i

# Multi-code-point prototypes: validated by the parser but produce no entry.
add(0xFB00, [ord('f'), ord('f')])
add(0xFB01, [ord('f'), ord('i')])
add(0x0133, [ord('i'), ord('j')])
add(0x2026, [ord('.')] * 3)

# A non-Latin pair whose source is itself non-ASCII (never flagged by the
# homograph scanner).
add(0x05AD, 0x0596)

# Duplicate of an earlier entry: parsers must deduplicate it.
add(0x0430, ord('a'))

header = [
    "# confusables.txt - homograph dictionary fixture",
    "# Format: VARIANT ; SOURCE ; TYPE # comment",
    "#",
]
OUT.parent.mkdir(exist_ok=True)
with open(OUT, "w", encoding="utf-8") as f:
    f.write("\n".join(header) + "\n\n")
    for line in lines:
        f.write(line + "\n")
print(f"wrote {OUT} ({len(lines)} data lines)")

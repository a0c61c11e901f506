#!/usr/bin/env python3
"""Generate the default phonetic table bundle from a raw char->pinyin dump.

Input: TSV with two columns, character and a comma-separated list of
numbered-pinyin readings (e.g. "you3,you4"). The output bundle directory
contains readings.tsv, initials.tsv, finals.tsv, tones.tsv and
manifest.json as consumed by phonocorrect.phonetics.load_table.

Coordinates are articulatory-feature vectors for Mandarin initials and
finals. After building the raw tables, every coordinate (and the tone
matrix) is rescaled by one global factor chosen so that the distance
between the readings gao1 and you3 equals CALIBRATION_TARGET.
"""

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

CALIBRATION_TARGET = 9.7
CALIBRATION_PAIR = (("g", "ao", 1), ("y", "ou", 3))

# Two-letter initials must be matched before single letters.
INITIALS = [
    "zh", "ch", "sh",
    "b", "p", "m", "f", "d", "t", "n", "l",
    "g", "k", "h", "j", "q", "x", "r",
    "z", "c", "s", "y", "w",
]

EMPTY_INITIAL = "~"  # reserved symbol for zero-initial syllables

# (place 0=bilabial..7=velar/glottal, manner 0=stop..8=glide, aspirated, voiced)
INITIAL_FEATURES = {
    "b": (0.0, 0.0, 0.0, 0.0),
    "p": (0.0, 0.0, 1.0, 0.0),
    "m": (0.0, 6.0, 0.0, 1.0),
    "f": (1.0, 4.0, 0.0, 0.0),
    "d": (3.0, 0.0, 0.0, 0.0),
    "t": (3.0, 0.0, 1.0, 0.0),
    "n": (3.0, 6.0, 0.0, 1.0),
    "l": (3.0, 7.0, 0.0, 1.0),
    "z": (3.5, 2.0, 0.0, 0.0),
    "c": (3.5, 2.0, 1.0, 0.0),
    "s": (3.5, 4.0, 0.0, 0.0),
    "zh": (4.5, 2.0, 0.0, 0.0),
    "ch": (4.5, 2.0, 1.0, 0.0),
    "sh": (4.5, 4.0, 0.0, 0.0),
    "r": (4.5, 4.5, 0.0, 1.0),
    "j": (5.5, 2.0, 0.0, 0.0),
    "q": (5.5, 2.0, 1.0, 0.0),
    "x": (5.5, 4.0, 0.0, 0.0),
    "g": (7.0, 0.0, 0.0, 0.0),
    "k": (7.0, 0.0, 1.0, 0.0),
    "h": (7.0, 4.0, 0.0, 0.0),
    "y": (5.5, 8.0, 0.0, 1.0),
    "w": (0.5, 8.0, 0.0, 1.0),
    EMPTY_INITIAL: (6.0, 9.0, 0.0, 1.0),
}

INITIAL_WEIGHTS = (1.0, 0.55, 0.9, 0.6)

# Medial glides as (frontness, rounding).
MEDIALS = {
    "": (0.0, 0.0),
    "i": (2.0, 0.0),
    "u": (0.0, 2.0),
    "v": (2.0, 2.0),
}

# Nucleus vowels as (height, backness, rounding).
NUCLEI = {
    "a": (0.0, 1.0, 0.0),
    "o": (1.5, 2.0, 1.0),
    "e": (1.5, 2.0, 0.0),
    "i": (3.0, 0.0, 0.0),
    "u": (3.0, 2.0, 1.0),
    "v": (3.0, 0.0, 1.0),
    "r": (1.5, 1.0, 0.0),   # the rhotic nucleus of "er"
    "n": (2.0, 1.0, 0.0),   # syllabic nasal
}

# Codas as (front offglide, back offglide, nasal).
CODAS = {
    "": (0.0, 0.0, 0.0),
    "i": (1.0, 0.0, 0.0),
    "u": (0.0, 1.0, 0.0),
    "o": (0.0, 1.0, 0.0),
    "n": (0.0, 0.0, 2.0),
    "ng": (0.0, 0.0, 3.2),
    "r": (0.5, 0.5, 0.0),
}

FINAL_WEIGHTS = (0.7, 0.7, 1.0, 0.8, 0.8, 1.0, 1.0, 1.0)

# Structural analysis of every orthographic final: (medial, nucleus, coda).
FINAL_STRUCTURE = {
    "a": ("", "a", ""), "o": ("", "o", ""), "e": ("", "e", ""),
    "i": ("", "i", ""), "u": ("", "u", ""), "v": ("", "v", ""),
    "ai": ("", "a", "i"), "ei": ("", "e", "i"), "ao": ("", "a", "o"),
    "ou": ("", "o", "u"), "an": ("", "a", "n"), "en": ("", "e", "n"),
    "ang": ("", "a", "ng"), "eng": ("", "e", "ng"), "ong": ("u", "o", "ng"),
    "er": ("", "r", "r"),
    "ia": ("i", "a", ""), "ie": ("i", "e", ""), "iao": ("i", "a", "o"),
    "iu": ("i", "o", "u"), "ian": ("i", "a", "n"), "in": ("i", "i", "n"),
    "iang": ("i", "a", "ng"), "ing": ("i", "i", "ng"),
    "iong": ("i", "o", "ng"),
    "ua": ("u", "a", ""), "uo": ("u", "o", ""), "uai": ("u", "a", "i"),
    "ui": ("u", "e", "i"), "uan": ("u", "a", "n"), "un": ("u", "e", "n"),
    "uang": ("u", "a", "ng"), "ueng": ("u", "e", "ng"),
    "ue": ("v", "e", ""), "ve": ("v", "e", ""),
    "van": ("v", "a", "n"), "vn": ("v", "i", "n"),
    # syllabic nasals surface as finals of their own
    "n": ("", "n", "n"), "ng": ("", "n", "ng"), "m": ("", "n", ""),
}

TONES = ["0", "1", "2", "3", "4"]

# Hand-tuned contour dissimilarities; row/col order follows TONES.
TONE_MATRIX = [
    [0.0, 1.0, 0.8, 0.9, 0.7],
    [1.0, 0.0, 1.0, 1.2, 1.4],
    [0.8, 1.0, 0.0, 0.8, 1.2],
    [0.9, 1.2, 0.8, 0.0, 1.0],
    [0.7, 1.4, 1.2, 1.0, 0.0],
]


def split_syllable(syl):
    """Split a toneless pinyin string into (initial, final)."""
    if syl in ("n", "ng", "m"):
        return EMPTY_INITIAL, syl
    if syl == "hng":
        return "h", "ng"
    for ini in INITIALS:
        if syl.startswith(ini) and len(syl) > len(ini):
            return ini, syl[len(ini):]
    return EMPTY_INITIAL, syl


def initial_vector(sym):
    feats = INITIAL_FEATURES[sym]
    return [f * w for f, w in zip(feats, INITIAL_WEIGHTS)]


def final_vector(final):
    med, nuc, coda = FINAL_STRUCTURE[final]
    raw = list(MEDIALS[med]) + list(NUCLEI[nuc]) + list(CODAS[coda])
    return [f * w for f, w in zip(raw, FINAL_WEIGHTS)]


def euclid(a, b):
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def parse_reading(numbered):
    tone = 0
    if numbered and numbered[-1].isdigit():
        tone = int(numbered[-1])
        numbered = numbered[:-1]
    if tone == 5:
        tone = 0
    ini, fin = split_syllable(numbered)
    return ini, fin, tone


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("raw_tsv", type=Path, help="char<TAB>reading,reading dump")
    ap.add_argument("out_dir", type=Path)
    args = ap.parse_args()

    readings = []
    finals_used = set()
    for lineno, line in enumerate(args.raw_tsv.read_text("utf-8").splitlines(), 1):
        if not line.strip():
            continue
        char, raw = line.split("\t")
        for numbered in raw.split(","):
            try:
                ini, fin, tone = parse_reading(numbered)
            except KeyError:
                print(f"line {lineno}: cannot analyse {numbered!r}, skipped",
                      file=sys.stderr)
                continue
            if fin not in FINAL_STRUCTURE:
                print(f"line {lineno}: unknown final {fin!r} in {numbered!r}, skipped",
                      file=sys.stderr)
                continue
            finals_used.add(fin)
            readings.append((char, ini, fin, tone))

    # global calibration against the reference syllable pair
    (ia, fa, ta), (ib, fb, tb) = CALIBRATION_PAIR
    raw_dist = (euclid(initial_vector(ia), initial_vector(ib))
                + euclid(final_vector(fa), final_vector(fb))
                + TONE_MATRIX[ta][tb])
    scale = CALIBRATION_TARGET / raw_dist
    print(f"raw calibration distance {raw_dist:.6f}, scale {scale:.6f}")

    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)

    with open(out / "readings.tsv", "w", encoding="utf-8") as f:
        for char, ini, fin, tone in readings:
            f.write(f"{char}\t{ini}\t{fin}\t{tone}\n")

    with open(out / "initials.tsv", "w", encoding="utf-8") as f:
        for sym in sorted(INITIAL_FEATURES):
            vec = [v * scale for v in initial_vector(sym)]
            f.write(sym + "\t" + " ".join(repr(v) for v in vec) + "\n")

    with open(out / "finals.tsv", "w", encoding="utf-8") as f:
        for fin in sorted(finals_used):
            vec = [v * scale for v in final_vector(fin)]
            f.write(fin + "\t" + " ".join(repr(v) for v in vec) + "\n")

    with open(out / "tones.tsv", "w", encoding="utf-8") as f:
        f.write("\t".join(TONES) + "\n")
        for row in TONE_MATRIX:
            f.write("\t".join(repr(v * scale) for v in row) + "\n")

    digest = hashlib.sha256()
    for name in ("readings.tsv", "initials.tsv", "finals.tsv", "tones.tsv"):
        digest.update((out / name).read_bytes())
    manifest = {
        "version": 1,
        "initial_dim": len(INITIAL_WEIGHTS),
        "final_dim": len(FINAL_WEIGHTS),
        "tones": TONES,
        "empty_initial": EMPTY_INITIAL,
        "characters": len({r[0] for r in readings}),
        "readings": len(readings),
        "sha256": digest.hexdigest(),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n",
                                       encoding="utf-8")
    print(f"wrote {manifest['characters']} chars / {manifest['readings']} readings")


if __name__ == "__main__":
    main()

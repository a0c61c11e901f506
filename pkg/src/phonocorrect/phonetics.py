"""Phonetic distance between Chinese characters.

A character's pronunciation is decomposed into initial, final and tone.
The distance between two readings is the Euclidean distance between the
initial coordinates, plus the Euclidean distance between the final
coordinates, plus a tone-matrix lookup. Character distance is the minimum
over all reading pairs; characters without a reading (punctuation, Latin,
digits) are "uncoverable" and treated as infinitely far by consumers.

All coordinate data lives in a table bundle on disk (see load_table); the
package ships a default bundle under data/default_table.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from ._native import kernels

UNCOVERABLE_VALUE = math.inf


class TableError(Exception):
    """Raised when a phonetic table bundle is missing or malformed."""


@dataclass(frozen=True)
class Pronunciation:
    """One reading of a character: initial symbol, final symbol, tone."""

    initial: str
    final: str
    tone: int


@dataclass(frozen=True)
class CharDistance:
    value: float
    covered: bool = True


UNCOVERABLE = CharDistance(UNCOVERABLE_VALUE, covered=False)


class PhoneticTable:
    """Immutable reading/coordinate tables plus indexed arrays for the kernels.

    Construct via load_table() or default_table().
    """

    def __init__(self, readings, initial_coords, final_coords,
                 tone_labels, tone_dist, empty_initial="~"):
        self.readings: dict[str, tuple[Pronunciation, ...]] = readings
        self.initial_coords: dict[str, np.ndarray] = initial_coords
        self.final_coords: dict[str, np.ndarray] = final_coords
        self.tone_labels: tuple[int, ...] = tuple(tone_labels)
        self.tone_dist: np.ndarray = tone_dist
        self.empty_initial = empty_initial
        self._tone_index = {t: i for i, t in enumerate(self.tone_labels)}
        self._build_index()

    def _build_index(self):
        syll_ids: dict[Pronunciation, int] = {}
        ivecs, fvecs, tones = [], [], []
        for reads in self.readings.values():
            for pron in reads:
                if pron in syll_ids:
                    continue
                syll_ids[pron] = len(syll_ids)
                ivecs.append(self.initial_coords[pron.initial or self.empty_initial])
                fvecs.append(self.final_coords[pron.final])
                tones.append(self._tone_index[pron.tone])
        self._syll_ids = syll_ids
        self._initial_arr = np.ascontiguousarray(ivecs, dtype=np.float64)
        self._final_arr = np.ascontiguousarray(fvecs, dtype=np.float64)
        self._tone_arr = np.asarray(tones, dtype=np.int64)
        self._char_ids = {
            char: np.asarray([syll_ids[p] for p in reads], dtype=np.int64)
            for char, reads in self.readings.items()
        }

    def __contains__(self, char: str) -> bool:
        return char in self.readings

    def __len__(self) -> int:
        return len(self.readings)

    def reading_ids(self, char: str) -> np.ndarray | None:
        return self._char_ids.get(char)

    def syllable_id(self, pron: Pronunciation) -> int | None:
        return self._syll_ids.get(pron)


def _read_coords(path: Path, kind: str) -> dict[str, np.ndarray]:
    coords: dict[str, np.ndarray] = {}
    dim = None
    try:
        lines = path.read_text("utf-8").splitlines()
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise TableError(f"{path}:{lineno}: expected 'symbol<TAB>coords'")
        sym, raw = parts
        try:
            vec = np.asarray([float(x) for x in raw.split()], dtype=np.float64)
        except ValueError as exc:
            raise TableError(f"{path}:{lineno}: bad coordinate: {exc}") from exc
        if dim is None:
            dim = vec.size
        elif vec.size != dim:
            raise TableError(
                f"{path}:{lineno}: dimension mismatch for {kind} symbol "
                f"{sym!r} ({vec.size} != {dim})")
        if sym in coords:
            raise TableError(f"{path}:{lineno}: duplicate {kind} symbol {sym!r}")
        coords[sym] = vec
    if not coords:
        raise TableError(f"{path}: no {kind} coordinates found")
    return coords


def _read_tone_matrix(path: Path):
    try:
        lines = [l for l in path.read_text("utf-8").splitlines() if l.strip()]
    except OSError as exc:
        raise TableError(f"cannot read {path}: {exc}") from exc
    if len(lines) < 2:
        raise TableError(f"{path}: expected a header row plus matrix rows")
    labels = []
    for tok in lines[0].split("\t"):
        try:
            labels.append(int(tok))
        except ValueError as exc:
            raise TableError(f"{path}:1: non-integer tone label {tok!r}") from exc
    n = len(labels)
    if len(lines) != n + 1:
        raise TableError(f"{path}: expected {n} matrix rows, got {len(lines) - 1}")
    rows = []
    for lineno, line in enumerate(lines[1:], 2):
        vals = line.split("\t")
        if len(vals) != n:
            raise TableError(f"{path}:{lineno}: expected {n} entries")
        try:
            rows.append([float(v) for v in vals])
        except ValueError as exc:
            raise TableError(f"{path}:{lineno}: bad entry: {exc}") from exc
    mat = np.asarray(rows, dtype=np.float64)
    if (mat < 0).any():
        raise TableError(f"{path}: tone distances must be non-negative")
    if not np.allclose(mat, mat.T, atol=1e-12):
        raise TableError(f"{path}: tone matrix is not symmetric")
    if not np.allclose(np.diag(mat), 0.0, atol=1e-12):
        raise TableError(f"{path}: tone matrix diagonal must be zero")
    return labels, mat


def load_table(path: str | Path) -> PhoneticTable:
    """Load and validate a phonetic table bundle directory."""
    root = Path(path)
    if not root.is_dir():
        raise TableError(f"table bundle not found: {root}")
    for name in ("readings.tsv", "initials.tsv", "finals.tsv", "tones.tsv"):
        if not (root / name).is_file():
            raise TableError(f"table bundle is missing {name}: {root}")

    manifest = {}
    manifest_path = root / "manifest.json"
    if manifest_path.is_file():
        try:
            manifest = json.loads(manifest_path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise TableError(f"{manifest_path}: {exc}") from exc
    empty_initial = manifest.get("empty_initial", "~")

    initial_coords = _read_coords(root / "initials.tsv", "initial")
    final_coords = _read_coords(root / "finals.tsv", "final")
    tone_labels, tone_dist = _read_tone_matrix(root / "tones.tsv")
    tone_set = set(tone_labels)

    if empty_initial not in initial_coords:
        raise TableError(
            f"{root}: empty-initial symbol {empty_initial!r} has no coordinate")

    readings: dict[str, list[Pronunciation]] = {}
    rpath = root / "readings.tsv"
    for lineno, line in enumerate(rpath.read_text("utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise TableError(
                f"{rpath}:{lineno}: expected 'char<TAB>initial<TAB>final<TAB>tone'")
        char, ini, fin, tone_s = parts
        if ini not in initial_coords:
            raise TableError(f"{rpath}:{lineno}: unknown initial symbol {ini!r}")
        if not fin:
            raise TableError(f"{rpath}:{lineno}: empty final for {char!r}")
        if fin not in final_coords:
            raise TableError(f"{rpath}:{lineno}: unknown final symbol {fin!r}")
        try:
            tone = int(tone_s)
        except ValueError as exc:
            raise TableError(f"{rpath}:{lineno}: bad tone {tone_s!r}") from exc
        if tone not in tone_set:
            raise TableError(
                f"{rpath}:{lineno}: tone {tone} outside table tone set {sorted(tone_set)}")
        pron = Pronunciation(ini, fin, tone)
        bucket = readings.setdefault(char, [])
        if pron not in bucket:
            bucket.append(pron)

    if not readings:
        raise TableError(f"{rpath}: no readings found")

    return PhoneticTable(
        readings={c: tuple(r) for c, r in readings.items()},
        initial_coords=initial_coords,
        final_coords=final_coords,
        tone_labels=tone_labels,
        tone_dist=tone_dist,
        empty_initial=empty_initial,
    )


@lru_cache(maxsize=1)
def default_table() -> PhoneticTable:
    """The bundle shipped with the package."""
    bundle = resources.files("phonocorrect").joinpath("data/default_table")
    return load_table(Path(str(bundle)))


def syllable_distance(a: Pronunciation, b: Pronunciation,
                      table: PhoneticTable) -> float:
    """Initial distance + final distance + tone distance for two readings."""
    try:
        iva = table.initial_coords[a.initial or table.empty_initial]
        ivb = table.initial_coords[b.initial or table.empty_initial]
        fva = table.final_coords[a.final]
        fvb = table.final_coords[b.final]
        ta = table._tone_index[a.tone]
        tb = table._tone_index[b.tone]
    except KeyError as exc:
        raise TableError(f"unknown symbol in pronunciation: {exc}") from exc
    return (float(np.linalg.norm(iva - ivb))
            + float(np.linalg.norm(fva - fvb))
            + float(table.tone_dist[ta, tb]))


def char_distance(c: str, c_prime: str, table: PhoneticTable) -> CharDistance:
    """Minimum syllable distance over all reading pairs of two characters."""
    ids_a = table.reading_ids(c)
    ids_b = table.reading_ids(c_prime)
    if ids_a is None or ids_b is None:
        return UNCOVERABLE
    value = kernels.min_syllable_distance(
        table._initial_arr, table._final_arr, table._tone_arr,
        table.tone_dist, ids_a, ids_b)
    return CharDistance(value)

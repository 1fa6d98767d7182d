"""Benchmark condition catalog and corpus materialization.

A registry is data: an ordered list of conditions, each a recipe of 0-2
perturbation steps. The shipped default has 69 conditions (one clean, ten
single-factor, the rest ordered two-factor pairs). ``materialize`` turns a
clean labeled corpus into one image group per condition, with a manifest of
checksums so runs can be verified byte-for-byte.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from pathlib import Path

from .errors import ManifestError, ParameterError, RegistryError
from .image import Image, netpbm_bytes
from .perturb import Kind, PerturbationStep, apply_sequence, derive_seed

__all__ = [
    "Condition",
    "ConditionRegistry",
    "ManifestEntry",
    "load_registry",
    "load_registry_file",
    "serialize_registry",
    "default_registry",
    "materialize",
    "read_manifest",
    "sha256_file",
]

DEFAULT_GROUP_SIZE = 500

_KIND_NAMES = {"SP": Kind.SALT_PEPPER, "GA": Kind.GAUSSIAN, "ROT": Kind.ROTATION}


def _fmt_intensity(v: float) -> str:
    return format(v, "g")


def _step_label(step: PerturbationStep) -> str:
    return f"{step.kind.value}{_fmt_intensity(step.intensity)}"


@dataclass(frozen=True)
class Condition:
    id: int
    label: str
    steps: tuple[PerturbationStep, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.id < 0:
            raise RegistryError(f"condition id must be >= 0, got {self.id}")
        if len(self.steps) > 2:
            raise RegistryError(
                f"condition {self.id} ({self.label!r}): at most 2 steps, got {len(self.steps)}"
            )

    @classmethod
    def from_steps(cls, cond_id: int, steps) -> "Condition":
        steps = tuple(steps)
        label = "_".join(_step_label(s) for s in steps) if steps else "clean"
        return cls(cond_id, label, steps)


@dataclass(frozen=True)
class ConditionRegistry:
    conditions: tuple[Condition, ...]
    group_size: int = DEFAULT_GROUP_SIZE

    def __post_init__(self):
        conds = tuple(self.conditions)
        object.__setattr__(self, "conditions", conds)
        if self.group_size < 1:
            raise RegistryError(f"group_size must be positive, got {self.group_size}")
        seen = set()
        for c in conds:
            if c.id in seen:
                raise RegistryError(f"duplicate condition id {c.id}")
            seen.add(c.id)
        clean = [c for c in conds if not c.steps]
        if len(clean) != 1 or conds[0].steps or conds[0].id != 0:
            raise RegistryError(
                "registry must have exactly one clean condition, with id 0 at index 0"
            )

    def by_id(self, cond_id: int) -> Condition:
        for c in self.conditions:
            if c.id == cond_id:
                return c
        raise RegistryError(f"no condition with id {cond_id}")


def _parse_step(text: str, where: str) -> PerturbationStep:
    parts = text.split()
    if len(parts) != 2:
        raise RegistryError(f"{where}: step must be 'KIND INTENSITY', got {text!r}")
    kind_name, raw = parts
    if kind_name not in _KIND_NAMES:
        raise RegistryError(f"{where}: unknown perturbation kind {kind_name!r}")
    try:
        intensity = float(raw)
    except ValueError:
        raise RegistryError(f"{where}: bad intensity {raw!r}") from None
    try:
        return PerturbationStep(_KIND_NAMES[kind_name], intensity)
    except ParameterError as exc:
        raise RegistryError(f"{where}: {exc}") from None


def load_registry(text: str, group_size: int = DEFAULT_GROUP_SIZE) -> ConditionRegistry:
    """Parse a registry document.

    One condition per line: ``id | label | step1 | step2`` with ``-`` for an
    absent step and steps written ``SP 0.1``, ``GA 0.15``, ``ROT -30``.
    Blank lines and ``#`` comments are ignored.
    """
    conditions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("|")]
        if len(fields) != 4:
            raise RegistryError(f"line {lineno}: expected 4 '|'-separated fields")
        where = f"line {lineno}"
        try:
            cond_id = int(fields[0])
        except ValueError:
            raise RegistryError(f"{where}: bad condition id {fields[0]!r}") from None
        steps = tuple(
            _parse_step(f, where) for f in fields[2:] if f != "-"
        )
        conditions.append(Condition(cond_id, fields[1], steps))
    return ConditionRegistry(tuple(conditions), group_size=group_size)


def load_registry_file(path: str | Path, group_size: int = DEFAULT_GROUP_SIZE) -> ConditionRegistry:
    return load_registry(Path(path).read_text(encoding="utf-8"), group_size=group_size)


def serialize_registry(reg: ConditionRegistry) -> str:
    lines = []
    for c in reg.conditions:
        cells = [str(c.id), c.label]
        for i in range(2):
            if i < len(c.steps):
                s = c.steps[i]
                cells.append(f"{s.kind.value} {_fmt_intensity(s.intensity)}")
            else:
                cells.append("-")
        lines.append(" | ".join(cells))
    return "\n".join(lines) + "\n"


SP_GRID = (0.1, 0.15, 0.2)
GA_GRID = (0.1, 0.15, 0.2)
ROT_GRID = (-60.0, -30.0, 30.0, 60.0)  # 0 degrees excluded: identity
_ROT_PAD_GA = (0.1, 0.2)  # padding family grid, see default_registry


def default_registry(group_size: int = DEFAULT_GROUP_SIZE) -> ConditionRegistry:
    """The built-in 69-condition registry.

    Condition 0 is clean. Singles cover SP/GA at {0.1, 0.15, 0.2} and
    rotation at {-60, -30, 30, 60} degrees (0-degree entries are identities
    and are dropped rather than duplicated). Two-factor pairs enumerate the
    four ordered families SP-GA, GA-SP, SP-ROT and ROT-SP over those grids.
    That yields 53 conditions; the catalog is padded to exactly 69 with a
    documented GA-ROT / ROT-GA family over GA {0.1, 0.2} x the rotation grid.
    """
    sp = lambda v: PerturbationStep(Kind.SALT_PEPPER, v)
    ga = lambda v: PerturbationStep(Kind.GAUSSIAN, v)
    rot = lambda v: PerturbationStep(Kind.ROTATION, v)

    recipes: list[tuple[PerturbationStep, ...]] = [()]
    recipes += [(sp(d),) for d in SP_GRID]
    recipes += [(ga(s),) for s in GA_GRID]
    recipes += [(rot(d),) for d in ROT_GRID]
    recipes += [(sp(d), ga(s)) for d in SP_GRID for s in GA_GRID]
    recipes += [(ga(s), sp(d)) for s in GA_GRID for d in SP_GRID]
    recipes += [(sp(d), rot(a)) for d in SP_GRID for a in ROT_GRID]
    recipes += [(rot(a), sp(d)) for a in ROT_GRID for d in SP_GRID]
    # padding to the published group count
    recipes += [(ga(s), rot(a)) for s in _ROT_PAD_GA for a in ROT_GRID]
    recipes += [(rot(a), ga(s)) for a in ROT_GRID for s in _ROT_PAD_GA]

    conditions = tuple(Condition.from_steps(i, steps) for i, steps in enumerate(recipes))
    assert len(conditions) == 69
    return ConditionRegistry(conditions, group_size=group_size)


@dataclass(frozen=True)
class ManifestEntry:
    condition_id: int
    condition_label: str
    source_filename: str
    output_path: str  # relative to the corpus root
    true_label: str
    checksum: str


MANIFEST_FIELDS = [
    "condition_id",
    "condition_label",
    "source_filename",
    "output_path",
    "true_label",
    "checksum",
]
MANIFEST_NAME = "manifest.csv"


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def materialize(
    clean: list[tuple[str, str, Image]],
    registry: ConditionRegistry,
    seed: int,
    out_dir: str | Path,
) -> list[ManifestEntry]:
    """Write one image group per condition plus a manifest.

    ``clean`` is a list of (filename, true_label, image). Group 0 is a
    byte-identical re-encoding of the clean images; every other group applies
    the condition's step sequence with sub-seed derive_seed(seed, condition_id,
    image_index). Output bytes depend only on (clean, registry, seed).
    """
    if not clean:
        raise ParameterError("clean corpus is empty")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries: list[ManifestEntry] = []
    for cond in registry.conditions:
        group_dir = out_dir / f"cond_{cond.id:03d}"
        group_dir.mkdir(exist_ok=True)
        for idx, (name, true_label, img) in enumerate(clean):
            sub_seed = derive_seed(seed, cond.id, idx)
            result = apply_sequence(img, cond.steps, sub_seed) if cond.steps else img
            data = netpbm_bytes(result)
            out_path = group_dir / name
            out_path.write_bytes(data)
            entries.append(
                ManifestEntry(
                    condition_id=cond.id,
                    condition_label=cond.label,
                    source_filename=name,
                    output_path=str(out_path.relative_to(out_dir)),
                    true_label=true_label,
                    checksum=hashlib.sha256(data).hexdigest(),
                )
            )
    with open(out_dir / MANIFEST_NAME, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=MANIFEST_FIELDS)
        writer.writeheader()
        for e in entries:
            writer.writerow(vars(e))
    return entries


def read_manifest(corpus_dir: str | Path) -> list[ManifestEntry]:
    path = Path(corpus_dir) / MANIFEST_NAME
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    entries = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != MANIFEST_FIELDS:
            raise ManifestError(f"{path}: unexpected manifest header {reader.fieldnames}")
        for row in reader:
            entries.append(
                ManifestEntry(
                    condition_id=int(row["condition_id"]),
                    condition_label=row["condition_label"],
                    source_filename=row["source_filename"],
                    output_path=row["output_path"],
                    true_label=row["true_label"],
                    checksum=row["checksum"],
                )
            )
    return entries


def verify_manifest(corpus_dir: str | Path, entries: list[ManifestEntry]) -> None:
    """Abort with ManifestError on the first missing or altered file."""
    corpus_dir = Path(corpus_dir)
    for e in entries:
        path = corpus_dir / e.output_path
        if not path.is_file():
            raise ManifestError(f"missing corpus file: {path}")
        if sha256_file(path) != e.checksum:
            raise ManifestError(f"checksum mismatch: {path}")

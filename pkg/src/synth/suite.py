"""Writing synthetic datasets and their manifest."""

import json
from pathlib import Path
from typing import List, Sequence, Union

from joblib import Parallel, delayed

from ..dataset import write_csv
from ..logger import get_logger
from .generators import generate
from .spec import SynthSpec

logger = get_logger(__name__)

TARGET_COLUMN = "y"
MANIFEST_NAME = "manifest.json"


def _write_one(spec: SynthSpec, out_dir: Path) -> str:
    filename = f"{spec.name}.csv"
    write_csv(generate(spec), out_dir / filename, target=TARGET_COLUMN)
    return filename


def write_suite(specs: Sequence[SynthSpec], out_dir: Union[str, Path], jobs: int = 1) -> Path:
    """
    Write one CSV per spec plus ``manifest.json`` recording every spec.

    Returns:
        Path of the manifest

    Raises:
        ValueError: Two specs share a name
    """
    names = [spec.name for spec in specs]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise ValueError(f"duplicate dataset names in suite: {duplicates}")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if jobs != 1:
        files: List[str] = Parallel(n_jobs=jobs)(delayed(_write_one)(spec, out_dir) for spec in specs)
    else:
        files = [_write_one(spec, out_dir) for spec in specs]

    manifest = {
        "target": TARGET_COLUMN,
        "datasets": [
            {
                "file": filename,
                "mode": spec.mode,
                "relevant_features": list(spec.relevant_names),
                "spec": spec.model_dump(),
            }
            for filename, spec in zip(files, specs)
        ],
    }
    manifest_path = out_dir / MANIFEST_NAME
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote {len(files)} synthetic datasets to {out_dir}")
    return manifest_path


def load_manifest(path: Union[str, Path]) -> List[SynthSpec]:
    """Specs recorded in a manifest, in file order."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return [SynthSpec.model_validate(entry["spec"]) for entry in payload["datasets"]]

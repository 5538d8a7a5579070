import json
from pathlib import Path
from typing import Any, Iterable

import pandas as pd

from src.utils.errors import InputError


def read_file(file_path, module: str = "cli") -> str:
    encodings = ["utf-8", "utf-8-sig", "latin1"]
    for enc in encodings:
        try:
            with open(file_path, "r", encoding=enc) as f:
                return f.read()
        except FileNotFoundError as exc:
            raise InputError(f"file not found: {file_path}", module) from exc
        except UnicodeDecodeError:
            continue
        except OSError as exc:
            raise InputError(f"cannot read file {file_path}: {exc.strerror or exc}", module) from exc
    raise InputError(f"cannot read file {file_path} with supported encodings", module)


def read_json(file_path, module: str = "cli") -> Any:
    try:
        return json.loads(read_file(file_path, module))
    except json.JSONDecodeError as exc:
        raise InputError(f"cannot parse {file_path}: {exc}", module) from exc


def write_file(path: str, content: str) -> Path:
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)

    clean_content = content.strip()
    final_content = clean_content + "\n" if clean_content else ""
    file_path.write_text(final_content, encoding="utf-8")
    return file_path


def to_json(document: Any) -> str:
    """Stable JSON text: sorted keys, so equal documents give equal bytes."""
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False, default=str)


def write_json(path: str, document: Any) -> Path:
    return write_file(path, to_json(document))


def write_jsonl(path: str, rows: Iterable[dict]) -> Path:
    """One JSON object per line (cut reports, Cheeger results)."""
    lines = [json.dumps(row, sort_keys=True, default=str) for row in rows]
    return write_file(path, "\n".join(lines))


def write_csv(path: str, frame: pd.DataFrame) -> Path:
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(file_path, index=False, float_format="%.17g")
    return file_path

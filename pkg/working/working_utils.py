import os
import io
import pandas as pd
from typing import Dict, Any, Iterable, Optional

# all numeric exports use 17 significant digits so a re-read reproduces the doubles
FLOAT_FORMAT = "%.17g"

def frame_to_csv(df: pd.DataFrame, comments: Optional[Iterable[str]] = None) -> str:
    # render a dataframe as CSV text (',' separator, LF endings) with optional '#' trailer rows
    buf = io.StringIO()
    df.to_csv(buf, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    for line in comments or ():
        buf.write(f"# {line}\n")
    return buf.getvalue()

def save_csv(df: pd.DataFrame, path: str, comments: Optional[Iterable[str]] = None) -> Dict[str, Any]:
    # write CSV to path atomically; returns a status dict, never throws on OSError
    try:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8", newline="") as f:
            f.write(frame_to_csv(df, comments))
        os.replace(tmp, path)
        return {"ok": True, "path": path, "rows": int(len(df)), "message": f"Wrote {len(df)} rows."}
    except OSError as e:
        return {"ok": False, "path": path, "rows": 0, "message": f"Failed to write CSV: {e}"}

def load_csv(path: str) -> Optional[pd.DataFrame]:
    # read a CSV written by save_csv (comment rows skipped). Returns None if missing
    if not os.path.exists(path):
        return None
    return pd.read_csv(path, comment="#", float_precision="round_trip")

import os
from pathlib import Path


def out_dir(name):
    """Demo output folder under $CSI_OUTPUT_DIR (default ./demo-out)."""
    path = Path(os.environ.get("CSI_OUTPUT_DIR", "demo-out")) / name
    path.mkdir(parents=True, exist_ok=True)
    return path

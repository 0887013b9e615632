"""Run directories: headed output files, manifests and key-value config files."""

import hashlib
import os
from pathlib import Path

OUTPUT_ENV = "CSI_OUTPUT_DIR"
DEFAULT_OUTPUT = "csi-out"


def default_output_dir():
    return os.environ.get(OUTPUT_ENV, DEFAULT_OUTPUT)


def read_config_file(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq or not key.strip():
            raise ValueError(f"{path}:{n}: expected key = value")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def canonical_config(items):
    """Sorted ``key=value`` lines; the exact text that goes into headers."""
    return [f"{k}={items[k]}" for k in sorted(items)]


def config_hash(lines, extra=b""):
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode("utf-8") + b"\n")
    h.update(extra)
    return h.hexdigest()


class RunDirectory:
    """Collects artifacts for one invocation and writes ``manifest.csv``."""

    def __init__(self, path, command, config_lines, input_bytes=b""):
        self.path = Path(path)
        self.command = command
        self.config_lines = list(config_lines)
        self.hash = config_hash([f"command={command}"] + self.config_lines, input_bytes)
        self.entries = []

    def header(self):
        return [f"csi {self.command}"] + self.config_lines + [f"input_hash=sha256:{self.hash}"]

    def write(self, name, content):
        """Write ``content`` (str or bytes) and record it in the manifest."""
        self.path.mkdir(parents=True, exist_ok=True)
        data = content.encode("utf-8") if isinstance(content, str) else content
        (self.path / name).write_bytes(data)
        self.entries.append((name, hashlib.sha256(data).hexdigest()))
        return self.path / name

    def close(self):
        lines = [f"# {line}" for line in self.header()]
        lines.append("artifact,config_hash,sha256")
        lines += [f"{name},{self.hash},{digest}" for name, digest in sorted(self.entries)]
        self.path.mkdir(parents=True, exist_ok=True)
        (self.path / "manifest.csv").write_text("\n".join(lines) + "\n")

"""Job configuration: an INI file merged with command-line flags.

Flags win over the file, the file wins over built-in defaults.  Every
resolved value is kept so it can be written into output headers.

Example file::

    [design]
    builder = figure8
    v = 1.0

    [smoothing]
    step = 0.01
    order = 3
    remove = [(1.0, 3, 3), (2.5, 3, 3)]

    [noise]
    samples = 100
    seed = 0
"""
from __future__ import annotations

import ast
import configparser
from pathlib import Path

from .errors import InputError


class JobConfig:
    """Sectioned ``key = value`` settings with typed lookups.

    Parameters
    ----------
    sections : dict
        ``{section: {key: raw string}}``.
    source : str
        Where the values came from (a path, or ``""`` for none).
    """

    def __init__(self, sections: dict | None = None, source: str = ""):
        self.sections = {s.lower(): {k.lower(): v for k, v in kv.items()} for s, kv in (sections or {}).items()}
        self.source = source
        self.resolved: dict[str, object] = {}

    @classmethod
    def load(cls, path) -> "JobConfig":
        if path is None:
            return cls()
        parser = configparser.ConfigParser(interpolation=None)
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise InputError(f"{path}: cannot read config ({exc.strerror})") from None
        except configparser.Error as exc:
            raise InputError(f"{path}: malformed config: {exc}") from None
        return cls({s: dict(parser.items(s)) for s in parser.sections()}, str(path))

    def raw(self, section: str, key: str):
        return self.sections.get(section.lower(), {}).get(key.lower())

    def value(self, section: str, key: str, flag=None, default=None, kind=str):
        """Resolve ``section.key``: ``flag`` if given, else the file, else ``default``.

        ``kind`` converts file strings (``float``, ``int``, ``bool``, ``str``,
        ``"floats"`` for a comma list, ``"removals"`` for a Python literal list
        of ``(loc, before, after)`` triples).
        """
        if flag is not None:
            out = flag
        else:
            text = self.raw(section, key)
            out = default if text is None else _convert(text, kind, f"{section}.{key}")
        self.resolved[f"{section}.{key}"] = out
        return out

    def provenance(self) -> dict:
        """Flat ``{"cfg.section.key": value}`` for output headers."""
        meta = {"cfg.source": self.source or "none"}
        for key, val in sorted(self.resolved.items()):
            if val is None:
                continue
            meta[f"cfg.{key}"] = _render(val)
        return meta


def _render(val) -> str:
    if isinstance(val, (list, tuple)):
        return " ".join(_render(v) for v in val)
    if isinstance(val, float):
        return repr(val)
    return str(val)


def _convert(text: str, kind, name: str):
    text = text.strip()
    try:
        if kind is bool:
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if kind == "floats":
            return [float(x) for x in text.replace(";", ",").split(",") if x.strip()]
        if kind == "removals":
            return parse_removals(text)
        return kind(text)
    except (ValueError, SyntaxError) as exc:
        raise InputError(f"config {name}: cannot parse {text!r} ({exc})") from None


def parse_removals(text: str) -> tuple:
    """``"[(loc, before, after), ...]"`` to a tuple of triples."""
    try:
        data = ast.literal_eval(text)
    except (ValueError, SyntaxError):
        raise InputError(f"removal list {text!r} is not a literal list of triples") from None
    if isinstance(data, tuple) and len(data) == 3 and not isinstance(data[0], (tuple, list)):
        data = [data]
    out = []
    for item in data:
        if not (isinstance(item, (tuple, list)) and len(item) == 3):
            raise InputError(f"removal entry {item!r} is not (loc, before, after)")
        out.append((float(item[0]), int(item[1]), int(item[2])))
    return tuple(out)


def ensure_writable(path) -> Path:
    """Check that ``path`` can be created; return it as a Path."""
    p = Path(path)
    parent = p.parent if str(p.parent) else Path(".")
    if not parent.is_dir():
        raise InputError(f"{p}: directory {parent} does not exist")
    if p.exists() and p.is_dir():
        raise InputError(f"{p}: is a directory")
    return p

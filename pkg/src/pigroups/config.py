"""Search caps.

Defaults can be overridden by a ``key = value`` file named in
``PIGROUPS_CONFIG`` and then by ``PIGROUPS_<KEY>`` environment variables.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import InputError


@dataclass(frozen=True)
class Caps:
    ball_radius: int = 8
    index_cap: int = 10000
    search_length: int = 8
    tree_nodes: int = 8


def _parse(text: str, origin: str) -> dict:
    known = {f.name for f in fields(Caps)}
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{origin}:{n}: expected key = value")
        k, v = (x.strip() for x in line.split("=", 1))
        if k not in known:
            raise InputError(f"{origin}:{n}: unknown setting {k!r}")
        out[k] = _int(v, f"{origin}:{n}")
    return out


def _int(v: str, where: str) -> int:
    try:
        x = int(v)
    except ValueError:
        raise InputError(f"{where}: {v!r} is not an integer") from None
    if x < 0:
        raise InputError(f"{where}: caps must be non-negative")
    return x


def load(env=None) -> Caps:
    env = os.environ if env is None else env
    caps = Caps()
    path = env.get("PIGROUPS_CONFIG")
    if path:
        try:
            with open(path) as fh:
                caps = replace(caps, **_parse(fh.read(), path))
        except OSError as exc:
            raise InputError(f"cannot read config {path}: {exc.strerror}") from None
    for f in fields(Caps):
        v = env.get("PIGROUPS_" + f.name.upper())
        if v is not None:
            caps = replace(caps, **{f.name: _int(v, "PIGROUPS_" + f.name.upper())})
    return caps

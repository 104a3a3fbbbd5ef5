"""Sectioned key=value config format: parsing, defaults, serialization.

The format is deliberately tiny: `[section]` headers, `key = value` lines,
`#` comments (whole-line or trailing), UTF-8. Sections are system, room,
vcsel, led, receiver, noise, run. Keys are exactly the parameter names of
the scenario types plus the run-control keys below; unknown sections or
keys are hard errors with line numbers, so typos never pass silently. SI
base units throughout except keys suffixed _db / _db_per_hz.
"""

from __future__ import annotations

from .errors import ConfigError
from .scenario import CONFIG_SCHEMA

# Run-control keys (how to sweep), as opposed to what to simulate.
RUN_SCHEMA: dict[str, tuple[str, object]] = {
    "run.systems": ("systems", "both"),
    "run.users": ("str", "2:12:2"),
    "run.drops": ("int", 100),
    "run.seed": ("int", 42),
    "run.out": ("str", "out"),
    "run.plots": ("bool", False),
    "run.dump_channel": ("bool", False),
    "run.overload": ("overload", "joint"),
    "run.workers": ("int", 1),
}

FULL_SCHEMA = {**CONFIG_SCHEMA, **RUN_SCHEMA}

SECTIONS = ("system", "room", "vcsel", "led", "receiver", "noise", "run")

_BOOL_WORDS = {
    "true": True, "yes": True, "on": True, "1": True,
    "false": False, "no": False, "off": False, "0": False,
}


def _parse_value(key: str, text: str, line_no: int):
    kind = FULL_SCHEMA[key][0]
    if kind == "int":
        try:
            return int(text)
        except ValueError:
            raise ConfigError(
                f"invalid value for '{key}': {text!r} is not an integer (line {line_no})"
            ) from None
    if kind == "float":
        try:
            return float(text)
        except ValueError:
            raise ConfigError(
                f"invalid value for '{key}': {text!r} is not a number (line {line_no})"
            ) from None
    if kind == "bool":
        word = text.strip().lower()
        if word not in _BOOL_WORDS:
            raise ConfigError(
                f"invalid value for '{key}': {text!r} is not a boolean (line {line_no})"
            )
        return _BOOL_WORDS[word]
    if kind == "rate_model":
        if text not in ("shannon", "ook"):
            raise ConfigError(
                f"invalid value for '{key}': expected shannon or ook (line {line_no})"
            )
        return text
    if kind == "systems":
        if text not in ("vcsel", "led", "both"):
            raise ConfigError(
                f"invalid value for '{key}': expected vcsel, led, or both (line {line_no})"
            )
        return text
    if kind == "overload":
        if text not in ("joint", "timeshare"):
            raise ConfigError(
                f"invalid value for '{key}': expected joint or timeshare (line {line_no})"
            )
        return text
    if kind == "vec3_list":
        # Semicolon-separated "x,y" pairs on the receive plane.
        pairs = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            parts = [p.strip() for p in chunk.split(",")]
            if len(parts) != 2:
                raise ConfigError(
                    f"invalid value for '{key}': expected 'x,y' pairs separated "
                    f"by ';' (line {line_no})"
                )
            try:
                pairs.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise ConfigError(
                    f"invalid value for '{key}': {chunk!r} is not a coordinate "
                    f"pair (line {line_no})"
                ) from None
        return tuple(pairs)
    return text.strip()  # "str"


def parse_config(text: str) -> dict:
    """Parse config text into a flat {'section.key': value} map.

    Values are already type-converted per the key schema. Later assignments
    of the same key override earlier ones.
    """
    values = {}
    section = None
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise ConfigError(f"unknown section '{section}' (line {line_no})")
            continue
        if "=" not in line:
            raise ConfigError(f"malformed line (no '=') (line {line_no})")
        if section is None:
            raise ConfigError(f"key outside any [section] (line {line_no})")
        key, _, value = line.partition("=")
        key = key.strip()
        full_key = f"{section}.{key}"
        if full_key not in FULL_SCHEMA:
            raise ConfigError(f"unknown key '{key}' (line {line_no})")
        values[full_key] = _parse_value(full_key, value.strip(), line_no)
    return values


def resolved_config(raw: dict) -> dict:
    """Fill in every schema default the raw map leaves unset.

    Keys whose default is None (per-system resolution) stay absent unless
    explicitly configured.
    """
    out = {}
    for key, (_, default) in FULL_SCHEMA.items():
        if key in raw:
            out[key] = raw[key]
        elif default is not None:
            out[key] = default
    return out


def _format_value(key: str, value) -> str:
    kind = FULL_SCHEMA[key][0]
    if kind == "bool":
        return "true" if value else "false"
    if kind == "vec3_list":
        return "; ".join(f"{x!r}, {y!r}" for x, y in value)
    if kind == "float":
        return repr(float(value))
    return str(value)


def serialize_config(values: dict) -> str:
    """Render a key-value map back to config text.

    parse_config(serialize_config(m)) == m for any schema-conformant m;
    floats are written with shortest round-trip repr.
    """
    lines = []
    for section in SECTIONS:
        keys = [k for k in FULL_SCHEMA if k.startswith(section + ".") and k in values]
        if not keys:
            continue
        lines.append(f"[{section}]")
        for key in keys:
            value = values[key]
            lines.append(f"{key.split('.', 1)[1]} = {_format_value(key, value)}")
        lines.append("")
    return "\n".join(lines)

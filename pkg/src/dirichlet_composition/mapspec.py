"""Textual map specifications.

Accepted forms::

    id                              the identity
    rot:<theta>                     z -> e^{i theta} z
    hyp:t=<real>                    z -> (z + t)/(1 + t z)
    auto:a=<complex>,theta=<real>   z -> e^{i theta}(a - z)/(1 - conj(a) z)
    <a>,<b>,<c>,<d>                 z -> (a z + b)/(c z + d)
    a=<a>,b=<b>,c=<c>,d=<d>         the same, keyed (any order)

Complex literals are "x+yi" with either part optional ("2", "-0.5i", "i",
"1e-3-2i").  Angles are in radians.  Whitespace around tokens is ignored.
"""

from __future__ import annotations

import re

from .errors import MapSpecError
from .mobius import MobiusMap

_REAL = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_REAL_RE = re.compile(rf"\s*({_REAL})\s*$")
_COMPLEX_RE = re.compile(
    rf"""\s*(?:
        (?P<re>{_REAL})(?P<im_sign>[+-])(?P<im_mag>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)?[ij]
      | (?P<im_only>[+-]?(?:(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)?)[ij]
      | (?P<re_only>{_REAL})
    )\s*$""",
    re.VERBOSE,
)


def parse_real(text: str, source: str | None = None, offset: int = 0) -> float:
    m = _REAL_RE.match(text)
    if not m:
        raise MapSpecError("expected a real number", source or text, offset + _token_start(text))
    return float(m.group(1))


def parse_complex(text: str, source: str | None = None, offset: int = 0) -> complex:
    """Parse an "x+yi" literal; ``source``/``offset`` locate errors in a larger string."""
    m = _COMPLEX_RE.match(text)
    if not m:
        raise MapSpecError("expected a complex literal x+yi", source or text, offset + _token_start(text))
    if m.group("re_only") is not None:
        return complex(float(m.group("re_only")), 0.0)
    if m.group("re") is not None:
        mag = float(m.group("im_mag")) if m.group("im_mag") else 1.0
        sign = -1.0 if m.group("im_sign") == "-" else 1.0
        return complex(float(m.group("re")), sign * mag)
    im = m.group("im_only")
    if im in ("", "+"):
        return 1j
    if im == "-":
        return -1j
    return complex(0.0, float(im))


def _token_start(text: str) -> int:
    return len(text) - len(text.lstrip())


def _fields(body: str, source: str, start: int) -> list[tuple[str, int]]:
    """Split on commas, keeping each piece's offset in ``source``."""
    out, pos = [], start
    for piece in body.split(","):
        out.append((piece, pos))
        pos += len(piece) + 1
    return out


def _keyed(body: str, source: str, start: int, keys: tuple[str, ...]) -> dict[str, tuple[str, int]]:
    found: dict[str, tuple[str, int]] = {}
    for piece, pos in _fields(body, source, start):
        if "=" not in piece:
            raise MapSpecError("expected key=value", source, pos)
        key, value = piece.split("=", 1)
        name = key.strip()
        if name not in keys:
            raise MapSpecError(f"unknown key {name!r}", source, pos)
        if name in found:
            raise MapSpecError(f"duplicate key {name!r}", source, pos)
        found[name] = (value, pos + len(key) + 1)
    missing = [k for k in keys if k not in found]
    if missing:
        raise MapSpecError(f"missing key {missing[0]!r}", source, len(source))
    return found


def parse_map(text: str) -> MobiusMap:
    """Parse a map specification; errors carry the offending position."""
    src = text
    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    if not stripped:
        raise MapSpecError("empty map specification", src, 0)
    try:
        if stripped == "id":
            return MobiusMap.identity()
        if stripped.startswith("rot:"):
            theta = parse_real(stripped[4:], src, lead + 4)
            return MobiusMap.rotation(theta)
        if stripped.startswith("hyp:"):
            f = _keyed(stripped[4:], src, lead + 4, ("t",))
            t = parse_real(f["t"][0], src, f["t"][1])
            if not -1.0 < t < 1.0:
                raise MapSpecError("t must lie in (-1, 1)", src, f["t"][1])
            return MobiusMap.hyperbolic(t)
        if stripped.startswith("auto:"):
            f = _keyed(stripped[5:], src, lead + 5, ("a", "theta"))
            a = parse_complex(f["a"][0], src, f["a"][1])
            if abs(a) >= 1.0:
                raise MapSpecError("|a| must be < 1", src, f["a"][1])
            theta = parse_real(f["theta"][0], src, f["theta"][1])
            return MobiusMap.from_automorphism(a, theta)
        if ":" in stripped:
            raise MapSpecError("unknown map kind", src, lead)
        if "=" in stripped:
            f = _keyed(stripped, src, lead, ("a", "b", "c", "d"))
            coeffs = [parse_complex(f[k][0], src, f[k][1]) for k in "abcd"]
        else:
            pieces = _fields(stripped, src, lead)
            if len(pieces) != 4:
                raise MapSpecError(f"expected 4 coefficients, got {len(pieces)}", src, lead)
            coeffs = [parse_complex(p, src, pos) for p, pos in pieces]
        return MobiusMap(*coeffs)
    except MapSpecError:
        raise
    except Exception as exc:  # degenerate coefficients and the like
        raise MapSpecError(str(exc), src, lead) from exc

"""Parser, validator and serializer for scenario (.cp) files.

Grammar (line oriented, UTF-8):

    document    = { line }
    line        = blank | comment | section | entry
    comment     = "#" any*
    section     = "[" identifier "]"
    entry       = identifier "=" atom { atom }          ; inside a section
    identifier  = letter { letter | digit | "_" | "-" }
    atom        = identifier | integer | float | complex

Numbers accept decimal and scientific literals; complex atoms use the
Python literal form (0.7+0.2j).  Duplicate keys inside a section and
duplicate sections are rejected.  All parse errors carry line and column;
validation errors are aggregated, never first-error-only.

Recognized sections and keys:

    [scenario]        name (required), seed, samples, corrupt, tol-scale
    [algebra]         presentation, gamma, q, z0, norm, dim
    [action]          kind (required), alpha, beta, gamma, group, corrupt
    [discretization]  grid, box, hermite, window, group-grid
    [checks]          <check-id> = <tolerance> [<samples>]

Action kinds map onto the scenario catalogue:

    mult -> s1 (s2 when [algebra] norm = sup-compact), lie -> s3,
    heisenberg -> s4, qplane -> s5, b3 -> s6, b4 -> s7, x3 -> s8,
    suq11 -> s9, ostar-matrix -> ostar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ScenarioParseError, ScenarioValidationError
from .scenarios import Scenario

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_-]*\Z")

ACTION_KINDS = {
    "mult": "s1", "lie": "s3", "heisenberg": "s4", "qplane": "s5",
    "b3": "s6", "b4": "s7", "x3": "s8", "suq11": "s9", "ostar-matrix": "ostar",
}

CORRUPT_TAGS = {
    "s1": "permute-diag", "s2": "escape-support", "s3": "drop-modular",
    "s4": "flip-sign", "s5": "wrong-q", "s6": "wrong-pattern",
    "s7": "alpha-beta-gamma", "s8": "wrong-sign", "s9": "wrong-lattice",
    "ostar": "flip-orientation",
}

_SECTION_ORDER = ("scenario", "algebra", "action", "discretization", "checks")


@dataclass
class ScenarioDoc:
    """Parsed, unvalidated scenario document."""

    sections: dict = field(default_factory=dict)  # section -> {key: tuple(atoms)}

    def get(self, section: str, key: str, default=None):
        atoms = self.sections.get(section, {}).get(key)
        return atoms[0] if atoms else default

    def atoms(self, section: str, key: str):
        return self.sections.get(section, {}).get(key)


def _parse_atom(tok: str, lineno: int, col: int):
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        pass
    # identifiers win over numeric forms whenever the token starts with a
    # letter, so bare "j" is a name, never the imaginary unit
    if _IDENT.match(tok):
        return tok
    if re.fullmatch(r"[0-9+\-.eEjJ()]+", tok):
        try:
            return complex(tok)
        except ValueError:
            pass
    raise ScenarioParseError(f"bad atom {tok!r}", lineno, col)


def parse(text) -> ScenarioDoc:
    """Parse scenario text; total on arbitrary byte input (raises only
    ScenarioParseError, with line and column)."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ScenarioParseError(f"not valid UTF-8: {e.reason}", 1, e.start + 1)
    if not isinstance(text, str):
        raise ScenarioParseError("input must be text", 1, 1)
    doc = ScenarioDoc()
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        col = raw.index(stripped[0]) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ScenarioParseError("unterminated section header", lineno, col)
            name = stripped[1:-1].strip()
            if not _IDENT.match(name):
                raise ScenarioParseError(f"bad section name {name!r}", lineno, col + 1)
            if name in doc.sections:
                raise ScenarioParseError(f"duplicate section [{name}]", lineno, col)
            doc.sections[name] = {}
            current = name
            continue
        if "=" not in stripped:
            raise ScenarioParseError("expected 'key = value'", lineno, col)
        if current is None:
            raise ScenarioParseError("entry outside any section", lineno, col)
        key, _, rhs = stripped.partition("=")
        key = key.strip()
        if not _IDENT.match(key):
            raise ScenarioParseError(f"bad key {key!r}", lineno, col)
        if key in doc.sections[current]:
            raise ScenarioParseError(f"duplicate key {key!r} in [{current}]", lineno, col)
        toks = rhs.split()
        if not toks:
            raise ScenarioParseError(f"missing value for {key!r}", lineno, col)
        atoms = tuple(_parse_atom(t, lineno, raw.index(t) + 1) for t in toks)
        doc.sections[current][key] = atoms
    return doc


def _fmt_atom(a) -> str:
    if isinstance(a, complex):
        return repr(a).strip("()")
    return repr(a) if isinstance(a, float) else str(a)


def serialize(doc: ScenarioDoc) -> str:
    """Canonical text form; parse(serialize(parse(t))) == parse(t)."""
    out = []
    names = [s for s in _SECTION_ORDER if s in doc.sections]
    names += sorted(s for s in doc.sections if s not in _SECTION_ORDER)
    for sec in names:
        out.append(f"[{sec}]")
        for key in sorted(doc.sections[sec]):
            atoms = " ".join(_fmt_atom(a) for a in doc.sections[sec][key])
            out.append(f"{key} = {atoms}")
        out.append("")
    return "\n".join(out)


def _want_number(doc, errors, section, key, default=None):
    atoms = doc.atoms(section, key)
    if atoms is None:
        return default
    v = atoms[0]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        errors.append(f"[{section}] {key} must be a real number, got {v!r}")
        return default
    return v


def validate(doc: ScenarioDoc) -> Scenario:
    """Resolve references, enforce constraints, fill defaults; error list
    is aggregated into one ScenarioValidationError."""
    errors = []
    name = doc.get("scenario", "name")
    if not isinstance(name, str):
        errors.append("[scenario] name is required")
        name = "unnamed"
    kind_key = doc.get("action", "kind")
    if kind_key is None:
        errors.append("[action] kind is required; valid kinds: "
                      + ", ".join(sorted(ACTION_KINDS)))
        kind = "s1"
    elif kind_key not in ACTION_KINDS:
        errors.append(f"unknown action kind {kind_key!r}; valid kinds: "
                      + ", ".join(sorted(ACTION_KINDS)))
        kind = "s1"
    else:
        kind = ACTION_KINDS[kind_key]
    if kind == "s1" and doc.get("algebra", "norm") == "sup-compact":
        kind = "s2"

    params = {}
    gamma = _want_number(doc, errors, "algebra", "gamma")
    if gamma is None:
        gamma = _want_number(doc, errors, "action", "gamma")
    alpha = _want_number(doc, errors, "action", "alpha")
    beta = _want_number(doc, errors, "action", "beta")
    if kind in ("s5", "s6", "s8"):
        if gamma is None:
            gamma = 0.0625
        if alpha is None and beta is None:
            alpha = 0.25
            beta = gamma / alpha
        elif alpha is not None and beta is None:
            beta = gamma / alpha
        elif alpha is None:
            alpha = gamma / beta
        if abs(alpha * beta - gamma) > 1e-12:
            errors.append(
                f"alpha*beta = {alpha * beta!r} must equal gamma = {gamma!r} "
                "for this action kind")
        params.update(gamma=gamma, alpha=alpha, beta=beta)
    if kind == "s7":
        if gamma is None:
            gamma = -0.4375
        if alpha is None and beta is None:
            alpha = 0.25
            beta = (gamma + 0.5) / alpha
        elif alpha is not None and beta is None:
            beta = (gamma + 0.5) / alpha
        elif alpha is None:
            alpha = (gamma + 0.5) / beta
        if abs(alpha * beta - (gamma + 0.5)) > 1e-12:
            errors.append(
                f"alpha*beta = {alpha * beta!r} must equal gamma + 1/2 = "
                f"{gamma + 0.5!r} for the matrix-symbol action")
        params.update(gamma=gamma, alpha=alpha, beta=beta)
    if kind == "s3":
        group = doc.get("action", "group", "aff")
        if group not in ("R", "aff"):
            errors.append(f"unknown group {group!r}; valid: R, aff")
        params["group"] = group
    if kind == "s9":
        q = _want_number(doc, errors, "algebra", "q", 0.8)
        if q in (0.0, 1.0, -1.0):
            errors.append("q must be real and different from 0, 1, -1")
        params["q"] = q
        z0 = doc.get("algebra", "z0")
        if z0 is not None:
            params["z0"] = complex(z0)
    if kind == "ostar":
        dim = _want_number(doc, errors, "algebra", "dim", 6)
        params["dim"] = int(dim)

    corrupt = doc.get("action", "corrupt", "none")
    if corrupt != "none" and corrupt != CORRUPT_TAGS.get(kind):
        errors.append(f"corrupt tag {corrupt!r} is not the designated control "
                      f"for {kind} (expected {CORRUPT_TAGS.get(kind)!r})")

    grid_n = int(_want_number(doc, errors, "discretization", "grid", 256))
    box = float(_want_number(doc, errors, "discretization", "box", 8.0))
    hermite = int(_want_number(doc, errors, "discretization", "hermite", 32))
    window = int(_want_number(doc, errors, "discretization", "window", 20))
    group_n = int(_want_number(doc, errors, "discretization", "group-grid", 48))
    if grid_n < 16 or (grid_n & (grid_n - 1)) != 0:
        errors.append(f"grid must be a power of two >= 16, got {grid_n}")
    if box <= 0:
        errors.append("box must be positive")
    if hermite > grid_n // 2:
        errors.append(f"hermite dimension {hermite} exceeds grid/2 = {grid_n // 2}")

    seed = int(_want_number(doc, errors, "scenario", "seed", 7))
    samples = int(_want_number(doc, errors, "scenario", "samples", 10))
    tol_scale = float(_want_number(doc, errors, "scenario", "tol-scale", 1.0))

    checks = {}
    for key, atoms in doc.sections.get("checks", {}).items():
        if not isinstance(atoms[0], (int, float)) or atoms[0] <= 0:
            errors.append(f"[checks] {key} tolerance must be a positive number")
            continue
        checks[key] = float(atoms[0])
        if len(atoms) > 1:
            if isinstance(atoms[1], int) and atoms[1] > 0:
                samples = atoms[1]
            else:
                errors.append(f"[checks] {key} sample count must be a positive integer")

    for sec in doc.sections:
        if sec not in _SECTION_ORDER:
            errors.append(f"unknown section [{sec}]")
    known_keys = {
        "scenario": {"name", "seed", "samples", "tol-scale"},
        "algebra": {"presentation", "gamma", "q", "z0", "norm", "dim"},
        "action": {"kind", "alpha", "beta", "gamma", "group", "corrupt"},
        "discretization": {"grid", "box", "hermite", "window", "group-grid"},
    }
    for sec, allowed in known_keys.items():
        for key in doc.sections.get(sec, {}):
            if key not in allowed:
                errors.append(f"unknown key {key!r} in [{sec}]")

    if errors:
        raise ScenarioValidationError(errors)
    return Scenario(name=name, kind=kind, params=params, grid_n=grid_n, box=box,
                    hermite=hermite, window=window, group_n=group_n,
                    samples=samples, seed=seed, corrupt=corrupt,
                    tol_scale=tol_scale, checks=checks)


def parse_and_validate(text) -> Scenario:
    return validate(parse(text))

"""JSON design files and the built-in ``paper-device`` preset.

A file either lists every physics-critical field or names a preset with
``"preset": "paper-device"`` and overrides parts of it. Human units are used
throughout the file (um, GPa, MPa, MPa/um, C); they are converted to SI here
and nowhere else.
"""
import copy
import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .core import GPA, MPA, UM, BeamGeometry, Material, PlateRegion
from .device import DualGapDesign
from .errors import PhysicsError, SchemaError
from .lumped import fixed_fixed_spring_constant
from .profile import ProfileParams, ThermalCycle

SCHEMA_VERSION = 1

REFERENCE_DEVICE = {
    "schema_version": 1,
    "design": {
        "capacitive": {"length_um": 250.0, "width_um": 80.0, "gap_um": 1.5},
        "actuation": {"pad_length_um": 200.0, "pads": 2, "width_um": 80.0, "gap_um": 4.5},
        "beam": {"length_um": 800.0, "width_um": 80.0, "thickness_um": 2.0},
        "dimple_residual_gap_um": 0.1,
        "k_N_per_m": 1.511,
    },
    "material": {
        "name": "SiO2/Au effective",
        "E_GPa": 70.0,
        "residual_stress_MPa": 0.0,
        "stress_gradient_MPa_per_um": 0.0,
        "relative_permittivity": 1.0,
    },
    "solver": {
        "elements": 64,
        "cv_points": 121,
        "profile_samples": 801,
        "release_target_center_um": -4.5,
    },
    "profile": {
        "mode": "tri-layer",
        "motif_width_um": 800.0,
        "cavity_depth_um": 4.5,
        "onset_C": 117.5,
        "saturation_C": 335.0,
        "layers": [
            {"thickness_um": 5.0, "peak_temperature_C": 350.0},
            {"thickness_um": 1.0, "peak_temperature_C": 350.0},
            {"thickness_um": 0.5, "peak_temperature_C": 350.0},
        ],
        "params": {
            "peak_width_fraction": 0.6875,
            "merge_coefficient": 50.0,
            "cavity_merge_multiplier": 1.5,
            "max_peak_height_fraction": 3.25,
        },
    },
}

PRESETS = {"paper-device": REFERENCE_DEVICE}

# key -> (type, required-without-preset); nested dicts are sub-schemas
_NUM = "number"
_INT = "integer"
_STR = "string"
_BOOL = "boolean"

_SCHEMA = {
    "schema_version": (_INT, True),
    "preset": (_STR, False),
    "design": ({
        "capacitive": ({"length_um": (_NUM, True), "width_um": (_NUM, True),
                        "gap_um": (_NUM, True)}, True),
        "actuation": ({"pad_length_um": (_NUM, True), "pads": (_INT, True),
                       "width_um": (_NUM, True), "gap_um": (_NUM, True)}, True),
        "beam": ({"length_um": (_NUM, True), "width_um": (_NUM, True),
                  "thickness_um": (_NUM, True)}, True),
        "dimple_residual_gap_um": (_NUM, True),
        "k_N_per_m": ("k", True),
        "id": (_STR, False),
    }, True),
    "material": ({
        "name": (_STR, False),
        "E_GPa": (_NUM, True),
        "residual_stress_MPa": (_NUM, False),
        "stress_gradient_MPa_per_um": (_NUM, False),
        "relative_permittivity": (_NUM, False),
    }, False),
    "solver": ({
        "elements": (_INT, False),
        "cv_points": (_INT, False),
        "profile_samples": (_INT, False),
        "release_target_center_um": ("number-or-null", False),
    }, False),
    "profile": ({
        "mode": (_STR, False),
        "motif_width_um": (_NUM, True),
        "cavity_depth_um": (_NUM, False),
        "onset_C": (_NUM, False),
        "saturation_C": (_NUM, False),
        "layers": ("layers", True),
        "params": ({
            "peak_width_fraction": (_NUM, False),
            "merge_coefficient": (_NUM, False),
            "cavity_merge_multiplier": (_NUM, False),
            "max_peak_height_fraction": (_NUM, False),
        }, False),
    }, False),
}

_LAYER_SCHEMA = {"thickness_um": (_NUM, True), "peak_temperature_C": (_NUM, True)}


@dataclass(frozen=True)
class SolverSettings:
    elements: int = 64
    cv_points: int = 121
    profile_samples: int = 801
    release_target_center: float = None


@dataclass(frozen=True)
class ProfileSpec:
    mode: str
    motif_width: float
    cavity_depth: float
    layers: tuple          # ((thickness, ThermalCycle), ...)
    params: ProfileParams = ProfileParams()


@dataclass(frozen=True)
class DesignBundle:
    design: DualGapDesign
    material: Material
    solver: SolverSettings
    profile: ProfileSpec
    source: str = "<preset>"
    raw: dict = field(default=None, repr=False, compare=False)
    digest: str = ""


def _line_of(text, key):
    if text is None:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _type_ok(kind, value):
    if kind == _NUM:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind == _INT:
        return isinstance(value, int) and not isinstance(value, bool)
    if kind == _STR:
        return isinstance(value, str)
    if kind == _BOOL:
        return isinstance(value, bool)
    if kind == "number-or-null":
        return value is None or _type_ok(_NUM, value)
    if kind == "k":
        return value == "derived" or (_type_ok(_NUM, value))
    return True


def _validate(doc, schema, text, path, require):
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", field=path or "<root>", line=_line_of(text, path.split(".")[-1]) if path else 1)
    for key in doc:
        if key not in schema:
            raise SchemaError("unknown key", field=f"{path}.{key}" if path else key,
                              line=_line_of(text, key))
    for key, (kind, required) in schema.items():
        dotted = f"{path}.{key}" if path else key
        if key not in doc:
            if required and require:
                raise SchemaError("missing required field", field=dotted,
                                  line=_line_of(text, path.split(".")[-1]) if path else None)
            continue
        value = doc[key]
        if isinstance(kind, dict):
            _validate(value, kind, text, dotted, require)
        elif kind == "layers":
            if not isinstance(value, list) or not value:
                raise SchemaError("expected a non-empty list", field=dotted, line=_line_of(text, key))
            for i, layer in enumerate(value):
                _validate(layer, _LAYER_SCHEMA, text, f"{dotted}[{i}]", True)
        elif not _type_ok(kind, value):
            raise SchemaError(f"expected {kind}, got {json.dumps(value)}", field=dotted,
                              line=_line_of(text, key))


def _merge(base, override):
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _digest(data):
    return hashlib.sha256(data).hexdigest()


def parse_design(doc, text=None, source="<memory>"):
    """Validate a design document (already JSON-decoded) into a bundle."""
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object", line=1)
    preset = doc.get("preset")
    if preset is not None and preset not in PRESETS:
        raise SchemaError(f"unknown preset '{preset}'", field="preset", line=_line_of(text, "preset"))
    _validate(doc, _SCHEMA, text, "", require=preset is None)
    if doc.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {doc['schema_version']}",
                          field="schema_version", line=_line_of(text, "schema_version"))
    merged = _merge(PRESETS[preset], doc) if preset else doc
    merged.pop("preset", None)
    if preset:
        merged["design"].setdefault("id", preset)
    if "material" not in merged and merged["design"]["k_N_per_m"] == "derived":
        raise SchemaError("k_N_per_m is 'derived' but no material (E_GPa) is given",
                          field="material.E_GPa")
    for section in ("material", "solver", "profile"):
        merged.setdefault(section, copy.deepcopy(REFERENCE_DEVICE[section]))
    try:
        bundle = _build(merged, source)
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, (PhysicsError, SchemaError)):
            raise
        raise PhysicsError(str(exc)) from exc
    payload = text.encode() if text is not None else json.dumps(doc, sort_keys=True).encode()
    return DesignBundle(bundle.design, bundle.material, bundle.solver, bundle.profile,
                        source=source, raw=merged, digest=_digest(payload))


def _build(doc, source):
    d = doc["design"]
    m = doc["material"]
    material = Material(
        name=m.get("name", "membrane"),
        youngs_modulus=m["E_GPa"] * GPA,
        residual_stress=m.get("residual_stress_MPa", 0.0) * MPA,
        stress_gradient=m.get("stress_gradient_MPa_per_um", 0.0) * MPA / UM,
        relative_permittivity=m.get("relative_permittivity", 1.0),
    )
    cap = d["capacitive"]
    act = d["actuation"]
    b = d["beam"]
    beam = BeamGeometry(b["length_um"] * UM, b["width_um"] * UM, b["thickness_um"] * UM)
    if d["k_N_per_m"] == "derived":
        k = fixed_fixed_spring_constant(beam, material.youngs_modulus)
    else:
        k = float(d["k_N_per_m"])
    design = DualGapDesign(
        capacitive_region=PlateRegion(cap["length_um"] * UM, cap["width_um"] * UM, cap["gap_um"] * UM),
        actuation_region=PlateRegion(act["pad_length_um"] * act["pads"] * UM, act["width_um"] * UM,
                                     act["gap_um"] * UM),
        beam=beam,
        dimple_residual_gap=d["dimple_residual_gap_um"] * UM,
        effective_spring_constant=k,
        actuation_pads=act["pads"],
        design_id=d.get("id", "design"),
    )
    s = doc["solver"]
    target = s.get("release_target_center_um")
    solver = SolverSettings(
        elements=s.get("elements", 64),
        cv_points=s.get("cv_points", 121),
        profile_samples=s.get("profile_samples", 801),
        release_target_center=None if target is None else target * UM,
    )
    p = doc["profile"]
    onset = p.get("onset_C", 117.5)
    saturation = p.get("saturation_C", 335.0)
    layers = tuple(
        (layer["thickness_um"] * UM, ThermalCycle(layer["peak_temperature_C"], onset, saturation))
        for layer in p["layers"])
    mode = p.get("mode", "tri-layer")
    if mode not in ("tri-layer", "reflow"):
        raise SchemaError(f"unknown profile mode '{mode}'", field="profile.mode")
    profile = ProfileSpec(
        mode=mode,
        motif_width=p["motif_width_um"] * UM,
        cavity_depth=p.get("cavity_depth_um", 0.0) * UM,
        layers=layers,
        params=ProfileParams(**p.get("params", {})),
    )
    return DesignBundle(design, material, solver, profile, source=source)


def load_design(path=None, preset=None):
    """Load and validate a design file, or the named preset."""
    if path is None:
        if preset is None:
            raise SchemaError("no design file or preset given")
        if preset not in PRESETS:
            raise SchemaError(f"unknown preset '{preset}'", field="preset")
        doc = {"schema_version": SCHEMA_VERSION, "preset": preset}
        bundle = parse_design(doc, source=f"<preset:{preset}>")
        return bundle
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read design file: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    return parse_design(doc, text=text, source=str(path))

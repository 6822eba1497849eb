import json

import pytest

from dualgap.core import um
from dualgap.designfile import REFERENCE_DEVICE, load_design, parse_design
from dualgap.device import GapRuleWarning
from dualgap.errors import PhysicsError, SchemaError
from dualgap.lumped import fixed_fixed_spring_constant


def write(tmp_path, doc, name="d.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc, indent=2))
    return path


def full_doc():
    doc = json.loads(json.dumps(REFERENCE_DEVICE))
    return doc


def test_preset_matches_table_values():
    b = load_design(preset="paper-device")
    d = b.design
    assert d.capacitive_region.gap == um(1.5)
    assert d.capacitive_region.area == pytest.approx(2.0e-8)
    assert d.actuation_region.gap == um(4.5)
    assert d.actuation_region.area == pytest.approx(3.2e-8)
    assert d.dimple_residual_gap == um(0.1)
    assert d.effective_spring_constant == 1.511
    assert (d.beam.length, d.beam.width, d.beam.thickness) == (um(800), um(80), um(2))
    assert d.design_id == "paper-device"
    assert b.material.youngs_modulus == 70e9


def test_full_file_without_preset(tmp_path):
    b = load_design(write(tmp_path, full_doc()))
    assert b.design.effective_spring_constant == 1.511
    assert b.source.endswith("d.json")


def test_derived_spring_constant(tmp_path):
    doc = full_doc()
    doc["design"]["k_N_per_m"] = "derived"
    b = load_design(write(tmp_path, doc))
    assert b.design.effective_spring_constant == pytest.approx(
        fixed_fixed_spring_constant(b.design.beam, 70e9))


def test_missing_dimple_gap_is_an_error(tmp_path):
    doc = full_doc()
    del doc["design"]["dimple_residual_gap_um"]
    with pytest.raises(SchemaError) as info:
        load_design(write(tmp_path, doc))
    assert "dimple_residual_gap_um" in str(info.value)


def test_missing_spring_constant_is_an_error(tmp_path):
    doc = full_doc()
    del doc["design"]["k_N_per_m"]
    with pytest.raises(SchemaError):
        load_design(write(tmp_path, doc))


def test_unknown_key_reports_line(tmp_path):
    doc = full_doc()
    doc["design"]["beam"]["colour"] = "blue"
    path = write(tmp_path, doc)
    with pytest.raises(SchemaError) as info:
        load_design(path)
    err = info.value
    assert err.field == "design.beam.colour"
    lines = path.read_text().splitlines()
    assert '"colour"' in lines[err.line - 1]


def test_wrong_type_reports_field(tmp_path):
    doc = {"schema_version": 1, "preset": "paper-device", "design": {"capacitive": {"gap_um": "1.5"}}}
    with pytest.raises(SchemaError) as info:
        load_design(write(tmp_path, doc))
    assert info.value.field == "design.capacitive.gap_um"


def test_malformed_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "schema_version": 1,\n  "preset": "paper-device"\n  "design": {}\n}\n')
    with pytest.raises(SchemaError) as info:
        load_design(path)
    assert info.value.line == 4


def test_preset_override_and_physics_error():
    with pytest.warns(GapRuleWarning):
        b = parse_design({"schema_version": 1, "preset": "paper-device",
                          "design": {"actuation": {"gap_um": 7.0}}})
    assert b.design.actuation_region.gap == um(7.0)
    assert b.design.capacitive_region.gap == um(1.5)
    with pytest.raises(PhysicsError):
        parse_design({"schema_version": 1, "preset": "paper-device",
                      "design": {"capacitive": {"gap_um": 5.0}}})


def test_schema_version_checked():
    with pytest.raises(SchemaError):
        parse_design({"schema_version": 2, "preset": "paper-device"})


def test_digest_tracks_input_bytes(tmp_path):
    a = load_design(write(tmp_path, full_doc(), "a.json"))
    b = load_design(write(tmp_path, full_doc(), "b.json"))
    assert a.digest == b.digest
    doc = full_doc()
    doc["design"]["dimple_residual_gap_um"] = 0.11
    c = load_design(write(tmp_path, doc, "c.json"))
    assert c.digest != a.digest

"""Regenerate the frozen golden scene under tests/golden/.

The byte-equality tests in tests/test_scene.py, test_cli.py and
test_service.py pin the exact output of the full pipeline on the blood
analysis fixture.  Run this only after an intentional format or layout
change, then re-audit the numbers before committing the new bytes.
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pm3d.layout import layout
from pm3d.mapping import parse_config, resolve, swim_lanes, validate_config
from pm3d.parser import parse
from pm3d.scene import build_scene, scene_to_json

TESTS = Path(__file__).resolve().parents[1] / "tests"


def main() -> int:
    model, diagnostics = parse(
        (TESTS / "fixtures" / "blood_analysis.xml").read_text(encoding="utf-8"))
    assert not diagnostics.warnings, diagnostics.warnings
    config = parse_config((TESTS / "fixtures" / "full_mapping.cfg").read_text(encoding="utf-8"))
    assert validate_config(model, config) == []

    resolved = resolve(model, config)
    placements, connectors, lanes = layout(model, resolved, swim_lanes(model, config))
    text = scene_to_json(build_scene(model, placements, connectors, lanes, config))

    target = TESTS / "golden" / "blood_full_mapping.scene.json"
    old = target.read_text(encoding="utf-8") if target.exists() else None
    target.write_text(text, encoding="utf-8")
    if old == text:
        print(f"{target}: unchanged ({len(text)} bytes)")
    else:
        print(f"{target}: rewritten ({len(text)} bytes); re-audit before committing")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

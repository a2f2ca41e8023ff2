from pathlib import Path
from typing import List
import logging

import yaml
from pydantic import ValidationError

from app.core.exceptions import ScenarioConfigError
from app.schemas.scenario import Scenario

logger = logging.getLogger(__name__)

SCENARIO_DIR = Path(__file__).resolve().parents[2] / "scenarios"


class ScenarioService:
    """Service for reading, writing and listing scenario files"""

    def __init__(self, scenario_dir: Path = SCENARIO_DIR):
        self.scenario_dir = Path(scenario_dir)

    def parse_scenario(self, text: str, source: str = "<string>") -> Scenario:
        """Validate YAML text as a scenario"""
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
            raise ScenarioConfigError(f"{source}: YAML syntax error{where}", [str(e)])
        if not isinstance(data, dict):
            raise ScenarioConfigError(f"{source}: scenario must be a mapping")
        data.setdefault("name", Path(source).stem)
        try:
            return Scenario.model_validate(data)
        except ValidationError as e:
            diagnostics = [
                f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}"
                for err in e.errors()
            ]
            raise ScenarioConfigError(f"{source}: invalid scenario", diagnostics)

    def load_scenario(self, path: Path) -> Scenario:
        """Read and validate a scenario file"""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise ScenarioConfigError(f"Scenario file not found: {path}")
        except OSError as e:
            raise ScenarioConfigError(f"Cannot read scenario file {path}: {e}")
        scenario = self.parse_scenario(text, str(path))
        logger.info(f"Scenario loaded: {scenario.name} ({scenario.robot.kind}, {scenario.controller.value})")
        return scenario

    @staticmethod
    def dump_scenario(sc: Scenario) -> str:
        data = sc.model_dump(mode="json", by_alias=True, exclude_none=True)
        return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)

    def list_bundled(self) -> List[str]:
        if not self.scenario_dir.is_dir():
            return []
        return sorted(p.stem for p in self.scenario_dir.glob("*.yaml"))

    def bundled_path(self, name: str) -> Path:
        path = self.scenario_dir / f"{name}.yaml"
        if not path.is_file():
            raise ScenarioConfigError(f"Unknown bundled scenario: {name}")
        return path


# Global service instance
scenario_service = ScenarioService()

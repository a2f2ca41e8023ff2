from fastapi import APIRouter, HTTPException, status
from typing import Dict, List
from app.core.exceptions import ControlFault
from app.schemas.results import MetricsSummary
from app.schemas.scenario import Scenario
from app.services.metrics_service import metrics_service
from app.services.scenario_service import scenario_service
from app.services.simulation_service import simulation_service
import logging

logger = logging.getLogger(__name__)
router = APIRouter()


@router.get("", response_model=Dict[str, List[str]])
def list_scenarios():
    """List bundled scenario names"""
    return {"scenarios": scenario_service.list_bundled()}


@router.get("/{name}", response_model=Scenario, response_model_by_alias=True)
def get_scenario(name: str):
    """Get a bundled scenario"""
    try:
        return scenario_service.load_scenario(scenario_service.bundled_path(name))
    except ValueError as e:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=str(e)
        )


@router.post("/run", response_model=MetricsSummary)
def run_scenario(scenario: Scenario):
    """Run a scenario and return its metrics summary"""
    try:
        log = simulation_service.run_scenario(scenario)
        return metrics_service.compute_metrics(log)
    except ControlFault as e:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail={"fault": e.kind, "message": str(e)}
        )
    except ValueError as e:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=str(e)
        )
    except Exception as e:
        logger.error(f"Error running scenario: {e}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail="Failed to run scenario"
        )

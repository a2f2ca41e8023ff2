from fastapi import APIRouter, HTTPException, status, Query
from app.config import settings
from app.schemas.results import ValidationReport
from app.services.validation_service import validation_service
import logging

logger = logging.getLogger(__name__)
router = APIRouter()


@router.get("", response_model=ValidationReport)
def run_validation(
    samples: int = Query(100, ge=1, le=10000, description="Samples per robot"),
    seed: int = Query(settings.validation_seed, description="Sampling seed")
):
    """Run the property suite"""
    try:
        return validation_service.run_suite(samples, seed)
    except ValueError as e:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=str(e)
        )
    except Exception as e:
        logger.error(f"Error running validation: {e}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail="Failed to run validation"
        )

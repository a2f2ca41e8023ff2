#!/usr/bin/env python3
"""
Quick startup script for the parallel robot control API
"""
import uvicorn
from main import app
from app.config import settings

if __name__ == "__main__":
    print(f"Starting {settings.app_name} API...")
    print(f"Environment: {settings.environment}")
    print(f"Debug mode: {settings.debug}")
    print("API will be available at: http://localhost:8000")
    print("Scenario runs: POST http://localhost:8000/api/v1/scenarios/run")

    uvicorn.run(
        app,
        host="0.0.0.0",
        port=8000,
        reload=settings.debug,
        log_level=settings.log_level.lower()
    )

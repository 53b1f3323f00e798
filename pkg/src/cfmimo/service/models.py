"""Request/response schemas for the simulation service."""

from typing import List, Optional

from pydantic import BaseModel, Field


class SweepRequest(BaseModel):
    config_text: str = Field(description="config file content, key=value lines")
    scenario: Optional[str] = None
    realizations: Optional[int] = None
    seed: Optional[int] = None
    workers: int = 1


class SweepRecordModel(BaseModel):
    scenario: str
    scheme: str
    pt_db: float
    realization: int
    capacity_bps_hz: float
    min_sinr_db: float
    wall_ms: float


class SweepResponse(BaseModel):
    records: List[SweepRecordModel]
    config: dict


class HealthResponse(BaseModel):
    status: str
    version: str


class ScenariosResponse(BaseModel):
    scenarios: List[str]

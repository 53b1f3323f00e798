"""FastAPI service wrapping the simulation harness.

Configuration problems come back as 400 with the parser's message; designer
or solver failures surface as 500. The /sweep/csv route returns exactly the
bytes the CSV writer produces, so clients that persist the body verbatim
keep the byte-level reproducibility guarantee.
"""

from dataclasses import asdict

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from .. import __version__
from ..config import SCENARIOS, parse_config, with_overrides
from ..errors import CfMimoError, ConfigurationError
from ..harness import records_to_csv, run_sweep
from .models import (
    HealthResponse,
    ScenariosResponse,
    SweepRecordModel,
    SweepRequest,
    SweepResponse,
)

app = FastAPI(
    title="cfmimo",
    version=__version__,
    description="Cooperative hybrid beamforming capacity experiments for "
                "cell-free mmWave MIMO networks",
)


def _sweep(request: SweepRequest):
    try:
        config = parse_config(request.config_text)
        config = with_overrides(
            config,
            scenario=request.scenario,
            realizations=request.realizations,
            seed=request.seed,
        )
    except ConfigurationError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    try:
        records = run_sweep(config, workers=request.workers)
    except ConfigurationError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except CfMimoError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    return config, records


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.get("/scenarios", response_model=ScenariosResponse)
def scenarios() -> ScenariosResponse:
    return ScenariosResponse(scenarios=list(SCENARIOS))


@app.post("/sweep", response_model=SweepResponse)
def sweep(request: SweepRequest) -> SweepResponse:
    config, records = _sweep(request)
    return SweepResponse(
        records=[SweepRecordModel(**asdict(r)) for r in records],
        config=config.as_dict(),
    )


@app.post("/sweep/csv", response_class=PlainTextResponse)
def sweep_csv(request: SweepRequest) -> PlainTextResponse:
    _, records = _sweep(request)
    return PlainTextResponse(records_to_csv(records), media_type="text/csv")

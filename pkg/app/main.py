import logging

from fastapi import FastAPI

from .config import get_settings
from .routers import certificates as certificates_router
from .routers import knots as knots_router

settings = get_settings()
logging.basicConfig(level=settings.log_level)

app = FastAPI(title="Gordan Superbridge", version="0.1.0")


@app.get("/health")
def health():
    return {"status": "ok", "data_dir": str(settings.data_dir)}


app.include_router(certificates_router.router)
app.include_router(certificates_router.gordan_router)
app.include_router(knots_router.router)

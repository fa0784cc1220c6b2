from typing import List, Optional

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field

from ..services.errors import SuperbridgeError
from ..services.gordan_lp import find_certificate, find_direction, gordan_check, verify_certificate
from ..services.poly_model import PolygonalKnot, edge_vectors, sign_matrix

router = APIRouter(prefix="/certificates", tags=["certificates"])
gordan_router = APIRouter(tags=["certificates"])


class PolygonIn(BaseModel):
    name: str = "unnamed"
    vertices: List[List[int]] = Field(..., min_length=3)

    def knot(self) -> PolygonalKnot:
        return PolygonalKnot(name=self.name, vertices=tuple(tuple(v) for v in self.vertices))


class VerifyRequest(PolygonIn):
    certificate: List[int]


class MatrixRequest(BaseModel):
    columns: List[List[int]]


@router.post("/verify")
def verify(req: VerifyRequest):
    try:
        E = sign_matrix(edge_vectors(req.knot()))
        report = verify_certificate(E, req.certificate)
    except SuperbridgeError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {
        "knot": req.name,
        "valid": report.valid,
        "residual": list(report.residual),
        "nonnegative": report.nonnegative,
        "nonzero": report.nonzero,
    }


@router.post("/find")
def find(req: PolygonIn):
    try:
        P = req.knot()
        E = sign_matrix(edge_vectors(P))
        cert = find_certificate(E)
        direction = None if cert is not None else find_direction(E)
    except SuperbridgeError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {
        "knot": P.name,
        "certificate": list(cert.entries) if cert else None,
        "direction": list(direction.entries) if direction else None,
        "sb_upper": P.n // 2 - 1 if cert else P.n // 2,
    }


@gordan_router.post("/gordan")
def gordan(req: MatrixRequest):
    try:
        verdict = gordan_check(req.columns)
    except SuperbridgeError as e:
        raise HTTPException(status_code=400, detail=str(e))
    certificate: Optional[List[int]] = list(verdict.certificate.entries) if verdict.certificate else None
    direction: Optional[List[int]] = list(verdict.direction.entries) if verdict.direction else None
    return {"branch": verdict.branch, "certificate": certificate, "direction": direction}

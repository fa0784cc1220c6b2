from typing import List, Optional

from fastapi import APIRouter, HTTPException
from pydantic import Field

from ..config import get_settings
from ..services.errors import SuperbridgeError
from ..services.poly_model import edge_vectors, load_polygon
from ..services.projection_diagram import format_pd, gauss_code, project, writhe
from ..services.superbridge import bridge_count, witness_search
from ..services.utils import KNOT_LABEL
from ..services.verdict import conclude, find_homomorphism
from ..services.wirtinger import fox_determinant, presentation
from .certificates import PolygonIn

router = APIRouter(prefix="/knots", tags=["knots"])


class WitnessRequest(PolygonIn):
    direction: Optional[List[int]] = Field(default=None, min_length=3, max_length=3)
    budget: int = Field(default=10_000, ge=0)
    seed: int = 0


class ProjectRequest(PolygonIn):
    direction: Optional[List[int]] = Field(default=None, min_length=3, max_length=3)


@router.post("/witness")
def witness(req: WitnessRequest):
    try:
        P = req.knot()
        if req.direction is not None:
            w = bridge_count(edge_vectors(P), req.direction)
        else:
            w = witness_search(P, budget=req.budget, seed=req.seed)
    except SuperbridgeError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {"knot": P.name, "direction": list(w.direction), "count": w.count, "signs": list(w.signs)}


@router.post("/project")
def project_polygon(req: ProjectRequest):
    try:
        P = req.knot()
        D, pose = project(P, hint=req.direction)
    except SuperbridgeError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {
        "knot": P.name,
        "direction": list(pose.direction),
        "crossings": len(D.crossings),
        "writhe": writhe(D),
        "determinant": fox_determinant(presentation(D)),
        "pd": format_pd(D),
        "gauss": gauss_code(D),
    }


@router.get("/{label}/ledger")
def ledger(label: str, hom: bool = False):
    if not KNOT_LABEL.match(label):
        raise HTTPException(status_code=400, detail=f"not a knot label: {label}")
    settings = get_settings()
    path = settings.data_dir / f"{label}.poly"
    if not path.exists():
        raise HTTPException(status_code=404, detail=f"no fixture for {label}")
    try:
        P = load_polygon(path)
        homs = []
        if hom:
            found, _ = find_homomorphism(settings.data_dir, P, settings.hom_degree)
            if found is not None:
                homs.append(found)
        w = witness_search(P, budget=settings.witness_budget, seed=settings.seed)
        result = conclude(P, homs=homs, witness=w)
    except SuperbridgeError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {
        "knot": label,
        "sb_lower": result.sb_lower,
        "sb_upper": result.sb_upper,
        "b_lower": result.b_lower,
        "verdict": result.verdict,
        "citations": result.citations,
        "facts": [f.describe() for f in result.facts],
    }

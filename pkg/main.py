"""Main application entry point."""

import uvicorn
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from cremona import __version__
from cremona.api.forms import router as forms_router
from cremona.api.models import router as models_router
from cremona.core.config import settings
from cremona.core.logging import configure_logging

configure_logging()

app = FastAPI(
    title=settings.APP_NAME,
    description="Exact computations on real plane Cremona involutions: models, invariants, classification and conjugacy",
    version=__version__
)

# Enable CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.ALLOWED_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include API routes
app.include_router(models_router, prefix="/api/models")
app.include_router(forms_router, prefix="/api")

@app.get("/")
async def root():
    """Root endpoint listing the API."""
    return {
        "message": settings.APP_NAME,
        "endpoints": {
            "models": [f"/api/models/{name}" for name in ("validate", "invariants", "classify", "normalize", "conjugate")],
            "forms": ["/api/forms/equiv"],
            "curves": [f"/api/curves/{name}" for name in ("components", "iso", "gaussian")],
            "families": ["/api/family/corollary"],
            "api_docs": "/docs"
        }
    }

@app.get("/health")
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy"}

if __name__ == "__main__":
    uvicorn.run(
        "main:app",
        host=settings.HOST,
        port=settings.PORT,
        reload=settings.DEBUG
    )

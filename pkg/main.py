"""
Entry point for serving the cfm HTTP API directly
"""
from cfm.core.config import settings
from cfm.main import app

if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=8000, log_level=settings.LOG_LEVEL.lower())

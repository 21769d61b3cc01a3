"""
Test instance router
"""
import logging

from fastapi import APIRouter
from pydantic import BaseModel, Field

from ..core.config import settings
from ..harness.testgen import generate_instance
from ..schemas import InstanceBundle, TestgenConfig

logger = logging.getLogger(__name__)

router = APIRouter(tags=["Test instances"])


class TestgenRequest(TestgenConfig):
    seed: int = Field(default_factory=lambda: settings.SEED)


@router.post("/testgen", response_model=InstanceBundle)
def generate_bundle(request: TestgenRequest):
    """Generate a certified instance and return it as a bundle"""
    params = TestgenConfig(**request.model_dump(exclude={"seed"}))
    instance = generate_instance(params, request.seed)
    logger.info("HTTP testgen: %s instance, seed %d", instance.kind, instance.seed)
    return InstanceBundle.from_instance(instance)

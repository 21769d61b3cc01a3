"""
Instance generation runner
"""
import logging
from pathlib import Path

from ..core.errors import CertificateError
from ..schemas import RunConfig, TestgenConfig, save_bundle
from ..testgen import ExactInstance, certify, generate
from .writers import ensure_dir

logger = logging.getLogger(__name__)


def generate_instance(params: TestgenConfig, seed: int) -> ExactInstance:
    return generate(
        params.kind,
        params.m,
        params.n,
        params.s,
        dynamic_range_db=params.dynamic_range_db,
        seed=seed,
        eps=params.eps,
        delta=params.delta,
        mu=params.mu,
        attempts=params.attempts,
        budget=params.budget,
    )


def cmd_testgen(config: RunConfig) -> Path:
    """Generate, re-certify and write <kind>_<seed>.json under config.out"""
    params = config.testgen or TestgenConfig()
    if params.mu is None and config.mu is not None:
        params = params.model_copy(update={"mu": config.mu})
    instance = generate_instance(params, config.seed)
    if certify(instance) != instance.report:
        raise CertificateError("instance does not re-certify from its stored data")
    path = save_bundle(instance, ensure_dir(config.out) / f"{params.kind}_{instance.seed}.json")
    logger.info("%s instance (seed %d) written to %s", params.kind, instance.seed, path)
    return path

"""
NMS Variant Registry

Variants self-register on import. A registry entry is a factory that
builds a configured SuppressionStrategy from an NMSConfig.

Usage:
    from src.nms import build_variant, list_variants

    strategy = build_variant(NMSConfig(variant="gaussian", sigma=0.5))
    kept = strategy.run(detections)

    for name, metadata in list_variants().items():
        print(f"{name}: {metadata['description']}")
"""

from collections.abc import Callable

from src.schemas import NMSConfig, NMSVariant
from src.utils.structured_logging import get_logger

from .base import SuppressionStrategy
from .variants import CosineNMS, GaussianSoftNMS, GreedyNMS, LinearSoftNMS

logger = get_logger("nms.registry")

VariantFactory = Callable[[NMSConfig], SuppressionStrategy]

_VARIANT_REGISTRY: dict[str, VariantFactory] = {}


def register_variant(name: str, factory: VariantFactory):
    """
    Register an NMS variant.

    Raises:
        ValueError: If a variant with this name is already registered
    """
    if name in _VARIANT_REGISTRY:
        raise ValueError(f"NMS variant '{name}' is already registered")
    _VARIANT_REGISTRY[name] = factory
    logger.debug("variant_registered", variant=name)


def get_variant(name: str | NMSVariant) -> VariantFactory:
    """
    Raises:
        KeyError: If no variant with this name is registered
    """
    key = name.value if isinstance(name, NMSVariant) else name
    if key not in _VARIANT_REGISTRY:
        available = ", ".join(_VARIANT_REGISTRY)
        raise KeyError(f"NMS variant '{key}' not found. Available variants: {available}")
    return _VARIANT_REGISTRY[key]


def build_variant(cfg: NMSConfig) -> SuppressionStrategy:
    return get_variant(cfg.variant)(cfg)


def list_variants() -> dict[str, dict]:
    """Metadata of every registered variant, built with default parameters."""
    return {name: factory(NMSConfig()).get_metadata() for name, factory in _VARIANT_REGISTRY.items()}


def _auto_register_variants():
    register_variant(NMSVariant.GREEDY.value, lambda cfg: GreedyNMS(cfg.n_t))
    register_variant(NMSVariant.LINEAR.value, lambda cfg: LinearSoftNMS(cfg.n_t))
    register_variant(NMSVariant.GAUSSIAN.value, lambda cfg: GaussianSoftNMS(cfg.sigma))
    register_variant(NMSVariant.COSINE.value, lambda cfg: CosineNMS(cfg.n_t))


_auto_register_variants()

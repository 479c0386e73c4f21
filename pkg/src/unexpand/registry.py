"""Default package registry: the extensions shipped with the system."""

from __future__ import annotations

from .dcg import dcg_package
from .expansion import PackageRegistry
from .fsyntax import fsyntax_package


def default_registry() -> PackageRegistry:
    registry = PackageRegistry()
    registry.register(fsyntax_package())
    registry.register(dcg_package())
    return registry

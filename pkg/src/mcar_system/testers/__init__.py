# -*- coding: utf-8 -*-
"""Factory for creating tester instances."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, List

from mcar_system.errors import InvalidInputError

if TYPE_CHECKING:
    from mcar_system.testers.base import MCARTester

logger = logging.getLogger(__name__)

# CLI name -> report method name
TESTER_NAMES = {
    "an": "A_n",
    "an-prime": "A_n_prime",
    "little": "little_d2",
}

_ALIASES = {value: key for key, value in TESTER_NAMES.items()}


def canonical_name(name: str) -> str:
    """Accepts either the CLI name ("an-prime") or the method name ("A_n_prime")."""
    key = _ALIASES.get(name, name)
    if key not in TESTER_NAMES:
        raise InvalidInputError(
            f"Unknown method '{name}'. Choose from {sorted(TESTER_NAMES)}."
        )
    return key


def expand_methods(names: List[str]) -> List[str]:
    """Resolves "all" and aliases into canonical names, order kept, no repeats."""
    out: List[str] = []
    for name in names:
        for key in (list(TESTER_NAMES) if name == "all" else [canonical_name(name)]):
            if key not in out:
                out.append(key)
    return out


def get_tester(name: str, **options) -> MCARTester:
    """
    Builds the tester registered under `name`. Options not used by the tester
    (e.g. EM settings for A_n) are dropped.
    """
    key = canonical_name(name)
    em_options = {k: options.pop(k) for k in ("em_tol", "em_max_iter") if k in options}

    if key == "little":
        from mcar_system.testers.little_tester import LittleTester

        return LittleTester(**em_options, **options)

    if key == "an":
        from mcar_system.testers.an_tester import AnTester

        return AnTester(**options)

    from mcar_system.testers.an_prime_tester import AnPrimeTester

    logger.debug("Using A_n' tester")
    return AnPrimeTester(**options)

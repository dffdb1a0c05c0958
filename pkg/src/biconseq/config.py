"""Enumeration cap shared by every routine that walks all 2^|L| valuations."""

import os

from biconseq.errors import CapExceeded, PreconditionError

DEFAULT_CAP = 24
ENV_VAR = "BICONSEQ_CAP"

_override = None


def set_cap(cap):
    """Process-wide override (the CLI's ``--cap``); ``None`` clears it."""
    global _override
    _override = None if cap is None else int(cap)


def enumeration_cap(cap=None):
    if cap is not None:
        return int(cap)
    if _override is not None:
        return _override
    env = os.environ.get(ENV_VAR)
    if env:
        try:
            return int(env)
        except ValueError:
            raise PreconditionError(f"{ENV_VAR} must be an integer, got {env!r}") from None
    return DEFAULT_CAP


def require_within_cap(n, cap=None, what="language"):
    limit = enumeration_cap(cap)
    if n > limit:
        raise CapExceeded(f"{what} size {n} exceeds enumeration cap {limit}")

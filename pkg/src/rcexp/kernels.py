"""Kernel backend selection.

The compiled extension is preferred; setting ``RCEXP_PURE_PYTHON=1`` (or a
missing build) selects the numpy fallback.  ``BACKEND`` names the choice.
"""
import os

if os.environ.get("RCEXP_PURE_PYTHON"):
    from rcexp import _fallback as _impl
else:
    try:
        from rcexp import _ext as _impl
    except ImportError:
        from rcexp import _fallback as _impl

BACKEND = _impl.NAME
type_histogram = _impl.type_histogram
coset_leaders = _impl.coset_leaders
membership_counts = _impl.membership_counts


def available_backends():
    """Every importable kernel module, compiled first."""
    mods = []
    try:
        from rcexp import _ext

        mods.append(_ext)
    except ImportError:
        pass
    from rcexp import _fallback

    mods.append(_fallback)
    return mods

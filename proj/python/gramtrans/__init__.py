"""Grammar toolkit: classify CFGs, eliminate LL(1) conflicts, translate programs."""

try:
    from ._gramtrans import *  # noqa: F401,F403
    from ._gramtrans import __doc__  # noqa: F401
except ImportError:  # module built in-tree, next to this package
    from _gramtrans import *  # noqa: F401,F403

"""Backend selection for the scalar kernels.

The compiled extension is preferred; the pure-Python twin is the fallback.
``use_backend`` rebinds the module-level names so benchmarks and tests can
compare the two implementations.
"""
from . import _kernels_py

try:
    from . import _kernels
    _HAVE_COMPILED = True
except ImportError:
    _kernels = None
    _HAVE_COMPILED = False

_impl = _kernels if _HAVE_COMPILED else _kernels_py

_NAMES = ("bessel_k0", "hyp2f1_special", "erf", "mgf_double_rayleigh", "mgf_triple_cascade")


def _bind(module):
    g = globals()
    for name in _NAMES:
        g[name] = getattr(module, name)
    g["_impl"] = module


def backend() -> str:
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return "compiled" if _impl is _kernels else "python"


def compiled_available() -> bool:
    return _HAVE_COMPILED


def use_backend(name: str) -> None:
    """Switch the active backend ('compiled' or 'python')."""
    if name == "compiled":
        if not _HAVE_COMPILED:
            raise RuntimeError("compiled kernel extension is not available")
        _bind(_kernels)
    elif name == "python":
        _bind(_kernels_py)
    else:
        raise ValueError(f"unknown backend {name!r}")


_bind(_impl)

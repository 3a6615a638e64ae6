"""Quantum GAN toolkit: exact statevector simulation, angle encoding,
swap-test fidelity, and parameter-shift training.

The compiled extension normally lives inside this package. For in-tree
development the IQGAN_EXT_DIR environment variable may point at the CMake
build directory holding the extension.
"""

import glob
import importlib.util
import os
import sys

try:
    from . import _core
except ImportError:  # in-tree build: extension lives in the CMake build dir
    _ext_dir = os.environ.get("IQGAN_EXT_DIR", "")
    _candidates = glob.glob(os.path.join(_ext_dir, "_core*.so")) + glob.glob(
        os.path.join(_ext_dir, "_core*.pyd")
    )
    if not _candidates:
        raise
    _spec = importlib.util.spec_from_file_location(__name__ + "._core", _candidates[0])
    _core = importlib.util.module_from_spec(_spec)
    sys.modules[_spec.name] = _core
    _spec.loader.exec_module(_core)

from ._core import *  # noqa: F401,F403

__all__ = [name for name in dir(_core) if not name.startswith("_")]

# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2026 The sparsemimo authors
"""Sparse linear arrays: geometry, co-arrays, beam patterns, DOA estimation
and multi-user ISAC simulation."""

from ._core import *  # noqa: F401,F403
from ._core import EstimationError, __version__, run_cli  # noqa: F401


def main(argv=None):
    """Console entry point mirroring the C++ sparsemimo executable."""
    import sys

    code, out, err = run_cli(list(sys.argv[1:] if argv is None else argv))
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code

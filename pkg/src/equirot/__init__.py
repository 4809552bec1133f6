"""Verification toolkit for rotating equally entangled pure states by a constant amount.

Submodules: :mod:`equirot.su2`, :mod:`equirot.bipartite`,
:mod:`equirot.conditions`, :mod:`equirot.channels`,
:mod:`equirot.multiparty`, :mod:`equirot.campaign` and the ``equirot`` CLI.
"""

__version__ = "0.1.0"

"""Strategy synthesis for agents that mimic each other's behaviour across separate domains.

Submodules: ``ltlf`` (finite-trace temporal logic), ``automata`` (progression
and explicit DFAs), ``domains``, ``games``, ``reductions``, ``qbf``,
``oracle`` and ``cli``.
"""

__version__ = "0.1.0"

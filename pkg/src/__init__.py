"""
Tree Groups Toolkit
Exact computations with the omega-indexed groups acting on the binary tree
"""

__version__ = "1.0.0"
__author__ = "Agentic AI Developer"
__description__ = "Word problem, parity invariant and level quotients for G_omega and L_omega"

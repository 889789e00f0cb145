"""Symbolic toolkit for compact linear orders.

Internal-order invariant, order-preserving quotients, the averaging
operator decision procedure with certified norm bounds, explicit
projection and extension operators, and an exact finite LP oracle.
"""

__version__ = "0.1.0"

"""Hyperterminants and the numerical machinery behind them."""
from .core import (Estimate, F1, F1_orders, F2_mixed_reduced, F2_orders, F_bell, F_origin,
                   TerminantSpec, bell_complete, connection, evaluate, fm_quadrature,
                   recurrence_shift)
from .bounds import bound_scale, origin_bound_scale
from .incgamma import g_orders, g_surface
from .quadrature import RayRule, gauss_legendre, ray_rule

__all__ = [
    "Estimate", "F1", "F1_orders", "F2_mixed_reduced", "F2_orders", "F_bell", "F_origin",
    "TerminantSpec", "bell_complete", "connection", "evaluate", "fm_quadrature",
    "recurrence_shift", "g_orders", "g_surface", "RayRule", "gauss_legendre", "ray_rule",
    "bound_scale", "origin_bound_scale",
]

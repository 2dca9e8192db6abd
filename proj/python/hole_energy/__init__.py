"""Minimal hole energies, their solvers, and SU(2) hole probabilities."""

from ._core import (
    ChartMetric,
    EnergyReport,
    HoleEnergyError,
    HoleEstimate,
    MinEnergyResult,
    Psi2Report,
    RadialPotential,
    SweepResult,
    SweepRow,
    chart_to_geodesic,
    count_zeros_in_disc,
    energy,
    flat_minimizer,
    geodesic_to_chart,
    hole_probability,
    min_energy,
    psi2_energy,
    psi2_energy_eps,
    radial_minimizer,
    sandwich_bounds,
    scaling_sweep,
    solve_equa_R,
    solve_kappa_R,
)

__all__ = [
    "ChartMetric",
    "EnergyReport",
    "HoleEnergyError",
    "HoleEstimate",
    "MinEnergyResult",
    "Psi2Report",
    "RadialPotential",
    "SweepResult",
    "SweepRow",
    "chart_to_geodesic",
    "count_zeros_in_disc",
    "energy",
    "flat_minimizer",
    "geodesic_to_chart",
    "hole_probability",
    "min_energy",
    "psi2_energy",
    "psi2_energy_eps",
    "radial_minimizer",
    "sandwich_bounds",
    "scaling_sweep",
    "solve_equa_R",
    "solve_kappa_R",
]

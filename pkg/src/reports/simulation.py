"""Payload builders for the discretized quadruple."""
from dataclasses import asdict

from simulator import ConvergenceReport, QuadrupleReport


def quadruple_payload(report: QuadrupleReport) -> dict:
    out = asdict(report)
    out["decay_t"] = list(report.decay_t)
    out["decay_curve"] = list(report.decay_curve)
    return out


def convergence_payload(report: ConvergenceReport) -> dict:
    return {
        "grids": [{"n": n, "x_max": x} for n, x in report.grids],
        "hardy_residuals": list(report.hardy_residuals),
        "anti_hardy_residuals": list(report.anti_hardy_residuals),
        "kernel_residuals": list(report.kernel_residuals),
        "halving": report.halving,
    }

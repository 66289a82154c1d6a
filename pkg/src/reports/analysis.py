"""Payload builders for the measure, Pick, symbol and Hankel-form commands."""
from dataclasses import asdict

from classify import Classification
from hankel import GramReport, PositivityReport
from identities import IdentityResult
from measure import CarlesonRatios
from pick import KappaReport, SymmetryReport
from reports.common import encode_complex, encode_matrix
from symbol import Symbol


def identity_rows(results: list[IdentityResult]) -> list[dict]:
    return [asdict(r) for r in results]


def kappa_payload(report: KappaReport) -> dict:
    return asdict(report)


def symmetry_payload(report: SymmetryReport) -> dict:
    return asdict(report)


def carleson_payload(ratios: CarlesonRatios) -> dict:
    return {
        "x_grid": list(ratios.x_grid),
        "ratios_low": list(ratios.ratios_low),
        "ratios_high": list(ratios.ratios_high),
        "max_ratio_low": ratios.max_ratio_low,
        "max_ratio_high": ratios.max_ratio_high,
    }


def flags_payload(h: Symbol) -> dict:
    """Flag records of a symbol as plain data: state, defect, tolerance and grid size."""
    out = {}
    for name, rec in asdict(h.flags).items():
        out[name] = {"state": rec["state"], "defect": rec["defect"], "tol": rec["tol"], "grid_size": rec["grid_size"]}
    return out


def gram_payload(report: GramReport) -> dict:
    return {
        "min_eig": report.min_eig,
        "max_eig": report.max_eig,
        "points": [{"xi": encode_complex(p.xi), "v": [encode_complex(z) for z in p.v]} for p in report.points],
        "matrix": encode_matrix(report.matrix),
    }


def positivity_payload(report: PositivityReport) -> dict:
    return {"verdict": report.verdict, "evidence": dict(report.evidence)}


def classification_payload(result: Classification) -> dict:
    out = {
        "verdict": result.verdict,
        "borchers": result.is_borchers,
        "standard": result.is_standard,
        "evidence": [asdict(e) for e in result.evidence],
    }
    if result.complex_check is not None:
        out["complex_structure"] = asdict(result.complex_check)
    return out

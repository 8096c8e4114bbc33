"""Model serialization and computer-algebra script export.

A model file is a self-describing JSON document holding one polynomial
(exponent list plus coefficient list against the "grlex" ordering) and the
fit metadata needed to reproduce or audit it. JSON floats round-trip
bit-exactly through Python, which keeps reloaded coefficients identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cloud import NormalizationRecord
from .fitting import MapFit, RationalPoly, intersected_map, map_polynomial
from .polynomials import Poly, enumerate_monomials

__all__ = [
    "ModelFile",
    "export_singular_script",
    "load_model",
    "save_model",
]

ORDERING_TAG = "grlex"


@dataclass(frozen=True)
class ModelFile:
    """One fitted polynomial plus provenance metadata."""

    n: int
    degree: int
    exponents: tuple[tuple[int, ...], ...]
    coefficients: np.ndarray
    lam: float
    kernel_dim: int
    kind: str = "map"
    seed: int | None = None
    normalization: NormalizationRecord | None = None
    ordering: str = ORDERING_TAG

    def __post_init__(self) -> None:
        c = np.array(self.coefficients, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_fit(
        cls,
        fit: MapFit,
        intersected: bool = False,
        seed: int | None = None,
        normalization: NormalizationRecord | None = None,
    ) -> "ModelFile":
        poly = intersected_map(fit) if intersected else map_polynomial(fit)
        return cls(
            n=poly.basis.n,
            degree=fit.degree,
            exponents=poly.basis.exponents,
            coefficients=poly.coeffs,
            lam=fit.lam,
            kernel_dim=fit.kernel_dim,
            kind="intersected" if intersected else "map",
            seed=seed,
            normalization=normalization,
        )

    def polynomial(self) -> Poly:
        """Reconstruct the stored polynomial over its basis."""
        poly_degree = max(sum(alpha) for alpha in self.exponents)
        basis = enumerate_monomials(self.n, poly_degree)
        if basis.exponents != self.exponents:
            raise ValueError(
                "stored exponent list does not match the grlex basis order"
            )
        return Poly(basis, self.coefficients)


def save_model(model: ModelFile, path) -> None:
    doc = {
        "n": model.n,
        "degree": model.degree,
        "ordering": model.ordering,
        "exponents": [list(alpha) for alpha in model.exponents],
        "coefficients": [float(c) for c in model.coefficients],
        "lambda": model.lam,
        "kernel_dim": model.kernel_dim,
        "kind": model.kind,
        "seed": model.seed,
        "normalization": None
        if model.normalization is None
        else {
            "scale": [float(s) for s in model.normalization.scale],
            "offset": [float(o) for o in model.normalization.offset],
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_model(path) -> ModelFile:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("ordering") != ORDERING_TAG:
        raise ValueError(f"unsupported monomial ordering {doc.get('ordering')!r}")
    norm = doc.get("normalization")
    record = (
        None
        if norm is None
        else NormalizationRecord(
            scale=np.array(norm["scale"]), offset=np.array(norm["offset"])
        )
    )
    return ModelFile(
        n=int(doc["n"]),
        degree=int(doc["degree"]),
        exponents=tuple(tuple(int(e) for e in alpha) for alpha in doc["exponents"]),
        coefficients=np.array(doc["coefficients"], dtype=float),
        lam=float(doc["lambda"]),
        kernel_dim=int(doc["kernel_dim"]),
        kind=str(doc.get("kind", "map")),
        seed=doc.get("seed"),
        normalization=record,
    )


def _var_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{j + 1}" for j in range(n)]


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _poly_str(f: RationalPoly) -> str:
    names = _var_names(f.basis.n)
    parts: list[str] = []
    for alpha, q in zip(f.basis.exponents, f.coeffs):
        if q == 0:
            continue
        factors = []
        for name, e in zip(names, alpha):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        mag = abs(q)
        if not mono:
            body = _frac_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_frac_str(mag)}*{mono}"
        if not parts:
            parts.append(body if q > 0 else f"-{body}")
        else:
            parts.append(f"{' + ' if q > 0 else ' - '}{body}")
    return "".join(parts) if parts else "0"


def export_singular_script(f: RationalPoly) -> str:
    """Script for an external computer-algebra system that computes the
    real radical, minimal primes, and dimension of the ideal of f.

    Requires exact rational coefficients (see rationalize).
    """
    if not isinstance(f, RationalPoly):
        raise TypeError("export requires a RationalPoly with exact coefficients")
    names = ",".join(_var_names(f.basis.n))
    return (
        'LIB "realrad.lib"; LIB "primdec.lib";\n'
        f"ring R = 0,({names}),lp;\n"
        f"poly f = {_poly_str(f)};\n"
        "ideal I2 = realrad(ideal(f));\n"
        "minAssGTZ(I2);\n"
        "dim(std(I2));\n"
    )

"""Batch verification suites behind ``mzv check``.

Each suite returns a :class:`SuiteReport` whose cases are listed in input
order.  Deviations are always recorded, passing or not.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .index import Index, dual, enumerate_admissible
from .scalar import Params
from .series import EvalConfig, EvalResult, eval_generating, eval_mzv, eval_ohno_sum
from .transport import check_telescoping

__all__ = [
    "SuiteCase",
    "SuiteReport",
    "DEFAULT_XGRID",
    "run_duality",
    "run_ohno",
    "run_telescope",
    "run_sumformula",
    "SAFETY_FACTOR",
]

SAFETY_FACTOR = 1e3

DEFAULT_XGRID = [
    (Fraction(q), Fraction(x))
    for q in ("1/4", "1/2", "3/4", "1")
    for x in ("-1/2", "0", "1/3")
]


@dataclass
class SuiteCase:
    input: str
    deviation: str
    tolerance: str
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteReport:
    suite: str
    cases: list[SuiteCase]

    @property
    def n_passed(self) -> int:
        return sum(c.passed for c in self.cases)

    @property
    def n_failed(self) -> int:
        return len(self.cases) - self.n_passed

    @property
    def passed(self) -> bool:
        return self.n_failed == 0

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "cases": [asdict(c) for c in self.cases],
            "summary": {"total": len(self.cases), "passed": self.n_passed, "failed": self.n_failed},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict | str) -> SuiteReport:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["suite"], [SuiteCase(**c) for c in data["cases"]])

    def render(self) -> str:
        width = max((len(c.input) for c in self.cases), default=0)
        lines = [
            f"{'PASS' if c.passed else 'FAIL'}  {c.input:<{width}}  dev={c.deviation}  tol={c.tolerance}"
            for c in self.cases
        ]
        lines.append(
            f"{self.suite}: {self.n_passed}/{len(self.cases)} passed"
            + ("" if self.passed else f", {self.n_failed} FAILED")
        )
        return "\n".join(lines)


def _fmt(value: float) -> str:
    return f"{value:.3e}"


def _floor(cfg: EvalConfig) -> float:
    return 0.0 if cfg.exact else 2.0 ** -(cfg.prec - 16)


def _compare(label: str, a: EvalResult, b: EvalResult, cfg: EvalConfig, tol: float | None) -> SuiteCase:
    deviation = abs(float(a.limit - b.limit))
    if tol is None:
        tol = max(SAFETY_FACTOR * (float(a.limit_error) + float(b.limit_error)), _floor(cfg))
    return SuiteCase(
        label,
        _fmt(deviation),
        _fmt(tol),
        deviation <= tol,
        {"lhs": str(a.limit), "rhs": str(b.limit)},
    )


def _qx_label(q, x=None) -> str:
    return f"q={q}" + ("" if x is None else f" x={x}")


def run_duality(
    max_weight: int = 6,
    grid=((1, 0),),
    cfg: EvalConfig = EvalConfig(),
    tol: float | None = None,
) -> SuiteReport:
    """``Z_q(k; x) = Z_q(dual(k); x)`` for every admissible ``k`` up to ``max_weight``."""
    cases = []
    for q, x in grid:
        params = Params(q, x)
        memo: dict[Index, EvalResult] = {}

        def value(k: Index) -> EvalResult:
            if k not in memo:
                memo[k] = eval_generating(k, params, cfg)
            return memo[k]

        for w in range(2, max_weight + 1):
            for k in enumerate_admissible(w):
                kd = dual(k)
                label = f"k={k} dual={kd} {_qx_label(params.q, params.x)}"
                cases.append(_compare(label, value(k), value(kd), cfg, tol))
    return SuiteReport("duality", cases)


def run_ohno(
    max_weight: int = 5,
    max_c: int = 3,
    qs=(Fraction(1, 2), 1),
    cfg: EvalConfig = EvalConfig(),
    tol: float | None = None,
) -> SuiteReport:
    """``S_q(k; c) = S_q(dual(k); c)`` over admissible ``k`` and ``c <= max_c``."""
    cases = []
    for q in qs:
        memo: dict[tuple[Index, int], EvalResult] = {}

        def value(k: Index, c: int) -> EvalResult:
            if (k, c) not in memo:
                memo[(k, c)] = eval_ohno_sum(k, c, q, cfg)
            return memo[(k, c)]

        for w in range(2, max_weight + 1):
            for k in enumerate_admissible(w):
                kd = dual(k)
                for c in range(max_c + 1):
                    label = f"k={k} dual={kd} c={c} q={q}"
                    cases.append(_compare(label, value(k, c), value(kd, c), cfg, tol))
    return SuiteReport("ohno", cases)


def run_telescope(grid=DEFAULT_XGRID, m_max: int = 5, n_max: int = 5, a_max: int = 30) -> SuiteReport:
    """Exact telescoping residuals over a rational ``(q, x)`` grid."""
    cases = []
    for q, x in grid:
        params = Params(q, x)
        for m in range(m_max + 1):
            for n in range(1, n_max + 1):
                res = check_telescoping(m, n, params, a_max, strict=False)
                cases.append(
                    SuiteCase(
                        f"m={m} n={n} a<={a_max} {_qx_label(params.q, params.x)}",
                        str(res.max_abs),
                        "0",
                        res.ok,
                    )
                )
    return SuiteReport("telescope", cases)


def sum_formula_pairs(max_weight: int) -> list[tuple[int, int]]:
    return [(w, d) for w in range(2, max_weight + 1) for d in range(1, w)]


def run_sumformula(
    pairs=None,
    max_weight: int = 6,
    cfg: EvalConfig = EvalConfig(),
    tol: float | None = None,
) -> SuiteReport:
    """Sum of ``zeta(k)`` over weight ``w``, depth ``d`` against ``zeta(w)``.

    The left side is the coefficient ``S_1((1,...,1,2); w-d-1)`` of the
    generating series of ``(1,...,1,2)``, whose elevations are exactly the
    admissible indices of weight ``w`` and depth ``d``.
    """
    if pairs is None:
        pairs = sum_formula_pairs(max_weight)
    cases = []
    for w, d in pairs:
        base = Index((1,) * (d - 1) + (2,))
        lhs = eval_ohno_sum(base, w - d - 1, 1, cfg)
        rhs = eval_mzv((w,), cfg)
        cases.append(_compare(f"w={w} d={d}", lhs, rhs, cfg, tol))
    return SuiteReport("sumformula", cases)

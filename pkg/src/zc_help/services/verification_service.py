"""
Verification Service

The solve and verify use-cases: resolves the group and its quotient
dependencies, verifies the quotients first, runs the solver and assembles
the report.
"""

from typing import Dict, List, Sequence, Tuple

import structlog
from opentelemetry import trace
from sympy import divisors

from ..adapters.group_repository import GroupRepository
from ..constraints import ConstraintOptions
from ..errors import ConfigurationError, InvalidArgumentError
from ..groups import GroupData
from ..reporting import Report, build_report
from ..solver import (
    OrderVerdict,
    QuotientSolutions,
    VerificationResult,
    ZC1Status,
    order_spectrum,
    solve_order,
    verify_zc1,
)

logger = structlog.get_logger()
tracer = trace.get_tracer(__name__)


class VerificationService:
    """
    Runs verifications against a GroupRepository.

    Quotient groups are verified once with the default constraint set and
    cached for the lifetime of the service.
    """

    def __init__(
        self, repository: GroupRepository, workers: int = 1, report_timings: bool = False
    ):
        self.repository = repository
        self.workers = workers
        self.report_timings = report_timings
        self._dependencies: Dict[str, VerificationResult] = {}

    # Use-cases

    def validate(self, ref: str) -> GroupData:
        """Load and validate a group; quotient links are checked when the quotient is available."""
        g = self.repository.resolve(ref)
        for link in g.quotients:
            try:
                self.repository.quotient(g, link.quotient_name)
            except ConfigurationError as e:
                logger.warning(
                    "Quotient not available, link checked structurally only",
                    group=g.name,
                    quotient=link.quotient_name,
                    error=e.message,
                )
        return g

    def solve(
        self,
        ref: str,
        order: int,
        options: ConstraintOptions,
        quotient_files: Sequence[str] = (),
    ) -> Report:
        """Solve one order; proper divisors are solved first under the same options."""
        if order < 1:
            raise InvalidArgumentError(f"unit order must be positive, got {order}")
        g, quotients, quotient_results = self._prepare(ref, quotient_files)

        with tracer.start_as_current_span("verification_service.solve") as span:
            span.set_attribute("group.name", g.name)
            span.set_attribute("unit.order", order)

            candidates, _ = order_spectrum(g, quotients)
            verdicts: Dict[int, OrderVerdict] = {}
            for d in divisors(order):
                d = int(d)
                if d != order and d not in candidates:
                    verdicts[d] = OrderVerdict(d, (), ZC1Status.VERIFIED_TRIVIAL, excluded=True)
                    continue
                verdicts[d] = solve_order(
                    g,
                    d,
                    verdicts,
                    options,
                    quotients,
                    workers=self.workers,
                    report_timings=self.report_timings,
                )
            span.set_attribute("order.status", verdicts[order].status.value)

        return build_report("solve", g, options, [verdicts[order]], quotient_results)

    def verify(
        self, ref: str, options: ConstraintOptions, quotient_files: Sequence[str] = ()
    ) -> Report:
        g, quotients, quotient_results = self._prepare(ref, quotient_files)
        result = verify_zc1(
            g,
            options,
            quotients,
            workers=self.workers,
            report_timings=self.report_timings,
        )
        report = build_report("verify", g, options, list(result.values()), quotient_results)
        logger.info(
            "Verification report ready",
            group=g.name,
            verdict=report.verdict,
            orders=len(report.orders),
            excluded=report.excluded_orders,
        )
        return report

    # Dependencies

    def _prepare(
        self, ref: str, quotient_files: Sequence[str]
    ) -> Tuple[GroupData, Dict[str, QuotientSolutions], List[VerificationResult]]:
        for path in quotient_files:
            self.repository.register_file(path)
        g = self.repository.resolve(ref)
        self.repository.dependency_order(g)
        quotients: Dict[str, QuotientSolutions] = {}
        results: List[VerificationResult] = []
        for link in g.quotients:
            result = self._verified_dependency(self.repository.quotient(g, link.quotient_name))
            quotients[link.quotient_name] = QuotientSolutions(result.group, result)
            results.append(result)
        return g, quotients, results

    def _verified_dependency(self, q: GroupData) -> VerificationResult:
        cached = self._dependencies.get(q.name)
        if cached is not None:
            return cached

        # Dependencies of q come first; dependency_order also rejects cycles.
        for dep in self.repository.dependency_order(q)[:-1]:
            self._verified_dependency(dep)
        inner = {
            link.quotient_name: QuotientSolutions(
                self._dependencies[link.quotient_name].group,
                self._dependencies[link.quotient_name],
            )
            for link in q.quotients
        }
        result = verify_zc1(q, ConstraintOptions(), inner, workers=self.workers)
        if not result.verified:
            logger.warning(
                "Quotient is not verified, its open units feed the fusion equalities",
                quotient=q.name,
                open_orders=result.open_orders,
            )
        self._dependencies[q.name] = result
        return result


"""
Text Reports

Human-readable rendering of a Report. Every number printed here comes from
the same Report object the JSON output serializes.
"""

from typing import Dict, List

from .schemas import OrderReport, Report

_STATUS_TEXT = {
    "verified-trivial": "verified: every unit is rationally conjugate to a group element",
    "reduced-via-central-translation": "verified by central translation",
    "open": "OPEN: non-trivial partial augmentations survive",
}


def _pa(entries: Dict[str, int]) -> str:
    if not entries:
        return "{}"
    return "{" + ", ".join(f"e({c})={v}" for c, v in entries.items()) + "}"


def _order_lines(order: OrderReport) -> List[str]:
    lines = [f"order {order.order}: {_STATUS_TEXT[order.status]}"]
    if not order.solutions:
        lines.append("  no torsion units of this order")
    for solution in order.solutions:
        label = f"class {solution.class_id}" if solution.class_id else "non-trivial"
        lines.append(f"  {_pa(solution.pa)}  [{label}]")
        if not solution.trivial:
            for power, entries in solution.powers.items():
                lines.append(f"      {power}: {_pa(entries)}")
    lines.append(
        f"  assignments: {order.assignments} "
        f"(translated {order.translated_assignments}), box points: {order.box_points}"
    )
    if order.cross_check is not None:
        lines.append(f"  cross-check: {'agrees' if order.cross_check else 'DISAGREES'}")
    for elimination in order.eliminations:
        lines.append(f"  eliminated {elimination.points} by {elimination.constraint}")
    for note in order.notes:
        lines.append(f"  note: {note}")
    if order.seconds is not None:
        lines.append(f"  time: {order.seconds:.3f}s")
    return lines


def render_text(report: Report) -> str:
    lines = [
        f"{report.group} (order {report.group_order}), {report.command}",
        f"toggles: {', '.join(report.toggles) or '(none)'}",
    ]
    if report.modular_primes is not None:
        lines.append(f"modular primes: {', '.join(map(str, report.modular_primes)) or '(none)'}")
    for quotient in report.quotients:
        state = "verified" if quotient.verified else f"open at {quotient.open_orders}"
        lines.append(f"quotient {quotient.name}: {state}")
    lines.append("")
    for order in report.orders:
        lines.extend(_order_lines(order))
    if report.excluded_orders:
        excluded = ", ".join(map(str, report.excluded_orders))
        lines.append(f"excluded by order spectrum: {excluded}")
    lines.append("")
    lines.append(f"ZC1: {report.verdict}")
    return "\n".join(lines) + "\n"

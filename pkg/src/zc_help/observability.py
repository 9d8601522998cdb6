"""
Observability Integration - OpenTelemetry

Traces the expensive steps of a run (group loading, order solving, whole
group verification). Export is opt-in: with no OTLP endpoint configured the
global tracer stays the OpenTelemetry no-op tracer and spans cost nothing.

Usage:
    from zc_help.observability import setup_telemetry, traced

    setup_telemetry()

    @traced("solve_order")
    def solve_order(...): ...
"""

import functools
import inspect
from typing import Any, Callable, Optional, TypeVar

import structlog
from opentelemetry import trace
from opentelemetry.sdk.resources import SERVICE_NAME, SERVICE_VERSION, Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor

from . import __version__
from .config import Settings, settings

logger = structlog.get_logger()

F = TypeVar("F", bound=Callable[..., Any])

_configured = False


def setup_telemetry(config: Optional[Settings] = None) -> bool:
    """
    Install an OTLP/HTTP exporting tracer provider.

    Returns:
        True if export was configured, False when tracing stays a no-op
    """
    global _configured
    config = config or settings

    if not config.otel_enabled:
        logger.debug("Tracing disabled (ZC_HELP_OTEL_ENABLED=false)")
        return False
    if not config.otel_exporter_otlp_endpoint:
        logger.warning("Tracing enabled but no OTLP endpoint configured")
        return False
    if _configured:
        return True

    try:
        from opentelemetry.exporter.otlp.proto.http.trace_exporter import OTLPSpanExporter

        resource = Resource.create(
            {
                SERVICE_NAME: config.otel_service_name,
                SERVICE_VERSION: __version__,
            }
        )
        tracer_provider = TracerProvider(resource=resource)
        tracer_provider.add_span_processor(
            BatchSpanProcessor(OTLPSpanExporter(endpoint=config.otel_exporter_otlp_endpoint))
        )
        trace.set_tracer_provider(tracer_provider)
        _configured = True
    except Exception as e:
        logger.error("Failed to initialize tracing", error=str(e))
        return False

    logger.info(
        "OpenTelemetry initialized",
        service=config.otel_service_name,
        endpoint=config.otel_exporter_otlp_endpoint,
    )
    return True


def get_tracer(name: str) -> trace.Tracer:
    """Get a tracer for manual instrumentation."""
    return trace.get_tracer(name)


def add_span_attributes(attributes: dict[str, Any]) -> None:
    """Add attributes to the current span if it is recording."""
    span = trace.get_current_span()
    if span.is_recording():
        for key, value in attributes.items():
            span.set_attribute(key, value)


def traced(
    span_name: Optional[str] = None, attributes: Optional[dict[str, Any]] = None
) -> Callable[[F], F]:
    """
    Decorator to trace a function call as one span.

    Scalar parameters are recorded as span attributes; the engine is
    synchronous so only plain functions are supported.
    """

    def decorator(func: F) -> F:
        signature = inspect.signature(func)

        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            tracer = get_tracer(func.__module__)
            name = span_name or f"{func.__module__}.{func.__name__}"

            with tracer.start_as_current_span(name) as span:
                if attributes:
                    for key, value in attributes.items():
                        span.set_attribute(key, value)

                if span.is_recording():
                    try:
                        bound = signature.bind(*args, **kwargs)
                        for param_name, param_value in bound.arguments.items():
                            if isinstance(param_value, (int, str, bool)):
                                span.set_attribute(f"function.param.{param_name}", param_value)
                    except TypeError:
                        pass

                try:
                    result = func(*args, **kwargs)
                    span.set_attribute("function.status", "success")
                    return result
                except Exception as e:
                    span.set_attribute("error", True)
                    span.set_attribute("error.type", type(e).__name__)
                    span.record_exception(e)
                    raise

        return wrapper  # type: ignore[return-value]

    return decorator

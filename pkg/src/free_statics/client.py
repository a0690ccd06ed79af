"""Clients for the service endpoints.

The CLI talks to the service through one of these. ``LocalClient`` invokes
the endpoint functions in-process, so no server is needed for one-shot use
and outputs stay byte-deterministic; ``HttpClient`` posts the same payloads
to a running instance.
"""

from __future__ import annotations

import httpx
import pydantic

from .errors import ModelError
from .service import routes
from .service.schemas import (
    AnalyzeRequest,
    DescribeRequest,
    JacobianRequest,
    SolveRequest,
    SweepRequest,
    WrenchRequest,
    ZonotopeRequest,
)

ROUTES = {
    "/describe": (routes.describe, DescribeRequest),
    "/jacobian": (routes.jacobian, JacobianRequest),
    "/wrench": (routes.wrench, WrenchRequest),
    "/zonotope": (routes.zonotope, ZonotopeRequest),
    "/solve": (routes.solve, SolveRequest),
    "/sweep": (routes.sweep, SweepRequest),
    "/analyze": (routes.analyze, AnalyzeRequest),
}


class ClientError(Exception):
    """A request the service rejected; carries the library error name."""

    def __init__(self, name: str, detail: str):
        self.name = name
        self.detail = detail
        super().__init__(f"{name}: {detail}")


class TransportError(Exception):
    """The service could not be reached."""


class LocalClient:
    """Calls the endpoint functions directly, without HTTP."""

    def post(self, path: str, payload: dict) -> dict:
        handler, request_model = ROUTES[path]
        try:
            request = request_model(**payload)
        except pydantic.ValidationError as exc:
            raise ClientError("ValidationError", str(exc)) from None
        try:
            return handler(request).model_dump()
        except ModelError as exc:
            raise ClientError(type(exc).__name__, str(exc)) from None


class HttpClient:
    """Posts requests to a running service instance."""

    def __init__(self, base_url: str, timeout: float = 60.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def post(self, path: str, payload: dict) -> dict:
        try:
            with httpx.Client(timeout=self.timeout) as client:
                response = client.post(self.base_url + path, json=payload)
        except httpx.HTTPError as exc:
            raise TransportError(f"{self.base_url}{path}: {exc}") from None
        if response.status_code != 200:
            try:
                body = response.json()
            except ValueError:
                body = {}
            name = body.get("error", f"Http{response.status_code}")
            detail = body.get("detail", response.text)
            raise ClientError(name, str(detail))
        return response.json()


def make_client(server: str | None):
    return HttpClient(server) if server else LocalClient()

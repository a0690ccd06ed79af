"""Command line front end; a thin client over the service endpoints.

    free-statics describe --config paper_rig
    free-statics jacobian --config paper_rig --state "0,0"
    free-statics wrench   --config paper_rig --state "0,0" --pressures "0,0,0"
    free-statics zonotope --config paper_rig --state "0,0" --dofs Fz,Mz --out z.csv
    free-statics sweep    --config paper_rig --grid "dl=-0.015:0.010:251" --out sweep.csv
    free-statics solve    --config paper_rig --state "0,0" --target "20,0"
    free-statics analyze  --config paper_rig --data meas.csv --out report.csv

States, pressures and targets are plain SI numbers (meters, radians,
pascals, newtons); config documents are the only place with friendly units.
By default commands run the service in-process; pass ``--server URL`` to use
a remote instance. Exit status: 0 success, 2 invalid input, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .client import ClientError, TransportError, make_client


class UsageError(Exception):
    """Bad flag value; message names the flag."""


def _fmt(value) -> str:
    return f"{float(value):.6g}"


def _parse_floats(text: str, field: str, count: int | None = None) -> list[float]:
    parts = [p.strip() for p in text.split(",")]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"{field}: expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(values) != count:
        raise UsageError(f"{field}: expected {count} comma-separated numbers, got {len(values)}")
    return values


def _parse_state(text: str) -> dict:
    dl, dphi = _parse_floats(text, "state", count=2)
    return {"dl_m": dl, "dphi_rad": dphi}


def _parse_dofs(text: str) -> list[str]:
    dofs = [p.strip() for p in text.split(",") if p.strip()]
    if not dofs:
        raise UsageError("dofs: expected comma-separated wrench component names")
    return dofs


def _parse_grid(text: str) -> list[dict]:
    axes = []
    for segment in text.split(","):
        segment = segment.strip()
        if "=" not in segment:
            raise UsageError(f"grid: expected name=start:stop:count, got {segment!r}")
        name, _, rangespec = segment.partition("=")
        pieces = rangespec.split(":")
        if len(pieces) != 3:
            raise UsageError(f"grid: expected name=start:stop:count, got {segment!r}")
        try:
            start, stop = float(pieces[0]), float(pieces[1])
            count = int(pieces[2])
        except ValueError:
            raise UsageError(f"grid: invalid numbers in {segment!r}") from None
        axes.append({"name": name.strip(), "start": start, "stop": stop, "count": count})
    if not axes:
        raise UsageError("grid: no axes given")
    return axes


def _config_payload(arg: str) -> str:
    """File contents if the argument is a readable path, else a built-in name."""
    path = Path(arg)
    if path.exists():
        return path.read_text(encoding="utf-8")
    if os.sep in arg or arg.endswith(".json"):
        raise FileNotFoundError(f"config file {arg!r} not found")
    return arg


def _write_output(path: str, text: str) -> None:
    with open(path, "wb") as handle:
        handle.write(text.encode("utf-8"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="free-statics", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="config file path or built-in name")
        p.add_argument("--server", default=None, help="service URL; default runs in-process")

    p = sub.add_parser("describe", help="show actuators, derived constants and placements")
    common(p)

    p = sub.add_parser("jacobian", help="fluid Jacobian rows at a platform state")
    common(p)
    p.add_argument("--state", required=True, help='"dl,dphi" in m, rad')

    p = sub.add_parser("wrench", help="net end-effector wrench for given pressures")
    common(p)
    p.add_argument("--state", required=True)
    p.add_argument("--pressures", required=True, help='"p1,...,pn" in Pa')

    p = sub.add_parser("zonotope", help="attainable wrench set at a state")
    common(p)
    p.add_argument("--state", required=True)
    p.add_argument("--dofs", default=None, help="wrench components, e.g. Fz,Mz")
    p.add_argument("--out", required=True, help="output file (.csv or .svg)")

    p = sub.add_parser("sweep", help="zonotope measures over a state grid")
    common(p)
    p.add_argument("--grid", required=True, help='"dl=a:b:n,dphi=c:d:m"')
    p.add_argument("--out", required=True, help="output CSV file")

    p = sub.add_parser("solve", help="pressures realizing a target wrench")
    common(p)
    p.add_argument("--state", required=True)
    p.add_argument("--target", required=True, help="target wrench components")
    p.add_argument("--tol", type=float, default=1e-6, help="feasibility tolerance")

    p = sub.add_parser("analyze", help="error metrics of the model against a dataset")
    common(p)
    p.add_argument("--data", required=True, help="measurement CSV file")
    p.add_argument("--out", required=True, help="output report CSV file")

    return parser


def _run(args) -> int:
    client = make_client(args.server)
    config = _config_payload(args.config)

    if args.command == "describe":
        body = client.post("/describe", {"config": config})
        print(
            f"rig: {len(body['frees'])} FREEs, dofs={','.join(body['dofs'])}, "
            f"map={body['kinematic_map']}"
        )
        for free in body["frees"]:
            print(
                f"free {free['name']}: L={_fmt(free['length_m'])} m "
                f"R={_fmt(free['radius_m'])} m angle={_fmt(free['fiber_angle_deg'])} deg "
                f"p_max={_fmt(free['p_max_pa'])} Pa "
                f"B={_fmt(free['fiber_length_m'])} m N={_fmt(free['fiber_turns'])} turns "
                f"d=[{','.join(_fmt(v) for v in free['d_m'])}] "
                f"axis=[{','.join(_fmt(v) for v in free['axis'])}]"
            )
        return 0

    if args.command == "jacobian":
        body = client.post("/jacobian", {"config": config, "state": _parse_state(args.state)})
        components = body["components"]
        for row in body["rows"]:
            entries = " ".join(
                f"{name}={_fmt(value)}" for name, value in zip(components, row["wrench_row"])
            )
            print(
                f"{row['free']}: dV/dl={_fmt(row['dv_dl_m2'])} "
                f"dV/dphi={_fmt(row['dv_dphi_m3_per_rad'])} | {entries}"
            )
        return 0

    if args.command == "wrench":
        body = client.post(
            "/wrench",
            {
                "config": config,
                "state": _parse_state(args.state),
                "pressures_pa": _parse_floats(args.pressures, "pressures"),
            },
        )
        print(" ".join(f"{d}={_fmt(v)}" for d, v in zip(body["dofs"], body["projected"])))
        return 0

    if args.command == "zonotope":
        payload = {"config": config, "state": _parse_state(args.state)}
        if args.dofs is not None:
            payload["dofs"] = _parse_dofs(args.dofs)
        body = client.post("/zonotope", payload)
        if args.out.endswith(".svg"):
            if body["svg"] is None:
                raise ClientError(
                    "WrongDimension", "svg output requires exactly 2 selected components"
                )
            _write_output(args.out, body["svg"])
        else:
            _write_output(args.out, body["csv"])
        summary = f"vertices={len(body['vertices'])}"
        if body["area"] is not None:
            summary += f" area={_fmt(body['area'])}"
        print(summary)
        print(f"wrote {args.out}")
        return 0

    if args.command == "sweep":
        body = client.post("/sweep", {"config": config, "axes": _parse_grid(args.grid)})
        valid = sum(1 for row in body["rows"] if row["verdict"] == "Valid")
        print(f"states={len(body['rows'])} valid={valid}")
        for locus in body["collapse_loci"]:
            print(
                f"collapse axis={locus['axis']} dl={_fmt(locus['dl_m'])} "
                f"dphi={_fmt(locus['dphi_rad'])}"
            )
        _write_output(args.out, body["csv"])
        print(f"wrote {args.out}")
        return 0

    if args.command == "solve":
        body = client.post(
            "/solve",
            {
                "config": config,
                "state": _parse_state(args.state),
                "target": _parse_floats(args.target, "target"),
                "tol": args.tol,
            },
        )
        feasible = "true" if body["feasible"] else "false"
        pressures = ",".join(_fmt(p) for p in body["pressures_pa"])
        print(f"feasible={feasible} residual={_fmt(body['residual'])} pressures={pressures}")
        return 0

    if args.command == "analyze":
        data_csv = Path(args.data).read_text(encoding="utf-8")
        body = client.post("/analyze", {"config": config, "data_csv": data_csv})
        print(f"records={body['count']}")
        for name, rmse, max_abs in zip(body["components"], body["rmse"], body["max_abs_error"]):
            print(f"{name}: rmse={_fmt(rmse)} max_error={_fmt(max_abs)}")
        _write_output(args.out, body["csv"])
        print(f"wrote {args.out}")
        return 0

    raise UsageError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args)
    except UsageError as exc:
        print(f"error: ValidationError: {exc}", file=sys.stderr)
        return 2
    except ClientError as exc:
        print(f"error: {exc.name}: {exc.detail}", file=sys.stderr)
        return 2
    except TransportError as exc:
        print(f"error: IoError: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: IoError: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()

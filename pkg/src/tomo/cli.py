"""Command-line front end.

Scenario files are JSON documents with a ``schema`` field (``tomo/1``),
a ``kind`` naming the operation, kind-specific parameters, and an
``output`` block.  Subcommands mirror scenario kinds one-to-one::

    tomo spin-tomogram scenario.json [--out PATH] [--format csv|json]
    tomo verify scenario.json

Exit codes: 0 success, 2 parse/schema error, 3 invariant violation,
4 numerical precondition failure, 5 internal error.  ``--set key=value``
overrides scalar scenario fields (dotted paths, JSON-parsed values).

The ``TOMO_THREADS`` environment variable caps internal (BLAS) thread
counts; it is honored at package import time.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import canonical, cv, dynamics, spin_tomography, states, verify
from .errors import NumericsError, TomoError, ValidationError
from .serialize import (
    complex_to_pair,
    fmt,
    json_to_matrix,
    matrix_to_json,
    pair_to_complex,
    tomogram_from_json,
    tomogram_rows,
    tomogram_to_json,
    write_csv,
    write_json,
)

KINDS = (
    "spin-tomogram",
    "spin-reconstruct",
    "evolve",
    "energies",
    "transform",
    "cv-tomogram",
    "wigner",
    "verify",
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NUMERICS = 4
EXIT_INTERNAL = 5


class SchemaError(Exception):
    """Scenario file is structurally invalid (missing/ill-typed fields)."""


# ---------------------------------------------------------------------------
# scenario parsing
# ---------------------------------------------------------------------------

def _require(doc: dict, field: str, kind=None):
    if field not in doc:
        raise SchemaError(f"missing field {field!r}")
    value = doc[field]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"field {field!r} has type {type(value).__name__}")
    return value


def _parse_vector(data) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise SchemaError("expected a non-empty list of numbers or [re, im] pairs")
    return np.array([pair_to_complex(v) for v in data], dtype=complex)


def _parse_spin_state(node) -> tuple[states.DensityMatrix, states.Spinor | None]:
    """Return (density matrix, underlying spinor when pure)."""
    if not isinstance(node, dict):
        raise SchemaError("state must be an object")
    if "spinor" in node:
        psi = states.Spinor(_parse_vector(node["spinor"]))
        return states.pure_density(psi), psi
    if "phase_point" in node:
        block = node["phase_point"]
        point = states.PhaseSpacePoint(
            p=np.asarray(_require(block, "p", list), dtype=float),
            x=np.asarray(_require(block, "x", list), dtype=float),
        )
        psi = states.phase_to_spinor(point)
        return states.pure_density(psi), psi
    if "density" in node:
        return states.DensityMatrix(json_to_matrix(node["density"])), None
    if "mixed" in node:
        block = node["mixed"]
        ensemble = states.MixedEnsemble(
            weights=np.asarray(_require(block, "weights", list), dtype=float),
            states=tuple(_parse_vector(v) for v in _require(block, "spinors", list)),
        )
        return states.mixed_density(ensemble), None
    raise SchemaError("state must contain one of: spinor, phase_point, density, mixed")


def _parse_grid(node, default: cv.Grid1D) -> cv.Grid1D:
    if node is None:
        return default
    if not isinstance(node, dict):
        raise SchemaError("grid must be an object with min, max, n")
    return cv.Grid1D(
        float(_require(node, "min", (int, float))),
        float(_require(node, "max", (int, float))),
        int(_require(node, "n", int)),
    )


def _parse_cv_state(scenario: dict) -> cv.WaveFunction1D:
    node = _require(scenario, "state", dict)
    ygrid = _parse_grid(scenario.get("ygrid"), cv.Grid1D(-8.0, 8.0, 512))
    if "ground" in node:
        return cv.harmonic_eigenstate(ygrid, 0)
    if "hermite" in node:
        return cv.harmonic_eigenstate(ygrid, int(node["hermite"]))
    if "packet" in node:
        block = node["packet"]
        return cv.gaussian_packet(
            ygrid,
            x0=float(block.get("x0", 0.0)),
            p0=float(block.get("p0", 0.0)),
            width=float(block.get("width", 1.0)),
        )
    if "samples" in node:
        return cv.WaveFunction1D(ygrid, _parse_vector(node["samples"]))
    raise SchemaError("cv state must contain one of: ground, hermite, packet, samples")


def _parse_axis(node) -> cv.TomographyAxis:
    if not isinstance(node, dict):
        raise SchemaError("axis must be an object with mu, nu")
    return cv.TomographyAxis(
        float(_require(node, "mu", (int, float))), float(_require(node, "nu", (int, float)))
    )


def _parse_directions(scenario: dict, j: float):
    if "directions" in scenario:
        dirs = np.asarray(scenario["directions"], dtype=float)
        if dirs.ndim != 2 or dirs.shape[1] != 2:
            raise SchemaError("directions must be a list of [phi, theta] pairs")
        return dirs
    from .angular import sphere_quadrature

    band = scenario.get("band_limit")
    if band is None:
        band = int(round(2 * j)) + 1
    return sphere_quadrature(int(band))


def _apply_overrides(doc: dict, assignments) -> dict:
    for item in assignments or ():
        if "=" not in item:
            raise SchemaError(f"--set expects key=value, got {item!r}")
        key, _, raw = item.partition("=")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw  # bare strings are a convenience
        target = doc
        parts = key.split(".")
        for part in parts[:-1]:
            target = target.setdefault(part, {})
            if not isinstance(target, dict):
                raise SchemaError(f"--set path {key!r} crosses a non-object field")
        target[parts[-1]] = value
    return doc


def load_scenario(path: str, overrides=None, expected_kind: str | None = None) -> dict:
    """Parse and fully validate a scenario file (fail-fast)."""
    try:
        with open(path) as handle:
            doc = json.load(handle)
    except FileNotFoundError as exc:
        raise SchemaError(f"scenario file not found: {exc.filename}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("scenario must be a JSON object")
    doc = _apply_overrides(doc, overrides)
    if doc.get("schema") != "tomo/1":
        raise SchemaError(f"unsupported schema {doc.get('schema')!r} (expected 'tomo/1')")
    kind = _require(doc, "kind", str)
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    if expected_kind is not None and kind != expected_kind:
        raise SchemaError(f"scenario kind {kind!r} does not match subcommand {expected_kind!r}")
    return doc


def _output_spec(doc: dict, args) -> tuple[str | None, str]:
    block = doc.get("output") or {}
    path = args.out or block.get("path")
    form = args.format or block.get("format") or "csv"
    if form not in ("csv", "json"):
        raise SchemaError(f"unknown output format {form!r}")
    return path, form


# ---------------------------------------------------------------------------
# scenario execution
# ---------------------------------------------------------------------------

def _run_spin_tomogram(doc, path, form):
    rho, _ = _parse_spin_state(_require(doc, "state", dict))
    directions = _parse_directions(doc, rho.spin)
    tom = spin_tomography.tomogram(rho, directions)
    if form == "csv":
        write_csv(path, ("phi", "theta", "m", "w"), tomogram_rows(tom))
    else:
        write_json(path, tomogram_to_json(tom))
    residual = float(np.abs(tom.values.sum(axis=1) - 1.0).max())
    return f"spin-tomogram j={tom.spin:g} directions={len(tom.directions)} row-sum residual={residual:.3e}"


def _run_spin_reconstruct(doc, path, form):
    source = _require(doc, "tomogram")
    if isinstance(source, str):
        try:
            with open(source) as handle:
                tom_doc = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(f"cannot read tomogram {source!r}: {exc}") from exc
    elif isinstance(source, dict):
        tom_doc = source
    else:
        raise SchemaError("tomogram must be a file path or an inline document")
    tom = tomogram_from_json(tom_doc)
    rho, asymmetry = spin_tomography.reconstruct(tom, return_asymmetry=True)
    if form == "csv":
        rows = [
            (i, k, z.real, z.imag)
            for (i, k), z in np.ndenumerate(rho.matrix)
        ]
        write_csv(path, ("row", "col", "re", "im"), rows)
    else:
        write_json(
            path,
            {
                "schema": "tomo.density/1",
                "j": rho.spin,
                "rho": matrix_to_json(rho.matrix),
                "asymmetry": asymmetry,
            },
        )
    return f"spin-reconstruct j={rho.spin:g} trace={rho.trace:.12g} asymmetry={asymmetry:.3e}"


def _parse_times(node) -> np.ndarray:
    if isinstance(node, list):
        times = np.asarray(node, dtype=float)
    elif isinstance(node, dict):
        times = np.linspace(
            float(_require(node, "start", (int, float))),
            float(_require(node, "stop", (int, float))),
            int(_require(node, "num", int)),
        )
    else:
        raise SchemaError("times must be a list or {start, stop, num}")
    if times.size == 0:
        raise SchemaError("times must be non-empty")
    return times


def _run_evolve(doc, path, form):
    h = dynamics.HermitianHamiltonian(json_to_matrix(_require(doc, "hamiltonian", list)))
    _, psi0 = _parse_spin_state(_require(doc, "state", dict))
    if psi0 is None:
        raise SchemaError("evolve requires a pure state (spinor or phase_point)")
    times = _parse_times(_require(doc, "times"))
    picture = doc.get("picture", "quantum")
    n = psi0.dim
    if picture == "quantum":
        rows = []
        for t in times:
            psi_t = dynamics.evolve_quantum(h, psi0, float(t)).amplitudes
            rows.append((t, *np.column_stack([psi_t.real, psi_t.imag]).ravel()))
        header = ("t",) + tuple(
            f"{part}_{k}" for k in range(n) for part in ("re", "im")
        )
        payload = {
            "schema": "tomo.trajectory/1",
            "picture": "quantum",
            "times": [float(t) for t in times],
            "states": [[complex_to_pair(z) for z in
                        dynamics.evolve_quantum(h, psi0, float(t)).amplitudes]
                       for t in times],
        }
    elif picture == "classical":
        flow = dynamics.build_A(dynamics.build_B(h))
        q0 = states.spinor_to_phase(psi0)
        rows = []
        for t in times:
            q_t = dynamics.evolve_classical(flow, q0, float(t)).q
            rows.append((t, *q_t))
        header = ("t",) + tuple(f"p_{k}" for k in range(n)) + tuple(f"x_{k}" for k in range(n))
        payload = {
            "schema": "tomo.trajectory/1",
            "picture": "classical",
            "times": [float(t) for t in times],
            "states": [[float(v) for v in dynamics.evolve_classical(
                flow, states.spinor_to_phase(psi0), float(t)).q] for t in times],
        }
    else:
        raise SchemaError(f"unknown picture {picture!r}")
    if form == "csv":
        write_csv(path, header, rows)
    else:
        write_json(path, payload)
    norm_drift = abs(dynamics.evolve_quantum(h, psi0, float(times[-1])).norm() - psi0.norm())
    return (
        f"evolve picture={picture} steps={len(times)} dim={n} "
        f"norm-drift={norm_drift:.3e}"
    )


def _run_energies(doc, path, form):
    if "hamiltonian" in doc:
        h = dynamics.HermitianHamiltonian(json_to_matrix(doc["hamiltonian"]))
        energies = np.linalg.eigvalsh(h.matrix)
        flow = dynamics.build_A(dynamics.build_B(h))
        freqs = dynamics.normal_mode_frequencies(flow)
        payload = {
            "schema": "tomo.energies/1",
            "energies": [float(e) for e in energies],
            "normal_modes": [float(f) for f in freqs],
        }
        rows = [(k, e, f) for k, (e, f) in enumerate(zip(energies, freqs))]
        header = ("index", "energy", "normal_mode")
        summary = f"energies dim={h.dim} range=[{energies[0]:.6g}, {energies[-1]:.6g}]"
    else:
        a = float(_require(doc, "a", (int, float)))
        c = float(_require(doc, "c", (int, float)))
        b = pair_to_complex(_require(doc, "b"))
        e1, e2 = dynamics.two_level_energies(a, b, c)
        payload = {"schema": "tomo.energies/1", "E1": e1, "E2": e2}
        rows = [(e1, e2)]
        header = ("E1", "E2")
        summary = f"energies two-level E1={e1:.12g} E2={e2:.12g}"
    if form == "csv":
        write_csv(path, header, rows)
    else:
        write_json(path, payload)
    return summary


def _run_transform(doc, path, form):
    if "symplectic" in doc:
        lam = canonical.validate_symplectic(np.asarray(doc["symplectic"], dtype=float))
        uv = canonical.uv_from_symplectic(lam)
    elif "generator" in doc:
        import scipy.linalg

        gen = np.asarray(doc["generator"], dtype=float)
        if gen.ndim != 2 or gen.shape[0] != gen.shape[1] or gen.shape[0] % 2:
            raise SchemaError("generator must be a square matrix of even dimension")
        sym = (gen + gen.T) / 2.0
        n = gen.shape[0] // 2
        lam = canonical.validate_symplectic(
            scipy.linalg.expm(dynamics.sigma_matrix(n) @ sym)
        )
        uv = canonical.uv_from_symplectic(lam)
    elif "point" in doc:
        uv = canonical.point_transform_uv(np.asarray(doc["point"], dtype=float))
    else:
        raise SchemaError("transform requires one of: symplectic, generator, point")
    state = _require(doc, "state", dict)
    if "spinor" not in state and "phase_point" not in state:
        raise SchemaError("transform requires a pure state (spinor or phase_point)")
    _, psi = _parse_spin_state(state)
    renormalize = bool(doc.get("renormalize", False))
    directions = _parse_directions(doc, psi.spin)
    psi_prime = canonical.transform_spinor(uv, psi)
    tom = canonical.transformed_tomogram(uv, psi, directions, renormalize=renormalize)
    if form == "csv":
        write_csv(path, ("phi", "theta", "m", "w"), tomogram_rows(tom))
    else:
        write_json(
            path,
            {
                "schema": "tomo.transform/1",
                "u": matrix_to_json(uv.u),
                "v": matrix_to_json(uv.v),
                "psi_prime": [complex_to_pair(z) for z in psi_prime.amplitudes],
                "norm_sq": psi_prime.norm() ** 2,
                "renormalized": renormalize,
                "tomogram": tomogram_to_json(tom),
            },
        )
    return (
        f"transform modes={uv.modes} norm_sq={psi_prime.norm() ** 2:.12g} "
        f"renormalized={renormalize}"
    )


def _run_cv_tomogram(doc, path, form):
    psi = _parse_cv_state(doc)
    axis = _parse_axis(_require(doc, "axis", dict))
    xgrid = _parse_grid(doc.get("xgrid"), cv.Grid1D(-8.0, 8.0, 512))
    route = doc.get("route", "wavefunction")
    if route == "wavefunction":
        w = cv.tomogram_wavefunction(psi, axis, xgrid)
    elif route == "density":
        w = cv.tomogram_density(cv.pure_density_grid(psi), axis, xgrid)
    elif route == "wigner":
        wigner = cv.wigner_from_density(cv.pure_density_grid(psi))
        w = cv.tomogram_from_wigner(wigner, axis, xgrid)
    else:
        raise SchemaError(f"unknown route {route!r}")
    norm = float(w @ xgrid.weights)
    meta = {
        "schema": "tomo.cv_tomogram/1",
        "axis": {"mu": axis.mu, "nu": axis.nu},
        "xgrid": {"min": xgrid.lo, "max": xgrid.hi, "n": xgrid.n},
        "route": route,
        "norm": norm,
    }
    if form == "csv":
        write_csv(path, ("X", "w"), zip(xgrid.points, w))
        write_json(path + ".meta.json", meta)
    else:
        meta["X"] = [float(v) for v in xgrid.points]
        meta["w"] = [float(v) for v in w]
        write_json(path, meta)
    return f"cv-tomogram route={route} axis=({axis.mu:g},{axis.nu:g}) norm={norm:.9f}"


def _run_wigner(doc, path, form):
    psi = _parse_cv_state(doc)
    qgrid = _parse_grid(doc.get("qgrid"), cv.Grid1D(-6.0, 6.0, 256))
    pgrid = _parse_grid(doc.get("pgrid"), cv.Grid1D(-6.0, 6.0, 256))
    wigner = cv.wigner_from_density(cv.pure_density_grid(psi), qgrid, pgrid)
    meta = {
        "schema": "tomo.wigner/1",
        "qgrid": {"min": qgrid.lo, "max": qgrid.hi, "n": qgrid.n},
        "pgrid": {"min": pgrid.lo, "max": pgrid.hi, "n": pgrid.n},
        "norm": wigner.norm(),
    }
    if form == "csv":
        q = qgrid.points
        p = pgrid.points
        rows = (
            (q[i], p[k], wigner.values[i, k])
            for i in range(qgrid.n)
            for k in range(pgrid.n)
        )
        write_csv(path, ("q", "p", "W"), rows)
        write_json(path + ".meta.json", meta)
    else:
        meta["values"] = [[float(v) for v in row] for row in wigner.values]
        write_json(path, meta)
    return f"wigner grid={qgrid.n}x{pgrid.n} norm={wigner.norm():.9f} min={wigner.values.min():.6f}"


def _run_verify(doc, path, form):
    selected = doc.get("criteria")
    if selected is not None and not (
        isinstance(selected, list) and all(isinstance(i, int) for i in selected)
    ):
        raise SchemaError("criteria must be a list of integers")
    results = verify.run_checks(set(selected) if selected else None)
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name}: {res.detail} [{res.seconds:.2f}s]")
    if path:
        # the report is structured data; always a JSON document
        payload = {
            "schema": "tomo.verify/1",
            "results": [
                {
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                    "seconds": r.seconds,
                }
                for r in results
            ],
        }
        write_json(path, payload)
    if not all(r.passed for r in results):
        raise NumericsError("verification suite failed")
    return f"verify checks={len(results)} all-pass"


_RUNNERS = {
    "spin-tomogram": _run_spin_tomogram,
    "spin-reconstruct": _run_spin_reconstruct,
    "evolve": _run_evolve,
    "energies": _run_energies,
    "transform": _run_transform,
    "cv-tomogram": _run_cv_tomogram,
    "wigner": _run_wigner,
    "verify": _run_verify,
}


def execute(doc: dict, out_path: str | None, out_format: str) -> str:
    """Dispatch a validated scenario; returns the one-line summary."""
    kind = doc["kind"]
    if kind != "verify" and not out_path:
        raise SchemaError("an output path is required (scenario output.path or --out)")
    return _RUNNERS[kind](doc, out_path, out_format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tomo",
        description="Tomographic maps between classical phase-space states, "
        "spinors, density matrices, and probability distributions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a {kind!r} scenario file")
        p.add_argument("scenario", help="path to the scenario JSON file")
        p.add_argument("--out", help="override the scenario output path")
        p.add_argument("--format", choices=("csv", "json"), help="override the output format")
        p.add_argument(
            "--set",
            action="append",
            metavar="KEY=VALUE",
            help="override a scenario field (dotted path, JSON value)",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = load_scenario(args.scenario, overrides=args.set, expected_kind=args.command)
        out_path, out_format = _output_spec(doc, args)
        summary = execute(doc, out_path, out_format)
    except SchemaError as exc:
        print(f"tomo: scenario error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"tomo: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericsError as exc:
        print(f"tomo: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except TomoError as exc:
        print(f"tomo: error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"tomo: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    print(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

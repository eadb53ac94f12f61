"""Command-line surface: verdicts, constructions, and experiments as JSON/CSV.

Exit codes: 0 holds/feasible, 1 fails/infeasible, 2 usage or input error,
3 conjectural-hold, 4 solver inconclusive.  Every run prints a record with
the resolved arguments, seed, and library version; the ``payload`` entry is
a deterministic function of (args, seed) so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import abssep, fixtures, matricize, oracle, serialize, sdp, witness

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CONJECTURAL = 3
EXIT_INCONCLUSIVE = 4


class UsageError(Exception):
    pass


class InconclusiveError(Exception):
    pass


def _args_dict(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def _emit(command: str, args: dict, payload: dict, started: float) -> None:
    record = {
        "command": command,
        "args": args,
        "seed": args.get("seed"),
        "version": __version__,
        "payload": payload,
        "elapsed_s": round(time.time() - started, 6),
    }
    print(json.dumps(record, indent=2))


def _spectrum_list(values) -> list[float]:
    return [float(v) for v in np.asarray(values, dtype=float)]


def _load_vector_arg(path: str) -> tuple[int, np.ndarray]:
    try:
        return serialize.load_vector(Path(path).read_text())
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"could not load vector file {path}: {exc}") from exc


# --------------------------------------------------------------------------
# abs-ppt
# --------------------------------------------------------------------------

def _state_spectrum(args) -> tuple[int, np.ndarray]:
    if args.eigs is not None:
        values = serialize.parse_spectrum(args.eigs)
        if args.d is None:
            raise UsageError("--d is required with --eigs")
        return args.d, values
    if args.state_file is not None:
        try:
            d, mat = serialize.load_operator(Path(args.state_file).read_text())
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"could not load state file: {exc}") from exc
        from .symspace import compress

        if mat.shape[0] == d * d:
            mat = compress(mat)
        values = np.linalg.eigvalsh(mat)[::-1]
        return d, values
    raise UsageError("provide --eigs or --state-file")


def cmd_abs_ppt(args) -> int:
    started = time.time()
    d, values = _state_spectrum(args)
    try:
        verdict = abssep.is_abs_sym_ppt(values, d, mode=args.mode, tol=args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = {
        "d": d,
        "spectrum": _spectrum_list(values),
        "holds": verdict.holds,
        "mode": verdict.mode,
        "min_eigenvalue": verdict.min_eigenvalue,
        "marginal": verdict.marginal,
        "certificate": None,
    }
    if verdict.certificate is not None:
        cert = verdict.certificate
        payload["certificate"] = {
            "assignment": json.loads(cert.assignment.to_json()),
            "eigenvalue": cert.eigenvalue,
            "eigenvector": [float(v) for v in cert.eigenvector],
        }
    _emit("abs-ppt", _args_dict(args) | {"d": d}, payload, started)
    if verdict.holds:
        return EXIT_CONJECTURAL if verdict.mode == "conjectural" else EXIT_OK
    return EXIT_FAIL


# --------------------------------------------------------------------------
# witness
# --------------------------------------------------------------------------

def _fixture_matches(vec: np.ndarray) -> list[str]:
    names = []
    for name, (arr, _) in fixtures.DATA_FILES.items():
        if arr.ndim == 1 and arr.shape == vec.shape and np.allclose(arr, vec, atol=1e-12):
            names.append(name)
    return names


def cmd_witness(args) -> int:
    started = time.time()
    action = args.action
    payload: dict
    if action in ("from-vector", "eigs"):
        if args.vector_file is None:
            raise UsageError(f"witness {action} requires --vector-file")
        d, vec = _load_vector_arg(args.vector_file)
        if action == "eigs":
            try:
                predicted = witness.predicted_eigs_real_sym(vec)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
            payload = {"d": d, "predicted_spectrum": _spectrum_list(predicted.values)}
        else:
            cand = witness.witness_from_vector(vec)
            spectrum = cand.eigenvalues()
            payload = {
                "d": d,
                "spectrum": _spectrum_list(spectrum),
                "negative_count": witness.count_negative_eigs(cand.matrix),
                "fixture_matches": _fixture_matches(vec),
            }
            from .symspace import is_symmetric_vector, max_abs

            if max_abs(np.imag(vec)) < 1e-12 and is_symmetric_vector(vec):
                predicted = witness.predicted_eigs_real_sym(np.real(vec))
                payload["predicted_spectrum"] = _spectrum_list(predicted.values)
    elif action == "construct-2q":
        if args.mu is None:
            raise UsageError("witness construct-2q requires --mu")
        mu = serialize.parse_spectrum(args.mu)
        if mu.size != 3:
            raise UsageError("--mu must have three entries for d=2")
        try:
            x, cand = witness.construct_two_qubit_witness(*mu)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        payload = {
            "mu": _spectrum_list(mu),
            "source": serialize.complex_to_pairs(x),
            "spectrum": _spectrum_list(cand.eigenvalues()),
            "negative_count": witness.count_negative_eigs(cand.matrix),
        }
    elif action == "max-neg":
        if args.d is None:
            raise UsageError("witness max-neg requires --d")
        subspace = witness.npt_subspace(args.d)
        try:
            overlap = sdp.max_overlap_ppt(subspace.projector(), args.d, tol=args.tol)
        except RuntimeError as exc:
            raise InconclusiveError(str(exc)) from exc
        cand = sdp.max_neg_witness_from_overlap(subspace, overlap)
        sampled = witness.check_sew_sampled(cand.matrix, seed=args.seed or 0)
        payload = {
            "d": args.d,
            "overlap_constant": overlap.c,
            "spectrum": _spectrum_list(cand.eigenvalues()),
            "negative_count": witness.count_negative_eigs(cand.matrix),
            "sampled_min": sampled.min_value,
        }
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown witness action {action}")
    _emit(f"witness {action}", _args_dict(args), payload, started)
    return EXIT_OK


# --------------------------------------------------------------------------
# spectrum-check
# --------------------------------------------------------------------------

def cmd_spectrum_check(args) -> int:
    started = time.time()
    mu = serialize.parse_spectrum(args.mu)
    d = args.d
    if mu.size != d * (d + 1) // 2:
        raise UsageError(f"--mu must have {d * (d + 1) // 2} entries for d={d}")
    payload: dict = {"d": d, "mu": _spectrum_list(mu), "method": args.method}
    if args.method == "closed-form":
        if d != 2:
            raise UsageError("closed-form method is available only for d=2")
        feasible = sdp.decomposable_spectrum_check_2d(*mu, tol=args.tol)
        payload["status"] = "feasible" if feasible else "infeasible"
        payload["margin"] = float(sdp.dual_margin_2d(*mu))
        status = payload["status"]
    else:
        if d == 3:
            check = sdp.decomposable_spectrum_check_3d(mu, tol=args.tol)
        else:
            check = sdp.decomposable_spectrum_check(mu, d, tol=args.tol)
        payload["status"] = check.status
        if check.certificate is not None:
            payload["certificate"] = {
                "y_blocks": [serialize.complex_to_pairs(y) for y in check.certificate.y_blocks],
                "slack": _spectrum_list(check.certificate.slack),
            }
        if check.excluding_spectrum is not None:
            payload["excluding_spectrum"] = _spectrum_list(check.excluding_spectrum)
        status = check.status
    _emit("spectrum-check", _args_dict(args), payload, started)
    if status == "feasible":
        return EXIT_OK
    if status == "infeasible":
        return EXIT_FAIL
    return EXIT_INCONCLUSIVE


# --------------------------------------------------------------------------
# experiment
# --------------------------------------------------------------------------

def _parse_d_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"could not parse --d-range {text!r}") from exc
    if not out:
        raise UsageError("empty --d-range")
    return out


def _fig1_seed(seed: int, d: int) -> int:
    return seed * 1_000_003 + d


def cmd_experiment(args) -> int:
    started = time.time()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    dims = _parse_d_range(args.d_range)
    payload: dict = {"experiment": args.kind, "d_range": dims, "out": str(out_dir)}

    if args.kind == "fig1":
        rows = ["d,real_sym_bound,general_bound,observed_max"]
        reports = {}
        for d in dims:
            checkpoint = out_dir / f"fig1_d{d}.checkpoint.json"
            resume = None
            if args.resume and checkpoint.exists():
                resume = oracle.SearchReport.from_json(checkpoint.read_text())
            remaining = args.trials - (resume.trials if resume else 0)
            if remaining > 0:
                report = oracle.search_neg_eigs(d, args.vector_class, remaining,
                                                _fig1_seed(args.seed, d), resume=resume)
            else:
                report = resume
            checkpoint.write_text(report.to_json() + "\n")
            (out_dir / f"fig1_d{d}.histogram.csv").write_text(report.histogram_csv())
            real_cap, general_cap = witness.max_neg_bounds(d)
            rows.append(f"{d},{real_cap},{general_cap},{report.best_count}")
            reports[d] = {"best_count": report.best_count, "trials": report.trials,
                          "best_trial": report.best_trial}
        csv_text = "\n".join(rows) + "\n"
        (out_dir / "fig1.csv").write_text(csv_text)
        payload["csv"] = csv_text
        payload["reports"] = reports
    elif args.kind == "orderings":
        rows = ["d,count,last_new,saturated"]
        details = {}
        for d in dims:
            scan = matricize.scan_orderings(d, args.trials, args.seed)
            rows.append(f"{d},{scan.count},{scan.last_new},{int(scan.saturated)}")
            details[d] = {
                "count": scan.count,
                "saturated": scan.saturated,
                "assignments": [list(a.targets) for a in scan.assignments()],
            }
            (out_dir / f"orderings_d{d}.json").write_text(
                json.dumps(details[d], indent=2) + "\n")
        csv_text = "\n".join(rows) + "\n"
        (out_dir / "orderings.csv").write_text(csv_text)
        payload["csv"] = csv_text
        payload["details"] = details
    else:  # pragma: no cover
        raise UsageError(f"unknown experiment {args.kind}")
    _emit(f"experiment {args.kind}", _args_dict(args), payload, started)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser / entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symwit",
                                     description="Spectral tests for symmetric states and witnesses")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("abs-ppt", help="absolute symmetric PPT verdict for a spectrum")
    p.add_argument("--d", type=int)
    p.add_argument("--eigs", help="comma-separated descending spectrum")
    p.add_argument("--state-file", help="JSON operator file; eigenvalues are extracted")
    p.add_argument("--mode", choices=["fastpath", "reduced", "full", "conjectural"],
                   default="fastpath")
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_abs_ppt)

    p = sub.add_parser("witness", help="witness constructions and spectra")
    p.add_argument("action", choices=["eigs", "from-vector", "construct-2q", "max-neg"])
    p.add_argument("--vector-file", "--file", dest="vector_file")
    p.add_argument("--mu", help="comma-separated descending target spectrum")
    p.add_argument("--d", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("spectrum-check", help="decomposable-witness spectrum admissibility")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--method", choices=["closed-form", "sdp"], default="sdp")
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_spectrum_check)

    p = sub.add_parser("experiment", help="reproducible sweeps with CSV output")
    p.add_argument("kind", choices=["fig1", "orderings"])
    p.add_argument("--d-range", required=True, help="e.g. 2..5 or 2,3,4")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--vector-class", choices=list(oracle.VECTOR_CLASSES),
                   default="complex_full")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InconclusiveError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())

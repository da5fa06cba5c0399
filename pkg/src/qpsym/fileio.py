"""JSON problem files and report documents.

Problem file::

    {
      "n": 2,
      "objective": [[1.0, 0.0], [0.0, 0.8]],
      "constraints": [[[0.5, 2.0], [2.0, 0.5]], [[0.5, -2.0], [-2.0, 0.5]]],
      "tolerances": {"rank_tol": 1e-10, "residual_tol": 1e-8, "pd_tol": 1e-12},
      "search": {"restarts": 64, "seed": 0, "max_permutations": 40320}
    }

``tolerances`` and ``search`` are optional.  Floats are written with Python's
shortest round-trip representation, so every matrix reloads bit-for-bit.
"""

import json
import numbers

import numpy as np

from .discrete import DiscreteCoset, PairStats, SearchOptions
from .group import CosetRecord, SymmetryReport
from .linalg import Tolerances
from .problem import permutation_matrix

REPORT_FORMAT = "qpsym-report"
REPORT_VERSION = 1


class ProblemFileError(ValueError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


def _matrix(value, n, where):
    if not isinstance(value, list) or len(value) != n:
        raise ProblemFileError(f"{where}: expected {n} rows")
    for r, row in enumerate(value):
        if not isinstance(row, list) or len(row) != n:
            raise ProblemFileError(f"{where}: row {r} must have {n} entries")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, numbers.Real):
                raise ProblemFileError(f"{where}: row {r} has non-numeric entry {x!r}")
    return np.array(value, dtype=float)


def parse_problem_document(text):
    """Return ``(objective, constraints, tolerances, options)`` from problem-file text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise ProblemFileError("top level must be an object")
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ProblemFileError("'n' must be a positive integer")
    if "objective" not in doc:
        raise ProblemFileError("missing 'objective'")
    objective = _matrix(doc["objective"], n, "objective")
    cons = doc.get("constraints")
    if not isinstance(cons, list) or not cons:
        raise ProblemFileError("'constraints' must be a non-empty list")
    constraints = [_matrix(b, n, f"constraints[{i}]") for i, b in enumerate(cons)]
    try:
        tol = Tolerances(**doc.get("tolerances", {}))
        opts = SearchOptions(**doc.get("search", {}))
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(str(exc)) from exc
    return objective, constraints, tol, opts


def read_problem_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse_problem_document(fh.read())


def problem_document(objective, constraints, tol=None, opts=None):
    doc = {
        "n": int(np.shape(objective)[0]),
        "objective": np.asarray(objective, dtype=float).tolist(),
        "constraints": [np.asarray(b, dtype=float).tolist() for b in constraints],
    }
    if tol is not None:
        doc["tolerances"] = _tol_dict(tol)
    if opts is not None:
        doc["search"] = _opts_dict(opts)
    return doc


def _tol_dict(tol):
    return {"rank_tol": tol.rank_tol, "residual_tol": tol.residual_tol, "pd_tol": tol.pd_tol}


def _opts_dict(opts):
    return {
        "max_permutations": opts.max_permutations,
        "restarts": opts.restarts,
        "seed": opts.seed,
        "min_coset_separation": opts.min_coset_separation,
        "max_iterations": opts.max_iterations,
        "polish_threshold": opts.polish_threshold,
        "snap_max_dim": opts.snap_max_dim,
    }


def _mat(a):
    return np.asarray(a, dtype=float).tolist()


def report_to_dict(report):
    return {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "problem_digest": report.problem_digest,
        "n": report.n,
        "m": report.m,
        "constraints_only": report.constraints_only,
        "summary": report.summary(),
        "lie_dim": report.lie_dim,
        "lie_generators": [_mat(g) for g in report.lie_generators],
        "lie_generators_original": [_mat(g) for g in report.lie_generators_original],
        "s": _mat(report.s),
        "s_inv": _mat(report.s_inv),
        "condition": report.condition,
        "cosets": [
            {
                "id": rec.index,
                "permutation": list(rec.permutation),
                "permutation_matrix": permutation_matrix(rec.permutation).tolist(),
                "det_sign": rec.det_sign,
                "residual": rec.coset.residual,
                "q": _mat(rec.q_representative),
                "p": _mat(rec.p_representative),
            }
            for rec in report.cosets
        ],
        "duplicates": [list(d) for d in report.duplicates],
        "tolerances": _tol_dict(report.tolerances),
        "search": {
            "options": _opts_dict(report.options),
            "permutations": [list(p) for p in report.permutations],
            "pairs": [
                {
                    "permutation": list(ps.permutation),
                    "det_sign": ps.det_sign,
                    "space_dim": ps.space_dim,
                    "starts": ps.starts,
                    "converged": ps.converged,
                    "accepted": ps.accepted,
                }
                for ps in report.pairs
            ],
        },
    }


def report_from_dict(doc):
    if doc.get("format") != REPORT_FORMAT:
        raise ProblemFileError("not a qpsym report document")
    if doc.get("version") != REPORT_VERSION:
        raise ProblemFileError(f"unsupported report version {doc.get('version')!r}")
    arr = np.array
    cosets = tuple(
        CosetRecord(
            index=int(c["id"]),
            coset=DiscreteCoset(arr(c["q"], dtype=float), tuple(c["permutation"]), int(c["det_sign"]), float(c["residual"])),
            p_representative=arr(c["p"], dtype=float),
        )
        for c in doc["cosets"]
    )
    search = doc["search"]
    return SymmetryReport(
        problem_digest=doc["problem_digest"],
        n=int(doc["n"]),
        m=int(doc["m"]),
        constraints_only=bool(doc["constraints_only"]),
        lie_generators=tuple(arr(g, dtype=float).reshape(doc["n"], doc["n"]) for g in doc["lie_generators"]),
        lie_generators_original=tuple(
            arr(g, dtype=float).reshape(doc["n"], doc["n"]) for g in doc["lie_generators_original"]
        ),
        cosets=cosets,
        s=arr(doc["s"], dtype=float),
        s_inv=arr(doc["s_inv"], dtype=float),
        tolerances=Tolerances(**doc["tolerances"]),
        options=SearchOptions(**search["options"]),
        permutations=tuple(tuple(p) for p in search["permutations"]),
        pairs=tuple(
            PairStats(tuple(ps["permutation"]), ps["det_sign"], ps["space_dim"], ps["starts"], ps["converged"], ps["accepted"])
            for ps in search["pairs"]
        ),
        duplicates=tuple(tuple(d) for d in doc["duplicates"]),
        condition=float(doc["condition"]),
    )


def dumps_report(report):
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def write_report(report, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_report(report))


def read_report(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(exc.msg, exc.lineno, exc.colno) from exc
    try:
        return report_from_dict(doc)
    except (KeyError, TypeError) as exc:
        raise ProblemFileError(f"malformed report: {exc}") from exc

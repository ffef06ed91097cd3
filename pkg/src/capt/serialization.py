"""JSON encoding shared by the library and the command line.

Complex scalars are ``[re, im]`` pairs and matrices are row-major nested
lists of such pairs. Decoders also accept plain real numbers.
"""

from __future__ import annotations

import json
from typing import Any, Dict, List, Sequence

import numpy as np

from .channels import LinearMap
from .faithfulness import FaithfulnessReport
from .schmidt import OperatorSchmidtDecomposition
from .states import BipartiteState


class FormatError(ValueError):
    """Malformed JSON document or missing field."""


def encode_complex(z) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


def decode_complex(x) -> complex:
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(x[0], x[1])
    raise FormatError(f"not a complex number: {x!r}")


def encode_array(a) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return encode_complex(a)
    return [encode_array(x) for x in a]


def decode_array(x, ndim: int = 2) -> np.ndarray:
    """Nested lists (of ``[re, im]`` pairs or reals) to a complex array of ``ndim`` axes."""
    def walk(node, depth):
        if depth == 0:
            return decode_complex(node)
        if not isinstance(node, (list, tuple)):
            raise FormatError(f"expected a nested list of depth {ndim}")
        return [walk(n, depth - 1) for n in node]

    try:
        return np.array(walk(x, ndim), dtype=complex)
    except ValueError as exc:
        raise FormatError(f"ragged matrix: {exc}") from exc


def _field(obj: Dict[str, Any], key: str):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing field {key!r}")
    return obj[key]


# -- states ------------------------------------------------------------------

def state_to_dict(rho: BipartiteState, vector=None) -> dict:
    out = {"dims": list(rho.dims), "matrix": encode_array(rho.matrix)}
    if vector is not None:
        out["vector"] = encode_array(vector)
    return out


def state_from_dict(obj: dict, check: bool = True) -> BipartiteState:
    """Decode a state; a ``"vector"`` field alone defines a pure state.

    Invalid density matrices raise :class:`capt.states.InvalidStateError`.
    """
    from .states import pure_state

    dims = tuple(int(d) for d in _field(obj, "dims"))
    if len(dims) != 2:
        raise FormatError("dims must have two entries")
    if "matrix" in obj:
        return BipartiteState(decode_array(obj["matrix"]), dims, check=check)
    if "vector" in obj:
        return pure_state(decode_array(obj["vector"], 1), dims)
    raise FormatError("state needs 'matrix' or 'vector'")


# -- decompositions and reports ---------------------------------------------

def osd_to_dict(osd: OperatorSchmidtDecomposition) -> dict:
    return {
        "coefficients": [float(c) for c in osd.coefficients],
        "ops_A": [encode_array(A) for A in osd.ops_a],
        "ops_B": [encode_array(B) for B in osd.ops_b],
        "osr": int(osd.osr),
    }


def report_to_dict(report: FaithfulnessReport) -> dict:
    return report.to_dict()


# -- channels ----------------------------------------------------------------

def channel_to_dict(m: LinearMap) -> dict:
    return {"dim_in": m.dim_in, "dim_out": m.dim_out, "choi": encode_array(m.choi)}


def channel_from_dict(obj: dict) -> LinearMap:
    di = int(_field(obj, "dim_in"))
    do = int(_field(obj, "dim_out"))
    J = decode_array(_field(obj, "choi"))
    if J.shape != (di * do, di * do):
        raise FormatError(f"choi shape {J.shape} does not match dims ({di}, {do})")
    return LinearMap(di, do, J)


# -- plans and results -------------------------------------------------------

def plan_to_dict(plan) -> dict:
    out: Dict[str, Any] = {"scheme": plan.scheme, "seed": plan.seed, "tol": plan.tol}
    if plan.state is not None:
        out["state"] = state_to_dict(plan.state)
    if plan.channels:
        out["channels"] = [channel_to_dict(G) for G in plan.channels]
    if plan.unitaries:
        out["unitaries"] = [encode_array(U) for U in plan.unitaries]
    if plan.probes:
        out["probes"] = [encode_array(P) for P in plan.probes]
    return out


def plan_from_dict(obj: dict):
    from .tomography import ExperimentPlan

    scheme = _field(obj, "scheme")
    state = state_from_dict(obj["state"]) if "state" in obj else None
    return ExperimentPlan(
        scheme=scheme,
        state=state,
        channels=tuple(channel_from_dict(c) for c in obj.get("channels", [])),
        unitaries=tuple(decode_array(U) for U in obj.get("unitaries", [])),
        probes=tuple(decode_array(P) for P in obj.get("probes", [])),
        seed=int(obj.get("seed", 0)),
        tol=float(obj.get("tol", 1e-9)),
    )


def result_to_dict(result, include_estimate: bool = True) -> dict:
    out = {
        "exact": bool(result.exact),
        "residual": result.residual,
        "determined_dim": result.determined_dim,
        "target_dim": result.target_dim,
        "choi_error": result.choi_error,
    }
    if include_estimate:
        out["estimated"] = channel_to_dict(result.estimated)
    return out


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from exc


def load(path) -> Any:
    with open(path) as fh:
        return loads(fh.read())


def dumps(obj: Any) -> str:
    return json.dumps(obj)


def unitaries_to_list(unitaries: Sequence[np.ndarray]) -> list:
    return [encode_array(U) for U in unitaries]

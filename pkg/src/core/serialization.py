"""JSON load/save for spaces and chains.

Floats are written with 17 significant digits, so every value reads back
bit-identical.
"""

from contextlib import contextmanager
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterator, Union

from .errors import CurvTypeError, InvalidInput, InvalidMatrix
from .markov_chain import ReversibleChain, chain_from_weights
from .metric_core import FLAT, NONNEGATIVE, UNKNOWN, FiniteMetricSpace, GeometricModel, validate_metric
from .reports import dumps_json

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

def space_to_dict(space: FiniteMetricSpace) -> Dict[str, Any]:
    out: Dict[str, Any] = {"n": space.n, "dist": space.dist.tolist()}
    if space.labels is not None:
        out["labels"] = list(space.labels)
    if space.model is not None:
        out["model"] = space.model.to_dict()
    out["curvature"] = space.curvature
    out["source"] = space.source
    return out


def _model_from_dict(data: Dict[str, Any]) -> GeometricModel:
    kind = data.get("kind")
    p = data.get("p")
    if isinstance(p, str) and p.lower() in ("inf", "infinity"):
        p = math.inf
    return GeometricModel(kind=kind, coords=data.get("coords", []), p=p, radius=data.get("radius"))


def space_from_dict(data: Dict[str, Any], tol_rel: float = 1e-9) -> FiniteMetricSpace:
    """Rebuild and re-validate a space. Unknown provenance stays 'unknown'."""
    if not isinstance(data, dict) or "dist" not in data:
        raise InvalidMatrix("Space JSON needs a 'dist' field")
    n = data.get("n")
    if n is not None and len(data["dist"]) != int(n):
        raise InvalidMatrix(f"Space JSON says n={n} but dist has {len(data['dist'])} rows")
    model = _model_from_dict(data["model"]) if data.get("model") else None
    curvature = data.get("curvature", UNKNOWN)
    if curvature not in (FLAT, NONNEGATIVE, UNKNOWN):
        curvature = UNKNOWN
    return validate_metric(data["dist"], tol_rel=tol_rel, labels=data.get("labels"), model=model,
                           curvature=curvature, source=data.get("source", "file"))


def chain_to_dict(chain: ReversibleChain) -> Dict[str, Any]:
    return chain.to_dict()


def chain_from_dict(data: Dict[str, Any]) -> ReversibleChain:
    """Accepts {"pi", "A"} or {"weights"} (converted)."""
    if "weights" in data:
        return chain_from_weights(data["weights"])
    if "pi" not in data or "A" not in data:
        raise InvalidMatrix("Chain JSON needs 'pi' and 'A', or 'weights'")
    return ReversibleChain(pi=data["pi"], A=data["A"])


@contextmanager
def decoding(path: PathLike) -> Iterator[None]:
    """Turn malformed content read from path into InvalidInput naming the file."""
    try:
        yield
    except CurvTypeError:
        raise
    except (KeyError, IndexError, TypeError, ValueError) as e:
        raise InvalidInput(f"InvalidInput: malformed content in {path}: {e!r}") from e


def read_json(path: PathLike) -> Any:
    try:
        with open(path) as f:
            return json.load(f)
    except FileNotFoundError:
        raise InvalidInput(f"InvalidInput: input file not found: {path}")
    except json.JSONDecodeError as e:
        raise InvalidInput(f"InvalidInput: invalid JSON in {path}: {e}")
    except OSError as e:
        raise InvalidInput(f"InvalidInput: cannot read {path}: {e}")


def write_json(data: Any, path: PathLike) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        f.write(dumps_json(data) + "\n")
    logger.info(f"Wrote {path}")


def load_space(path: PathLike, tol_rel: float = 1e-9) -> FiniteMetricSpace:
    data = read_json(path)
    with decoding(path):
        return space_from_dict(data, tol_rel=tol_rel)


def save_space(space: FiniteMetricSpace, path: PathLike) -> None:
    write_json(space_to_dict(space), path)


def load_chain(path: PathLike) -> ReversibleChain:
    data = read_json(path)
    with decoding(path):
        return chain_from_dict(data)


def save_chain(chain: ReversibleChain, path: PathLike) -> None:
    write_json(chain_to_dict(chain), path)

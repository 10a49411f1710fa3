"""Scenario configuration: a JSON document with ``model``, ``run`` and ``tolerances`` sections.

Matrices are nested arrays whose entries are either real numbers or
``[re, im]`` pairs. Level and basis indices are 0-based.

Exactly one model source is allowed::

    {"model": {"preset": "paper-three-level", "nu": [0, 0.1, 50], "Omega": 1, "alpha": 100}}
    {"model": {"H": [[...]], "A": [[...]], "bands": {"band1": [0, 1], "band2": [2]},
               "gamma": 0.1, "temperature": 1.0}}
    {"model": {"generator": [[...]]}}           # explicit d^2 x d^2 Liouvillian
    {"model": {"random": {"dim": 3, "seed": 7}}}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import presets
from .bath import BathModel
from .generators import Liouvillian, Variant
from .operators import HERMITIAN_TOL, is_hermitian, random_hermitian
from .system import SystemModel, projector_from_indices

MODEL_SOURCES = ("preset", "H", "generator", "random")
DEFAULT_TOLERANCES = {
    "hermitian": HERMITIAN_TOL,
    "degeneracy": 1e-9,
    "band": 1e-10,
    "kossakowski": 1e-10,
    "choi": 1e-9,
}
DEFAULT_DEFECT_SCAN = {
    "omega0": 50.0,
    "Omega": 0.0,
    "gamma_T": 500.0,
    "temperatures": [1e8],
    "delta_omegas": [0.1, 0.05, 0.025, 0.0125],
    "probe_alpha_t": 0.1,
    "initial_state": 2,
}


class ConfigError(ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class ModelConfig:
    source: str
    system: Optional[SystemModel] = None
    bands: Optional[tuple] = None
    bath: Optional[BathModel] = None
    alpha: Optional[float] = None
    generator: Optional[Liouvillian] = None
    nu: Optional[tuple] = None
    Omega: Optional[complex] = None
    seed: Optional[int] = None

    @property
    def dim(self) -> int:
        return self.generator.dim if self.generator is not None else self.system.dim


@dataclass
class RunConfig:
    variants: Optional[list] = None
    times: Optional[np.ndarray] = None
    initial_state: Any = None
    elements: Optional[list] = None
    alphas: np.ndarray = field(default_factory=lambda: np.array(presets.DEFAULT_ALPHAS))
    temperatures: Optional[np.ndarray] = None
    horizon: float = presets.DEFAULT_HORIZON
    n_times: int = 401
    choi_times: np.ndarray = field(default_factory=lambda: np.logspace(-3, 1, 30))
    defect_scan: dict = field(default_factory=lambda: dict(DEFAULT_DEFECT_SCAN))
    output_dir: Optional[str] = None


@dataclass
class ScenarioConfig:
    model: ModelConfig
    run: RunConfig
    tolerances: dict
    raw: dict


def parse_complex(value, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])
    raise ConfigError(where, f"expected a number or an [re, im] pair, got {value!r}")


def parse_matrix(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ConfigError(where, "expected a nested array (list of rows)")
    n = len(value)
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(value):
        if len(row) != n:
            raise ConfigError(f"{where}[{i}]", f"row has {len(row)} entries, expected {n}")
        for j, v in enumerate(row):
            out[i, j] = parse_complex(v, f"{where}[{i}][{j}]")
    return out


def parse_vector(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise ConfigError(where, "expected a non-empty array")
    return np.array([parse_complex(v, f"{where}[{i}]") for i, v in enumerate(value)])


def _hermitian(value, where: str, tol: float) -> np.ndarray:
    M = parse_matrix(value, where)
    if not is_hermitian(M, tol):
        raise ConfigError(where, "matrix is not Hermitian")
    return M


def _positive(value, where: str, allow_zero: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(where, f"expected a number, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero) or not np.isfinite(value):
        raise ConfigError(where, f"must be {'nonnegative' if allow_zero else 'positive'}, got {value!r}")
    return float(value)


def parse_grid(value, where: str) -> np.ndarray:
    """A list of numbers or ``{"start", "stop", "num", "spacing": "linear" | "log"}``."""
    if isinstance(value, list):
        try:
            return np.array([float(v) for v in value])
        except (TypeError, ValueError):
            raise ConfigError(where, "grid entries must be numbers") from None
    if isinstance(value, dict):
        unknown = set(value) - {"start", "stop", "num", "spacing"}
        if unknown:
            raise ConfigError(where, f"unknown keys {sorted(unknown)}")
        try:
            start, stop, num = float(value["start"]), float(value["stop"]), int(value["num"])
        except KeyError as exc:
            raise ConfigError(where, f"missing key {exc.args[0]!r}") from None
        spacing = value.get("spacing", "linear")
        if spacing == "log":
            if start <= 0 or stop <= 0:
                raise ConfigError(where, "log spacing needs positive bounds")
            return np.logspace(np.log10(start), np.log10(stop), num)
        if spacing == "linear":
            return np.linspace(start, stop, num)
        raise ConfigError(f"{where}.spacing", f"expected 'linear' or 'log', got {spacing!r}")
    raise ConfigError(where, "expected a list or a {start, stop, num} object")


def _bath(model: dict, where: str) -> Optional[BathModel]:
    if "gamma" in model or "temperature" in model:
        if "gamma" not in model or "temperature" not in model:
            raise ConfigError(where, "gamma and temperature must be given together")
        return BathModel(_positive(model["gamma"], f"{where}.gamma", allow_zero=True),
                         _positive(model["temperature"], f"{where}.temperature"))
    return None


def parse_model(model: dict, tol: dict, where: str = "model") -> ModelConfig:
    if not isinstance(model, dict):
        raise ConfigError(where, "expected an object")
    sources = [k for k in MODEL_SOURCES if k in model]
    if len(sources) != 1:
        raise ConfigError(where, f"exactly one model source of {list(MODEL_SOURCES)} is required, found {sources}")
    source = sources[0]
    htol = tol["hermitian"]
    alpha = _positive(model["alpha"], f"{where}.alpha", allow_zero=True) if "alpha" in model else None
    lamb = _hermitian(model["lamb_shift"], f"{where}.lamb_shift", htol) if "lamb_shift" in model else None

    if source == "preset":
        if model["preset"] != presets.PRESET_NAME:
            raise ConfigError(f"{where}.preset", f"unknown preset {model['preset']!r}")
        nu = model.get("nu", list(presets.DEFAULT_NU))
        if not isinstance(nu, list) or len(nu) != 3:
            raise ConfigError(f"{where}.nu", "expected three level energies")
        nu = tuple(float(v) for v in nu)
        Omega = parse_complex(model.get("Omega", presets.DEFAULT_OMEGA), f"{where}.Omega")
        system = presets.three_level_model(nu, Omega, lamb)
        bath = _bath(model, where)
        if alpha is None and bath is None:
            alpha = presets.DEFAULT_ALPHA
        return ModelConfig("preset", system, presets.three_level_bands(), bath, alpha, nu=nu,
                           Omega=Omega)

    if source == "H":
        if "A" not in model:
            raise ConfigError(where, "explicit model needs both H and A")
        H = _hermitian(model["H"], f"{where}.H", htol)
        A = _hermitian(model["A"], f"{where}.A", htol)
        if H.shape != A.shape:
            raise ConfigError(f"{where}.A", f"shape {A.shape} does not match H {H.shape}")
        if lamb is not None and lamb.shape != H.shape:
            raise ConfigError(f"{where}.lamb_shift", "shape does not match H")
        bands = None
        if "bands" in model:
            bands = _bands(model["bands"], H.shape[0], f"{where}.bands")
        return ModelConfig("explicit", SystemModel(H, A, lamb), bands, _bath(model, where), alpha)

    if source == "generator":
        M = parse_matrix(model["generator"], f"{where}.generator")
        d = int(round(np.sqrt(M.shape[0])))
        if d * d != M.shape[0]:
            raise ConfigError(f"{where}.generator", f"size {M.shape[0]} is not a square of an integer")
        return ModelConfig("generator", generator=Liouvillian(d, M, Variant.EXPLICIT, {"source": "config"}))

    spec = model["random"]
    if not isinstance(spec, dict):
        raise ConfigError(f"{where}.random", "expected an object with dim and seed")
    d = int(spec.get("dim", 3))
    seed = int(spec.get("seed", 0))
    if d < 2:
        raise ConfigError(f"{where}.random.dim", "dimension must be at least 2")
    system = random_model(d, seed)
    bath = _bath(model, where) or BathModel(0.1, 1.0)
    return ModelConfig("random", system, None, bath, alpha, seed=seed)


def random_model(d: int, seed: int) -> SystemModel:
    rng = np.random.default_rng(seed)
    H = np.diag(np.sort(rng.uniform(0.0, 5.0, size=d))).astype(complex)
    A = random_hermitian(d, rng)
    # H is almost surely nondegenerate, so the diagonal of A is exactly A(0)
    np.fill_diagonal(A, 0.0)
    return SystemModel(H, A)


def _bands(value, d: int, where: str):
    if not isinstance(value, dict):
        raise ConfigError(where, "expected {band1: [...], band2: [...]} or {P1: matrix, P2: matrix}")
    if "band1" in value and "band2" in value:
        idx = []
        for key in ("band1", "band2"):
            v = value[key]
            if not isinstance(v, list) or not all(isinstance(i, int) and 0 <= i < d for i in v):
                raise ConfigError(f"{where}.{key}", f"expected a list of basis indices in [0, {d})")
            idx.append(v)
        return projector_from_indices(idx[0], d), projector_from_indices(idx[1], d)
    if "P1" in value and "P2" in value:
        return parse_matrix(value["P1"], f"{where}.P1"), parse_matrix(value["P2"], f"{where}.P2")
    raise ConfigError(where, "expected band1/band2 index lists or P1/P2 matrices")


def parse_initial_state(value, d: int, where: str):
    if value is None:
        return None
    if isinstance(value, int) and not isinstance(value, bool):
        if not 0 <= value < d:
            raise ConfigError(where, f"basis index {value} outside [0, {d})")
        return value
    psi = parse_vector(value, where)
    if psi.size != d:
        raise ConfigError(where, f"state vector has {psi.size} entries, expected {d}")
    if np.linalg.norm(psi) == 0:
        raise ConfigError(where, "state vector is zero")
    return psi


def parse_run(run: dict, d: int, where: str = "run") -> RunConfig:
    if not isinstance(run, dict):
        raise ConfigError(where, "expected an object")
    out = RunConfig()
    if "variants" in run:
        names = run["variants"]
        if not isinstance(names, list):
            raise ConfigError(f"{where}.variants", "expected a list")
        try:
            out.variants = [Variant(v) for v in names]
        except ValueError:
            raise ConfigError(f"{where}.variants", f"unknown variant in {names!r}") from None
    if "horizon" in run:
        out.horizon = _positive(run["horizon"], f"{where}.horizon")
    if "n_times" in run:
        out.n_times = int(run["n_times"])
        if out.n_times < 2:
            raise ConfigError(f"{where}.n_times", "must be at least 2")
    if "times" in run:
        out.times = parse_grid(run["times"], f"{where}.times")
    if "initial_state" in run:
        out.initial_state = parse_initial_state(run["initial_state"], d, f"{where}.initial_state")
    if "elements" in run:
        el = run["elements"]
        if not isinstance(el, list) or not all(isinstance(p, list) and len(p) == 2 and all(
                isinstance(i, int) and 0 <= i < d for i in p) for p in el):
            raise ConfigError(f"{where}.elements", "expected a list of [row, col] index pairs")
        out.elements = [tuple(p) for p in el]
    if "alphas" in run:
        out.alphas = parse_grid(run["alphas"], f"{where}.alphas")
    if "temperatures" in run:
        out.temperatures = parse_grid(run["temperatures"], f"{where}.temperatures")
    if "choi_times" in run:
        out.choi_times = parse_grid(run["choi_times"], f"{where}.choi_times")
    if "defect_scan" in run:
        ds = run["defect_scan"]
        if not isinstance(ds, dict):
            raise ConfigError(f"{where}.defect_scan", "expected an object")
        unknown = set(ds) - set(DEFAULT_DEFECT_SCAN)
        if unknown:
            raise ConfigError(f"{where}.defect_scan", f"unknown keys {sorted(unknown)}")
        out.defect_scan.update(ds)
    if "output_dir" in run:
        out.output_dir = str(run["output_dir"])
    unknown = set(run) - {"variants", "horizon", "n_times", "times", "initial_state", "elements", "alphas",
                          "temperatures", "choi_times", "defect_scan", "output_dir"}
    if unknown:
        raise ConfigError(where, f"unknown keys {sorted(unknown)}")
    return out


def parse_config(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("<root>", "expected a JSON object")
    unknown = set(data) - {"model", "run", "tolerances"}
    if unknown:
        raise ConfigError("<root>", f"unknown sections {sorted(unknown)}")
    tol = dict(DEFAULT_TOLERANCES)
    for k, v in (data.get("tolerances") or {}).items():
        if k not in tol:
            raise ConfigError(f"tolerances.{k}", "unknown tolerance")
        tol[k] = _positive(v, f"tolerances.{k}")
    if "model" not in data:
        raise ConfigError("<root>", "missing 'model' section")
    try:
        model = parse_model(data["model"], tol)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("model", str(exc)) from None
    run = parse_run(data.get("run", {}), model.dim)
    return ScenarioConfig(model, run, tol, data)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    return parse_config(data)


def preset_config(overrides: Optional[dict] = None) -> ScenarioConfig:
    model = {"preset": presets.PRESET_NAME}
    data = {"model": model}
    if overrides:
        data = json.loads(json.dumps(overrides))
        data.setdefault("model", {}).setdefault("preset", presets.PRESET_NAME)
    return parse_config(data)

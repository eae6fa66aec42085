"""JSON run configuration: parsing, validation, and round-tripping.

A single JSON document describes one run: the network (layers, coupling
strength, regulator, optional pinning), the node dynamics, the initial
states, and the integrator settings. Matrices are nested row arrays so
configs are exact and diffable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dynamics import NodeDynamics
from .errors import InvalidParametersError
from .network import MultiWeightNetwork, PinningConfig
from .regulator import Regulator
from .simulate import IntegratorConfig

__all__ = ["RunConfig", "load_config", "benchmark_config_dict"]


def _require(d: dict, keys, where: str) -> None:
    missing = [k for k in keys if k not in d]
    if missing:
        raise InvalidParametersError(f"{where}: missing fields {missing}")


def _reject_unknown(d: dict, known, where: str) -> None:
    extra = sorted(set(d) - set(known))
    if extra:
        raise InvalidParametersError(f"{where}: unknown fields {extra}")


def _matrix(obj, where: str) -> np.ndarray:
    try:
        m = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidParametersError(f"{where}: not a numeric array") from exc
    if m.ndim != 2:
        raise InvalidParametersError(f"{where}: expected a matrix (nested rows)")
    return m


@dataclass(frozen=True)
class RunConfig:
    """Parsed and validated run description."""

    network: MultiWeightNetwork
    dynamics: NodeDynamics
    initial_states: np.ndarray
    integrator: IntegratorConfig
    out_csv: str | None = None
    out_json: str | None = None

    def __post_init__(self):
        x0 = np.asarray(self.initial_states, dtype=float)
        if x0.shape != (self.network.n_nodes, self.network.n_dims):
            raise InvalidParametersError(
                "initial_states must be an N x n array matching the network"
            )
        if not np.all(np.isfinite(x0)):
            raise InvalidParametersError("initial_states contains NaN or Inf")
        if self.dynamics.n_dims != self.network.n_dims:
            raise InvalidParametersError("dynamics dimension must match the network")
        object.__setattr__(self, "initial_states", x0)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise InvalidParametersError("config root must be a JSON object")
        _require(d, ("network", "dynamics", "initial_states", "integrator"), "config")
        _reject_unknown(
            d, ("network", "dynamics", "initial_states", "integrator", "outputs"), "config"
        )
        try:
            network = _network_from_dict(d["network"])
            dynamics = _dynamics_from_dict(d["dynamics"])
            integrator = _integrator_from_dict(d["integrator"])
            x0 = _matrix(d["initial_states"], "initial_states")
        except (TypeError, ValueError, KeyError) as exc:
            raise InvalidParametersError(f"config: {exc}") from exc

        out_csv = out_json = None
        if "outputs" in d:
            outputs = d["outputs"]
            if not isinstance(outputs, dict):
                raise InvalidParametersError("outputs must be an object")
            _reject_unknown(outputs, ("csv", "json"), "outputs")
            out_csv = outputs.get("csv")
            out_json = outputs.get("json")
        return cls(
            network=network,
            dynamics=dynamics,
            initial_states=x0,
            integrator=integrator,
            out_csv=out_csv,
            out_json=out_json,
        )

    def to_dict(self) -> dict:
        d = {
            "network": _network_to_dict(self.network),
            "dynamics": _dynamics_to_dict(self.dynamics),
            "initial_states": self.initial_states.tolist(),
            "integrator": _integrator_to_dict(self.integrator),
        }
        if self.out_csv is not None or self.out_json is not None:
            outputs = {}
            if self.out_csv is not None:
                outputs["csv"] = self.out_csv
            if self.out_json is not None:
                outputs["json"] = self.out_json
            d["outputs"] = outputs
        return d


def _network_from_dict(d: dict) -> MultiWeightNetwork:
    if not isinstance(d, dict):
        raise InvalidParametersError("network must be an object")
    _require(d, ("ocms", "icms", "eta", "regulator"), "network")
    _reject_unknown(d, ("ocms", "icms", "eta", "regulator", "pinning"), "network")
    if not isinstance(d["ocms"], list) or not isinstance(d["icms"], list):
        raise InvalidParametersError("network: ocms and icms must be lists of matrices")
    ocms = [_matrix(m, f"ocms[{w}]") for w, m in enumerate(d["ocms"])]
    icms = [_matrix(m, f"icms[{w}]") for w, m in enumerate(d["icms"])]
    pinning = None
    if d.get("pinning") is not None:
        p = d["pinning"]
        if not isinstance(p, dict):
            raise InvalidParametersError("pinning must be an object")
        _require(p, ("gain", "target_initial"), "pinning")
        _reject_unknown(p, ("gain", "target_initial"), "pinning")
        pinning = PinningConfig(
            gain=_matrix(p["gain"], "pinning.gain"),
            target_initial=np.asarray(p["target_initial"], dtype=float),
        )
    return MultiWeightNetwork(
        ocms=ocms,
        icms=icms,
        eta=float(d["eta"]),
        regulator=Regulator.from_dict(d["regulator"]),
        pinning=pinning,
    )


def _network_to_dict(net: MultiWeightNetwork) -> dict:
    d = {
        "ocms": [m.tolist() for m in net.ocms],
        "icms": [m.tolist() for m in net.icms],
        "eta": net.eta,
        "regulator": net.regulator.to_dict(),
    }
    if net.pinning is not None:
        d["pinning"] = {
            "gain": net.pinning.gain.tolist(),
            "target_initial": net.pinning.target_initial.tolist(),
        }
    return d


def _dynamics_from_dict(d: dict) -> NodeDynamics:
    if not isinstance(d, dict) or "kind" not in d:
        raise InvalidParametersError("dynamics needs a 'kind' field")
    if d["kind"] == "chua3":
        _reject_unknown(d, ("kind",), "dynamics")
        return NodeDynamics.chua3()
    if d["kind"] == "pwl_affine":
        _require(d, ("D", "A", "hf"), "dynamics")
        _reject_unknown(d, ("kind", "D", "A", "hf"), "dynamics")
        return NodeDynamics.pwl_affine(
            D=_matrix(d["D"], "dynamics.D"),
            A=_matrix(d["A"], "dynamics.A"),
            hf=float(d["hf"]),
        )
    raise InvalidParametersError(f"unknown dynamics kind {d['kind']!r}")


def _dynamics_to_dict(dyn: NodeDynamics) -> dict:
    if dyn.kind == "chua3":
        return {"kind": "chua3"}
    return {"kind": "pwl_affine", "D": dyn.D.tolist(), "A": dyn.A.tolist(), "hf": dyn.hf}


def _integrator_from_dict(d: dict) -> IntegratorConfig:
    if not isinstance(d, dict):
        raise InvalidParametersError("integrator must be an object")
    _require(d, ("stop_gap",), "integrator")
    known = ("stop_gap", "step_cap", "shrink_factor", "samples", "gain_cap")
    _reject_unknown(d, known, "integrator")
    kwargs = {"stop_gap": float(d["stop_gap"])}
    if "step_cap" in d and d["step_cap"] is not None:
        kwargs["step_cap"] = float(d["step_cap"])
    if "shrink_factor" in d:
        kwargs["shrink_factor"] = float(d["shrink_factor"])
    if "samples" in d:
        kwargs["samples"] = int(d["samples"])
    if "gain_cap" in d:
        kwargs["gain_cap"] = float(d["gain_cap"])
    return IntegratorConfig(**kwargs)


def _integrator_to_dict(cfg: IntegratorConfig) -> dict:
    d = {
        "stop_gap": cfg.stop_gap,
        "shrink_factor": cfg.shrink_factor,
        "samples": cfg.samples,
        "gain_cap": cfg.gain_cap,
    }
    if cfg.step_cap is not None:
        d["step_cap"] = cfg.step_cap
    return d


def load_config(path: str) -> RunConfig:
    """Parse and validate a JSON config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise InvalidParametersError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidParametersError(f"config {path} is not valid JSON: {exc}") from exc
    return RunConfig.from_dict(raw)


def benchmark_config_dict(eta: float, pinned: bool = False, stop_gap: float = 1e-3) -> dict:
    """Config document for the built-in benchmark, ready to serialize."""
    from .benchmark import benchmark_network, BENCHMARK_X0

    net = benchmark_network(eta, pinned=pinned)
    cfg = RunConfig(
        network=net,
        dynamics=NodeDynamics.chua3(),
        initial_states=BENCHMARK_X0.copy(),
        integrator=IntegratorConfig(stop_gap=stop_gap),
    )
    return cfg.to_dict()

"""Structured text configuration: [stanza] headers with key = value lines.

Experiments have many parameters; a config file (not positional arguments)
keeps runs reproducible.  Parse errors carry line numbers; unknown registry
names are reported with the offending identifier by the registries
themselves.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .models import (
    BallModel,
    CertifyRequest,
    DoublingRequest,
    ErmakoffRequest,
    ExplicitSpaceModel,
    FunctionModel,
    IndicesRequest,
    LineGridSpaceModel,
    NormRequest,
    PoincareRequest,
    RearrangeRequest,
)

__all__ = ["ConfigError", "ParsedConfig", "parse_config_text", "build_request"]


class ConfigError(ValueError):
    pass


@dataclass
class Stanza:
    name: str
    line: int
    entries: dict[str, tuple[str, int]] = field(default_factory=dict)

    def get(self, key: str, default: str | None = None) -> str | None:
        if key in self.entries:
            return self.entries[key][0]
        return default

    def require(self, key: str) -> str:
        if key not in self.entries:
            raise ConfigError(f"stanza [{self.name}] (line {self.line}) is missing key {key!r}")
        return self.entries[key][0]

    def get_float(self, key: str, default: float | None = None) -> float | None:
        raw = self.get(key)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(
                f"line {self.entries[key][1]}: key {key!r} needs a number, got {raw!r}"
            ) from None

    def get_int(self, key: str, default: int | None = None) -> int | None:
        raw = self.get(key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(
                f"line {self.entries[key][1]}: key {key!r} needs an integer, got {raw!r}"
            ) from None

    def get_bool(self, key: str, default: bool) -> bool:
        raw = self.get(key)
        if raw is None:
            return default
        low = raw.strip().lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ConfigError(f"line {self.entries[key][1]}: key {key!r} needs a boolean, got {raw!r}")

    def get_list(self, key: str, default: list[str] | None = None) -> list[str] | None:
        raw = self.get(key)
        if raw is None:
            return default
        return [part.strip() for part in raw.split(",") if part.strip()]


@dataclass
class ParsedConfig:
    stanzas: dict[str, Stanza]

    def stanza(self, name: str) -> Stanza | None:
        return self.stanzas.get(name)

    def require(self, name: str) -> Stanza:
        if name not in self.stanzas:
            raise ConfigError(f"missing required stanza [{name}]")
        return self.stanzas[name]


def parse_config_text(text: str) -> ParsedConfig:
    stanzas: dict[str, Stanza] = {}
    current: Stanza | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise ConfigError(f"line {lineno}: empty stanza name")
            if name in stanzas:
                raise ConfigError(f"line {lineno}: duplicate stanza [{name}]")
            current = Stanza(name=name, line=lineno)
            stanzas[name] = current
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if current is None:
            raise ConfigError(f"line {lineno}: key outside any [stanza]")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in current.entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} in [{current.name}]")
        current.entries[key] = (value.strip(), lineno)
    return ParsedConfig(stanzas)


# ---------------------------------------------------------------------------
# stanza -> request model translation
# ---------------------------------------------------------------------------

def _space_model(cfg: ParsedConfig):
    st = cfg.require("space")
    kind = st.get("kind", "line_grid")
    if kind == "line_grid":
        return LineGridSpaceModel(
            start=st.get_float("start", 0.0),
            stop=st.get_float("stop", 1.0),
            count=st.get_int("count", 101),
            weight=st.get("weight", "uniform"),
        )
    if kind == "explicit":
        dist_raw = st.require("dist")
        rows = [
            [float(x) for x in chunk.split()]
            for chunk in dist_raw.split("/")
            if chunk.strip()
        ]
        weight = [float(x) for x in st.require("weight").split()]
        return ExplicitSpaceModel(dist=rows, weight=weight)
    raise ConfigError(f"stanza [space]: unknown kind {kind!r} (line {st.line})")


def _ball_model(cfg: ParsedConfig, name: str = "ball") -> BallModel | None:
    st = cfg.stanza(name)
    if st is None:
        return None
    return BallModel(
        center=st.get_int("center", 0),
        radius=st.get_float("radius", 1.0),
        closed=st.get_bool("closed", False),
    )


def _function_model(cfg: ParsedConfig) -> FunctionModel:
    st = cfg.stanza("function")
    if st is None:
        return FunctionModel()
    kind = st.get("kind", "coordinate")
    values = st.get("values")
    return FunctionModel(
        kind=kind,
        origin=st.get_int("origin", 0),
        values=[float(x) for x in values.split()] if values is not None else None,
        ball=_ball_model(cfg, "function_ball"),
    )


def _xy(cfg: ParsedConfig) -> tuple[str, str]:
    st = cfg.require("spaces")
    return st.require("x"), st.require("y")


def build_request(cfg: ParsedConfig, operation: str, seed: int, grid_scale: int):
    """Assemble the request model for one subcommand from parsed stanzas."""
    if operation == "norm":
        st = cfg.require("norm")
        return NormRequest(
            space=_space_model(cfg),
            function=_function_model(cfg),
            specs=st.get_list("specs") or [],
            ball=_ball_model(cfg),
            seed=seed,
        )
    if operation == "rearrange":
        return RearrangeRequest(
            space=_space_model(cfg),
            function=_function_model(cfg),
            ball=_ball_model(cfg),
            seed=seed,
        )
    if operation == "indices":
        st = cfg.require("indices")
        return IndicesRequest(
            specs=st.get_list("specs") or [],
            resolution=(st.get_int("resolution", 1)) * grid_scale,
        )
    if operation == "ermakoff":
        st = cfg.require("gain")
        x = y = None
        if cfg.stanza("spaces") is not None:
            x, y = _xy(cfg)
        return ErmakoffRequest(
            gain=st.require("name"),
            x=x,
            y=y,
            k_max=st.get_int("k_max", 40),
        )
    if operation == "doubling":
        st = cfg.stanza("doubling")
        return DoublingRequest(
            space=_space_model(cfg),
            max_rows=st.get_int("max_rows", 0) if st else 0,
        )
    if operation == "poincare":
        st = cfg.require("poincare")
        x, y = _xy(cfg)
        return PoincareRequest(
            space=_space_model(cfg),
            x=x,
            y=y,
            sigma=st.get_float("sigma", 1.0),
            families=st.get_list("families", list(PoincareRequest.model_fields["families"].default)),
            ball_count=st.get_int("ball_count", 4) * grid_scale,
            zero_boundary=st.get_bool("zero_boundary", False),
            safety=st.get_float("safety", 2.0),
            connect_radius=st.get_float("connect_radius", None),
            seed=seed,
        )
    if operation == "certify":
        st = cfg.require("certify")
        x, y = _xy(cfg)
        gain_st = cfg.stanza("gain")
        c_raw = st.get("c", "auto")
        return CertifyRequest(
            space=_space_model(cfg),
            x=x,
            y=y,
            gain=gain_st.require("name") if gain_st else "psi_of(X,Y)",
            c=None if c_raw == "auto" else float(c_raw),
            j_max=st.get_int("j_max", 20),
            sigma=st.get_float("sigma", 1.0),
            families=st.get_list("families", list(CertifyRequest.model_fields["families"].default)),
            safety=st.get_float("safety", 2.0),
            ball_count=st.get_int("ball_count", 3),
            ball=_ball_model(cfg),
            connect_radius=st.get_float("connect_radius", None),
            seed=seed,
        )
    raise ConfigError(f"unknown operation {operation!r}")

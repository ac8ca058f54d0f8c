"""Run configuration: dataclasses with simulation defaults and a plain-text
INI loader/dumper.

Every knob has a default matching the reference simulation setup; an empty
config file therefore yields a fully usable configuration.  Unknown sections
or keys are rejected, and range violations are reported with the offending
key name.
"""

import configparser
import io
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import ChannelParams
from .energy import EnergyParams
from .layout import LAYOUT_KINDS, UNIFORM_DISC, load_layout, make_layout
from .rates import Mode, PowerConfig

__all__ = [
    "TaskDistribution",
    "EnvConfig",
    "AgentConfig",
    "RunConfig",
    "ConfigError",
    "load_config",
    "loads_config",
    "dump_config",
    "dumps_config",
    "SCHEMES",
]

BITS_PER_KB = 8192  # 1 KB = 1024 bytes
SCHEMES = ("proposed", "re-ot", "ja-ot", "re-lt", "ja-lt")


class ConfigError(ValueError):
    """Raised for malformed config files or out-of-range values."""


@dataclass(frozen=True)
class TaskDistribution:
    """Uniform ranges the per-slot tasks are drawn from."""

    s_min_bits: float = 20.0 * BITS_PER_KB
    s_max_bits: float = 30.0 * BITS_PER_KB
    f_min: float = 1000.0
    f_max: float = 1200.0


@dataclass(frozen=True)
class EnvConfig:
    """Everything the environment needs apart from the random stream."""

    n_ues: int = 10
    t_slots: int = 10
    delta: float = 1.0
    v_max: float = 20.0
    epsilon: float = 0.1
    r_om: float = 0.2
    l_max: float = 200.0
    d_max: float = 45.0
    h: float = 80.0
    h_e: float = 120.0
    legit: tuple = (0.0, 0.0)
    eve: tuple = (80.0, 80.0)
    helper_init: tuple = (-90.0, -90.0)
    layout_kind: str = UNIFORM_DISC
    layout_file: str = ""
    channel: ChannelParams = field(default_factory=ChannelParams)
    power: PowerConfig = field(default_factory=PowerConfig)
    energy: EnergyParams = field(default_factory=EnergyParams)
    tasks: TaskDistribution = field(default_factory=TaskDistribution)
    forced_mode: Mode | None = None

    def resolve_layout(self, rng):
        """Load the layout file if one is set, else generate from the rng."""
        if self.layout_file:
            layout = load_layout(self.layout_file)
            if layout.n_ues != self.n_ues:
                raise ConfigError(
                    f"layout file has {layout.n_ues} users but config key u = {self.n_ues}")
            return layout
        return make_layout(self.layout_kind, self.n_ues, rng,
                           legit=self.legit, eve=self.eve,
                           helper_init=self.helper_init, h=self.h, h_e=self.h_e,
                           l_max=self.l_max, d_max=self.d_max)

    def with_mode(self, mode):
        return replace(self, forced_mode=mode)

    def with_horizon(self, t_slots):
        return replace(self, t_slots=int(t_slots))


@dataclass(frozen=True)
class AgentConfig:
    """Learning hyperparameters of the actor-critic agent."""

    gamma: float = 0.95
    tau: float = 0.005
    batch_size: int = 70
    buffer_capacity: int = 8000
    noise_var: float = 0.6
    noise_decay: float = 0.999
    episodes: int = 1000
    learning_rate: float = 1e-4
    hidden: tuple = (300, 100, 100)
    grad_clip: float = 0.0  # 0 disables clipping
    warm_start: str = ""

    def with_episodes(self, episodes):
        return replace(self, episodes=int(episodes))


@dataclass(frozen=True)
class RunConfig:
    env: EnvConfig = field(default_factory=EnvConfig)
    agent: AgentConfig = field(default_factory=AgentConfig)
    scheme: str = "proposed"
    seeds: tuple = (1,)
    out_dir: str = "runs"
    eval_episodes: int = 10


def _pos(key, v):
    if v <= 0:
        raise ConfigError(f"key {key!r}: must be strictly positive, got {v}")
    return v


def _nonneg(key, v):
    if v < 0:
        raise ConfigError(f"key {key!r}: must be nonnegative, got {v}")
    return v


def _float(section, key):
    raw = section[key]
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: expected a number, got {raw!r}") from None


def _int(section, key):
    raw = section[key]
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: expected an integer, got {raw!r}") from None


# Key registry: section -> key -> default string. dump_config writes these in
# order; load_config rejects anything not listed here.
_ENV_KEYS = {
    "u": "10", "t": "10", "delta": "1.0", "v_max": "20.0", "epsilon": "0.1",
    "r_om": "0.2", "l_max": "200.0", "d_max": "45.0", "h": "80.0", "h_e": "120.0",
    "beta0": "1e-5", "beta1": "1e-4", "k_g2a_db": "12.0", "k_a2a_db": "20.0",
    "sigma2_dbm": "-100.0", "d_min": "1.0",
    "p_u": "0.1", "p_j": "0.08", "p_r": "0.012",
    "kappa": "1e-27", "mass": "9.65", "e_u": "0.025", "e_l": "24.0", "e_h": "3900.0",
    "s_min_kb": "20.0", "s_max_kb": "30.0", "f_min": "1000.0", "f_max": "1200.0",
    "layout": UNIFORM_DISC, "layout_file": "",
    "legit_x": "0.0", "legit_y": "0.0", "eve_x": "80.0", "eve_y": "80.0",
    "helper_x": "-90.0", "helper_y": "-90.0",
}
_AGENT_KEYS = {
    "gamma": "0.95", "tau": "0.005", "batch_size": "70", "buffer_capacity": "8000",
    "noise_var": "0.6", "noise_decay": "0.999", "episodes": "1000",
    "learning_rate": "1e-4", "hidden": "300, 100, 100", "grad_clip": "0.0",
    "warm_start": "",
}
_RUN_KEYS = {
    "scheme": "proposed", "seeds": "1", "out_dir": "runs", "eval_episodes": "10",
}
_SECTIONS = {"env": _ENV_KEYS, "agent": _AGENT_KEYS, "run": _RUN_KEYS}


def _merged_sections(cp, source):
    for section in cp.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"{source}: unknown section [{section}]")
        for key in cp[section]:
            if key not in _SECTIONS[section]:
                raise ConfigError(f"{source}: unknown key {key!r} in section [{section}]")
    merged = {}
    for section, defaults in _SECTIONS.items():
        merged[section] = dict(defaults)
        if cp.has_section(section):
            merged[section].update(cp[section])
    return merged


def _build(merged):
    env = merged["env"]
    agent = merged["agent"]
    run = merged["run"]

    u = _pos("u", _int(env, "u"))
    t = _pos("t", _int(env, "t"))
    delta = _pos("delta", _float(env, "delta"))
    sigma2 = 10.0 ** (_float(env, "sigma2_dbm") / 10.0) * 1e-3  # dBm -> W
    channel = ChannelParams(
        beta0=_pos("beta0", _float(env, "beta0")),
        beta1=_pos("beta1", _float(env, "beta1")),
        k_g2a=10.0 ** (_float(env, "k_g2a_db") / 10.0),
        k_a2a=10.0 ** (_float(env, "k_a2a_db") / 10.0),
        sigma2=sigma2,
        d_min=_pos("d_min", _float(env, "d_min")),
    )
    power = PowerConfig(
        p_u=_pos("p_u", _float(env, "p_u")),
        p_r=_pos("p_r", _float(env, "p_r")),
        p_j=_pos("p_j", _float(env, "p_j")),
        sigma2=sigma2,
    )
    energy = EnergyParams(
        kappa=_pos("kappa", _float(env, "kappa")),
        mass=_pos("mass", _float(env, "mass")),
        delta=delta,
        e_u=_pos("e_u", _float(env, "e_u")),
        e_l=_pos("e_l", _float(env, "e_l")),
        e_h=_pos("e_h", _float(env, "e_h")),
    )
    s_min = _pos("s_min_kb", _float(env, "s_min_kb")) * BITS_PER_KB
    s_max = _pos("s_max_kb", _float(env, "s_max_kb")) * BITS_PER_KB
    f_min = _pos("f_min", _float(env, "f_min"))
    f_max = _pos("f_max", _float(env, "f_max"))
    if s_max < s_min:
        raise ConfigError("key 's_max_kb': must be >= s_min_kb")
    if f_max < f_min:
        raise ConfigError("key 'f_max': must be >= f_min")
    layout_kind = env["layout"]
    if layout_kind not in LAYOUT_KINDS:
        raise ConfigError(f"key 'layout': expected one of {LAYOUT_KINDS}, got {layout_kind!r}")
    h = _pos("h", _float(env, "h"))
    h_e = _float(env, "h_e")
    if h_e <= h:
        raise ConfigError(f"key 'h_e': must exceed h = {h}, got {h_e}")

    env_cfg = EnvConfig(
        n_ues=u, t_slots=t, delta=delta,
        v_max=_pos("v_max", _float(env, "v_max")),
        epsilon=_nonneg("epsilon", _float(env, "epsilon")),
        r_om=_nonneg("r_om", _float(env, "r_om")),
        l_max=_pos("l_max", _float(env, "l_max")),
        d_max=_pos("d_max", _float(env, "d_max")),
        h=h, h_e=h_e,
        legit=(_float(env, "legit_x"), _float(env, "legit_y")),
        eve=(_float(env, "eve_x"), _float(env, "eve_y")),
        helper_init=(_float(env, "helper_x"), _float(env, "helper_y")),
        layout_kind=layout_kind,
        layout_file=env["layout_file"],
        channel=channel, power=power, energy=energy,
        tasks=TaskDistribution(s_min, s_max, f_min, f_max),
    )

    gamma = _float(agent, "gamma")
    if not 0.0 <= gamma <= 1.0:
        raise ConfigError(f"key 'gamma': must lie in [0, 1], got {gamma}")
    tau = _float(agent, "tau")
    if not 0.0 < tau <= 1.0:
        raise ConfigError(f"key 'tau': must lie in (0, 1], got {tau}")
    decay = _float(agent, "noise_decay")
    if not 0.0 < decay <= 1.0:
        raise ConfigError(f"key 'noise_decay': must lie in (0, 1], got {decay}")
    try:
        hidden = tuple(int(s.strip()) for s in agent["hidden"].split(",") if s.strip())
    except ValueError:
        raise ConfigError(f"key 'hidden': expected comma-separated integers, got {agent['hidden']!r}") from None
    if not hidden or any(w < 1 for w in hidden):
        raise ConfigError(f"key 'hidden': layer widths must be positive, got {agent['hidden']!r}")

    agent_cfg = AgentConfig(
        gamma=gamma, tau=tau,
        batch_size=_pos("batch_size", _int(agent, "batch_size")),
        buffer_capacity=_pos("buffer_capacity", _int(agent, "buffer_capacity")),
        noise_var=_nonneg("noise_var", _float(agent, "noise_var")),
        noise_decay=decay,
        episodes=_pos("episodes", _int(agent, "episodes")),
        learning_rate=_nonneg("learning_rate", _float(agent, "learning_rate")),
        hidden=hidden,
        grad_clip=_nonneg("grad_clip", _float(agent, "grad_clip")),
        warm_start=agent["warm_start"],
    )

    scheme = run["scheme"]
    if scheme not in SCHEMES:
        raise ConfigError(f"key 'scheme': expected one of {SCHEMES}, got {scheme!r}")
    try:
        seeds = tuple(int(s.strip()) for s in run["seeds"].split(",") if s.strip())
    except ValueError:
        raise ConfigError(f"key 'seeds': expected comma-separated integers, got {run['seeds']!r}") from None
    if not seeds:
        raise ConfigError("key 'seeds': need at least one seed")

    return RunConfig(
        env=env_cfg, agent=agent_cfg, scheme=scheme, seeds=seeds,
        out_dir=run["out_dir"],
        eval_episodes=_pos("eval_episodes", _int(run, "eval_episodes")),
    )


def loads_config(text, source="<string>"):
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return _build(_merged_sections(cp, source))


def load_config(path):
    """Parse an INI config file; missing keys fall back to the defaults."""
    with open(path, "r", encoding="utf-8") as fh:
        return loads_config(fh.read(), source=str(path))


def _r(x):
    # plain-float repr (numpy scalars would otherwise print their type)
    return repr(float(x))


def _env_strings(cfg):
    ch, pw, en, td = cfg.channel, cfg.power, cfg.energy, cfg.tasks
    return {
        "u": str(cfg.n_ues), "t": str(cfg.t_slots), "delta": _r(cfg.delta),
        "v_max": _r(cfg.v_max), "epsilon": _r(cfg.epsilon), "r_om": _r(cfg.r_om),
        "l_max": _r(cfg.l_max), "d_max": _r(cfg.d_max), "h": _r(cfg.h),
        "h_e": _r(cfg.h_e),
        "beta0": _r(ch.beta0), "beta1": _r(ch.beta1),
        "k_g2a_db": _r(10.0 * np.log10(ch.k_g2a)),
        "k_a2a_db": _r(10.0 * np.log10(ch.k_a2a)),
        "sigma2_dbm": _r(10.0 * np.log10(ch.sigma2 * 1e3)),
        "d_min": _r(ch.d_min),
        "p_u": _r(pw.p_u), "p_j": _r(pw.p_j), "p_r": _r(pw.p_r),
        "kappa": _r(en.kappa), "mass": _r(en.mass), "e_u": _r(en.e_u),
        "e_l": _r(en.e_l), "e_h": _r(en.e_h),
        "s_min_kb": _r(td.s_min_bits / BITS_PER_KB),
        "s_max_kb": _r(td.s_max_bits / BITS_PER_KB),
        "f_min": _r(td.f_min), "f_max": _r(td.f_max),
        "layout": cfg.layout_kind, "layout_file": cfg.layout_file,
        "legit_x": _r(cfg.legit[0]), "legit_y": _r(cfg.legit[1]),
        "eve_x": _r(cfg.eve[0]), "eve_y": _r(cfg.eve[1]),
        "helper_x": _r(cfg.helper_init[0]),
        "helper_y": _r(cfg.helper_init[1]),
    }


def dumps_config(run_cfg):
    cp = configparser.ConfigParser()
    cp["env"] = _env_strings(run_cfg.env)
    a = run_cfg.agent
    cp["agent"] = {
        "gamma": _r(a.gamma), "tau": _r(a.tau), "batch_size": str(a.batch_size),
        "buffer_capacity": str(a.buffer_capacity), "noise_var": _r(a.noise_var),
        "noise_decay": _r(a.noise_decay), "episodes": str(a.episodes),
        "learning_rate": _r(a.learning_rate),
        "hidden": ", ".join(str(w) for w in a.hidden),
        "grad_clip": _r(a.grad_clip), "warm_start": a.warm_start,
    }
    cp["run"] = {
        "scheme": run_cfg.scheme,
        "seeds": ", ".join(str(s) for s in run_cfg.seeds),
        "out_dir": run_cfg.out_dir,
        "eval_episodes": str(run_cfg.eval_episodes),
    }
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def dump_config(run_cfg, path):
    """Write a config such that load_config(path) reproduces run_cfg."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_config(run_cfg))

"""secoff: a seedable simulator of a hybrid relay/jamming helper-UAV secure
offloading system, with a from-scratch DDPG trainer, benchmark schemes and a
reproducible experiment harness."""

from .backend import BACKEND
from .baselines import SchemeKind, run_scheme
from .channel import ChannelParams, FadingSample, Position
from .config import AgentConfig, EnvConfig, RunConfig, load_config
from .ddpg import DdpgAgent, ReplayBuffer
from .env import Action, EnvState, SecureOffloadEnv
from .energy import EnergyParams, TaskSpec
from .harness import emit_plot_data, run_sweep, run_train
from .layout import ScenarioLayout, load_layout, make_layout, save_layout
from .rates import Mode, PowerConfig, UeLinkGains
from .runner import evaluate_policy, train

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Action",
    "AgentConfig",
    "ChannelParams",
    "DdpgAgent",
    "EnergyParams",
    "EnvConfig",
    "EnvState",
    "FadingSample",
    "Mode",
    "Position",
    "PowerConfig",
    "ReplayBuffer",
    "RunConfig",
    "ScenarioLayout",
    "SchemeKind",
    "SecureOffloadEnv",
    "TaskSpec",
    "UeLinkGains",
    "emit_plot_data",
    "evaluate_policy",
    "load_config",
    "load_layout",
    "make_layout",
    "run_scheme",
    "run_sweep",
    "run_train",
    "save_layout",
    "train",
]

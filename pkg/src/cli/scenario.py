"""This file contains the scenario file: profile, cluster, scheduler and sweep axes in one JSON document"""

# External imports
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

# Internal Imports
from src.errors import ConfigurationError
from src.scheduler.config import SchedulerConfig
from src.topology.cluster import ClusterConfig
from src.topology.loader import cluster_from_dict, locate_key
from src.workload.factories.builtin import builtin_profile
from src.workload.serialization import profile_from_dict
from src.workload.workload import WorkloadProfile


SCHEDULER_FIELDS = ("csd_batch_size", "batch_ratio", "poll_interval", "host_assign_overhead", "host_batch_size")


@dataclass(frozen=True)
class Scenario:
    """
    Everything one simulate/sweep invocation needs.

    Attributes:
        profile: Builtin profile or inline profile document
        cluster: Host and CSDs
        scheduler: Scheduler parameters
        batch_sizes: Sweep axis over B
        csd_counts: Sweep axis over N
        output: Where results go, if given
    """
    profile: WorkloadProfile
    cluster: ClusterConfig
    scheduler: SchedulerConfig
    batch_sizes: List[int] = field(default_factory=list)
    csd_counts: List[int] = field(default_factory=list)
    output: Optional[str] = None

    def require_axes(self):
        if not self.batch_sizes or not self.csd_counts:
            raise ConfigurationError("Sweep needs non-empty batch_sizes and csd_counts")


def _fail(source: str, text: str, key: str, message: str):
    line = locate_key(text, key)
    where = f"{source}:{line}" if line is not None else source
    raise ConfigurationError(f"{where}: {message}")


def _int_list(source: str, text: str, section: Dict[str, Any], key: str) -> List[int]:
    values = section.get(key, [])
    if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        _fail(source, text, key, f"sweep.{key} must be a list of integers")
    return list(values)


def scenario_from_dict(document: Dict[str, Any], text: str = "", source: str = "<scenario>") -> Scenario:
    """
    Build a scenario from its JSON document.

    Raises:
        ConfigurationError: Naming the line of the offending key
    """
    if not isinstance(document, dict):
        raise ConfigurationError(f"{source}: scenario must be a JSON object")

    if "profile" not in document:
        raise ConfigurationError(f"{source}: scenario needs a 'profile' (name or inline document)")
    profile_ref = document["profile"]
    try:
        if isinstance(profile_ref, str):
            profile = builtin_profile(profile_ref)
        else:
            profile = profile_from_dict(profile_ref)
    except ConfigurationError as err:
        _fail(source, text, "profile", str(err))

    cluster = cluster_from_dict(document.get("cluster", {}), text=text, source=source)

    section = document.get("scheduler", {})
    if not isinstance(section, dict):
        _fail(source, text, "scheduler", "scheduler must be a JSON object")
    unknown = sorted(set(section) - set(SCHEDULER_FIELDS))
    if unknown:
        _fail(source, text, unknown[0], f"unknown scheduler field '{unknown[0]}'")
    try:
        scheduler = SchedulerConfig(**{"csd_batch_size": 1, **section})
    except (ConfigurationError, TypeError) as err:
        key = next((k for k in section if k.replace("_", " ") in str(err).lower()), "scheduler")
        _fail(source, text, key, str(err))

    sweep = document.get("sweep", {})
    if not isinstance(sweep, dict):
        _fail(source, text, "sweep", "sweep must be a JSON object")

    output = document.get("output")
    if output is not None and not isinstance(output, str):
        _fail(source, text, "output", "output must be a path string")

    return Scenario(
        profile=profile,
        cluster=cluster,
        scheduler=scheduler,
        batch_sizes=_int_list(source, text, sweep, "batch_sizes"),
        csd_counts=_int_list(source, text, sweep, "csd_counts"),
        output=output,
    )


def load_scenario(path: str) -> Scenario:
    with open(path) as f:
        text = f.read()
    try:
        document = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigurationError(f"{path}:{err.lineno}: invalid JSON: {err.msg}") from None
    return scenario_from_dict(document, text=text, source=path)

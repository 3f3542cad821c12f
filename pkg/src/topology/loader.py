"""This file contains the JSON loading of cluster configurations"""

# External imports
import json
import re
from typing import Any, Dict, Optional

# Internal Imports
from src.errors import ConfigurationError
from src.topology.cluster import ClusterConfig, DataPathSpec, PowerModel, DEFAULT_CSD_CEILING
from src.topology.factories.default_config import get_default_paths, get_default_power_model
from src.topology.factories.standard import StandardClusterFactory


PATH_FIELDS = ("nvme_host_bandwidth", "tunnel_bandwidth", "isp_internal_bandwidth")
POWER_FIELDS = ("idle_base_w", "idle_per_csd_w", "active_total_no_isp_w",
                "active_per_isp_w", "num_csds_reference")


def locate_key(text: str, key: str) -> Optional[int]:
    """1-based line of the first occurrence of "key": in a JSON text"""
    match = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    if match is None:
        return None
    return text.count("\n", 0, match.start()) + 1


def _fail(source: str, text: str, key: str, message: str):
    line = locate_key(text, key)
    where = f"{source}:{line}" if line is not None else source
    raise ConfigurationError(f"{where}: {message}")


def _number(source: str, text: str, section: Dict[str, Any], key: str, prefix: str) -> float:
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(source, text, key, f"{prefix}{key} must be a number, got {value!r}")
    return value


def cluster_from_dict(document: Dict[str, Any], text: str = "", source: str = "<cluster>") -> ClusterConfig:
    """
    Build a cluster from its JSON document:
    {csd_count, paths: {...}, power: {...}, csd_ceiling}.

    Missing paths/power fields take the defaults of the measured server.

    Args:
        document: Parsed JSON object
        text: Original JSON text, used to point errors at a line
        source: Name of the document in error messages

    Raises:
        ConfigurationError: Naming the line of the offending key
    """
    if not isinstance(document, dict):
        raise ConfigurationError(f"{source}: cluster config must be a JSON object")

    unknown = sorted(set(document) - {"csd_count", "paths", "power", "csd_ceiling"})
    if unknown:
        _fail(source, text, unknown[0], f"unknown cluster field '{unknown[0]}'")

    csd_count = document.get("csd_count", 0)
    if isinstance(csd_count, bool) or not isinstance(csd_count, int):
        _fail(source, text, "csd_count", f"csd_count must be an integer, got {csd_count!r}")

    csd_ceiling = document.get("csd_ceiling", DEFAULT_CSD_CEILING)
    if isinstance(csd_ceiling, bool) or not isinstance(csd_ceiling, int) or csd_ceiling < 0:
        _fail(source, text, "csd_ceiling", f"csd_ceiling must be a non-negative integer, got {csd_ceiling!r}")
    if not 0 <= csd_count <= csd_ceiling:
        _fail(source, text, "csd_count", f"csd_count must be between 0 and {csd_ceiling}, got {csd_count}")

    paths = _build_section(source, text, document.get("paths", {}), "paths", PATH_FIELDS,
                           DataPathSpec, get_default_paths())
    power = _build_section(source, text, document.get("power", {}), "power", POWER_FIELDS,
                           PowerModel, get_default_power_model())

    factory = StandardClusterFactory(paths=paths, power=power, csd_ceiling=csd_ceiling)
    return factory.create_cluster(csd_count)


def _build_section(source, text, section, name, fields, cls, defaults):
    if not isinstance(section, dict):
        _fail(source, text, name, f"{name} must be a JSON object")

    unknown = sorted(set(section) - set(fields))
    if unknown:
        _fail(source, text, unknown[0], f"unknown {name} field '{unknown[0]}'")

    values = {field: getattr(defaults, field) for field in fields}
    for key in section:
        values[key] = _number(source, text, section, key, f"{name}.")

    try:
        return cls(**values)
    except ConfigurationError as err:
        # Point at the first key the message names, else at the section
        key = next((field for field in fields if field in str(err) and field in section), name)
        _fail(source, text, key, str(err))


def cluster_from_json(text: str, source: str = "<cluster>") -> ClusterConfig:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigurationError(f"{source}:{err.lineno}: invalid JSON: {err.msg}") from None
    return cluster_from_dict(document, text=text, source=source)


def load_cluster(path: str) -> ClusterConfig:
    with open(path) as f:
        text = f.read()
    return cluster_from_json(text, source=path)


def cluster_to_dict(cluster: ClusterConfig) -> Dict[str, Any]:
    return {
        "csd_count": cluster.csd_count,
        "csd_ceiling": cluster.csd_ceiling,
        "paths": {field: getattr(cluster.paths, field) for field in PATH_FIELDS},
        "power": {field: getattr(cluster.power, field) for field in POWER_FIELDS},
    }

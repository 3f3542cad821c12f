"""This file contains the JSON reading and writing of workload profiles"""

# External imports
import json
from typing import Any, Dict

# Internal Imports
from src.errors import ConfigurationError
from src.workload.workload import WorkloadProfile, rate_table_from_pairs


REQUIRED_FIELDS = (
    "name", "total_items", "dataset_input_bytes",
    "avg_output_bytes_per_item", "host_rates", "csd_rates",
)


def profile_to_dict(profile: WorkloadProfile) -> Dict[str, Any]:
    document = {
        "name": profile.name,
        "total_items": profile.total_items,
        "dataset_input_bytes": profile.dataset_input_bytes,
        "avg_output_bytes_per_item": profile.avg_output_bytes_per_item,
        "host_rates": profile.host_rates.to_list(),
        "csd_rates": profile.csd_rates.to_list(),
    }
    if profile.host_end_to_end_rate is not None:
        document["host_end_to_end_rate"] = profile.host_end_to_end_rate
    return document


def profile_from_dict(document: Dict[str, Any]) -> WorkloadProfile:
    """
    Build a profile from its JSON document.

    Raises:
        ConfigurationError: If a field is missing or invalid
    """
    if not isinstance(document, dict):
        raise ConfigurationError("Profile document must be a JSON object")

    missing = [field for field in REQUIRED_FIELDS if field not in document]
    if missing:
        raise ConfigurationError(f"Profile document is missing fields: {', '.join(missing)}")

    end_to_end = document.get("host_end_to_end_rate")
    return WorkloadProfile(
        name=str(document["name"]),
        total_items=int(document["total_items"]),
        dataset_input_bytes=float(document["dataset_input_bytes"]),
        avg_output_bytes_per_item=float(document["avg_output_bytes_per_item"]),
        host_rates=rate_table_from_pairs(document["host_rates"]),
        csd_rates=rate_table_from_pairs(document["csd_rates"]),
        host_end_to_end_rate=None if end_to_end is None else float(end_to_end),
    )


def to_json(profile: WorkloadProfile) -> str:
    return json.dumps(profile_to_dict(profile), indent=2)


def from_json(text: str) -> WorkloadProfile:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigurationError(f"line {err.lineno}: invalid JSON: {err.msg}") from None
    return profile_from_dict(document)


def load_profile(path: str) -> WorkloadProfile:
    with open(path) as f:
        text = f.read()
    try:
        return from_json(text)
    except ConfigurationError as err:
        raise ConfigurationError(f"{path}: {err}") from None


def save_profile(profile: WorkloadProfile, path: str):
    with open(path, "w") as f:
        f.write(to_json(profile))
        f.write("\n")

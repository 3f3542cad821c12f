"""This file contains the Factory that creates the benchmark profiles"""

# External imports
from typing import Dict, List, Optional

# Internal Imports
from src.errors import UnknownProfileError
from src.workload.workload import WorkloadProfile
from src.workload.factories.base import ProfileFactoryBase
from src.workload.factories.default_config import get_default_config
from src.workload.serialization import load_profile


class BuiltinProfileFactory(ProfileFactoryBase):
    """
    Factory for the benchmark profiles. Extra profiles can be registered
    from JSON files on top of the builtin ones.
    """
    def __init__(self, extra_profile_paths: Optional[List[str]] = None):
        self.profiles = self._load_config(extra_profile_paths or [])

    def _load_config(self, extra_profile_paths: List[str]) -> Dict[str, WorkloadProfile]:
        """
        Load the builtin profiles, then any profile files given.

        Args:
            extra_profile_paths: Paths to profile JSON documents

        Returns:
            Dict mapping profile name to WorkloadProfile
        """
        profiles = get_default_config()
        for path in extra_profile_paths:
            profile = load_profile(path)
            profiles[profile.name] = profile
        return profiles

    def available_profiles(self) -> List[str]:
        return sorted(self.profiles)

    def create_profile(self, name: str) -> WorkloadProfile:
        """
        Get a profile by name.

        Args:
            name (str): Profile identifier

        Returns:
            WorkloadProfile: The profile

        Raises:
            UnknownProfileError: If no profile has that name
        """
        if name not in self.profiles:
            raise UnknownProfileError(
                f"Unknown workload profile '{name}', expected one of: "
                f"{', '.join(self.available_profiles())}"
            )
        return self.profiles[name]


def builtin_profile(name: str) -> WorkloadProfile:
    """Builtin benchmark profile by name"""
    return BuiltinProfileFactory().create_profile(name)

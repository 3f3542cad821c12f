# External imports
from typing import List
from abc import ABC, abstractmethod


# Internal Imports
from src.workload.workload import WorkloadProfile



class ProfileFactoryBase(ABC):
    """
    Abstract Factory that creates workload profiles. This is a base class
    and should not be used directly.
    """
    @abstractmethod
    def create_profile(self, name: str) -> WorkloadProfile:
        pass

    @abstractmethod
    def available_profiles(self) -> List[str]:
        pass

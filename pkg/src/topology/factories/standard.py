"""This file contains the Factory that creates clusters"""

# External imports
from typing import Optional

# Internal Imports
from src.errors import ConfigurationError
from src.topology.cluster import ClusterConfig, DataPathSpec, NodeSpec, PowerModel, DEFAULT_CSD_CEILING
from src.topology.node_enums import NodeKind
from src.topology.factories.default_config import HOST_ID, get_default_paths, get_default_power_model


class StandardClusterFactory:
    """
    Factory for a host with N CSDs. Paths and power default to the
    measured storage server.
    """
    def __init__(
            self,
            paths: Optional[DataPathSpec] = None,
            power: Optional[PowerModel] = None,
            csd_ceiling: int = DEFAULT_CSD_CEILING
    ):
        self.paths = paths or get_default_paths()
        self.power = power or get_default_power_model()
        self.csd_ceiling = csd_ceiling

    def create_cluster(self, csd_count: int) -> ClusterConfig:
        """
        Create a cluster with ids host, csd1, ..., csdN.

        Args:
            csd_count (int): Number of CSDs with their engines enabled

        Returns:
            ClusterConfig: The validated cluster

        Raises:
            ConfigurationError: If csd_count is outside [0, csd_ceiling]
        """
        if csd_count < 0:
            raise ConfigurationError(
                f"CSD count must be between 0 and {self.csd_ceiling}, got {csd_count}"
            )

        nodes = [NodeSpec(id=HOST_ID, kind=NodeKind.HOST)] + [
            NodeSpec(id=f"csd{i + 1}", kind=NodeKind.CSD) for i in range(csd_count)
        ]
        return ClusterConfig(
            nodes=nodes,
            paths=self.paths,
            power=self.power,
            csd_ceiling=self.csd_ceiling,
        )

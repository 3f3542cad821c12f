
from src.topology.cluster import DataPathSpec, PowerModel, power_model_from_measurements


HOST_ID = "host"


def get_default_power_model() -> PowerModel:
    """
    Get the wall power model of the 1U, 36-bay storage server.

    Returns:
        PowerModel built from the four meter readings:
            - 167 W idle without drives
            - 405 W idle with 36 CSDs
            - 482 W running with in-storage engines disabled
            - 492 W running with all 36 engines enabled
    """
    return power_model_from_measurements(
        idle_base_w=167.0,
        idle_with_drives_w=405.0,
        active_no_isp_w=482.0,
        active_with_isp_w=492.0,
        num_csds_reference=36,
    )


def get_default_paths() -> DataPathSpec:
    """
    Get the default data path bandwidths.

    GB/s for NVMe and the internal flash path, MB/s for the TCP/IP tunnel.
    These are free parameters, only their ordering is grounded.
    """
    return DataPathSpec(
        nvme_host_bandwidth=3.2e9,
        tunnel_bandwidth=100e6,
        isp_internal_bandwidth=3.2e9,
    )

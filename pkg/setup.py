# External imports
import os
from setuptools import find_namespace_packages, setup


with open(os.path.join("src", "VERSION")) as f:
    version = f.read().strip()

setup(
    name="simulateCSD",
    version=version,
    packages=find_namespace_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={"src": ["VERSION"]},
    include_package_data=True,
    description="Discrete-event simulator and live harness for host + computational storage drive clusters",
    python_requires=">=3.9",
    install_requires=["numpy", "polars", "scipy"],
    entry_points={
        "console_scripts": ["simulatecsd=src.cli.main:main"],
    },
)

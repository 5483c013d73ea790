"""
Setup script for the asynchronous games workbench.
"""

from setuptools import setup, find_packages
import os

# Read the contents of README file
with open(os.path.join(os.path.abspath(os.path.dirname(__file__)), 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name="asyncgames",
    version="0.1.0",
    description="A workbench for non-alternating asynchronous games and concurrent strategies",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={
        "asyncgames": ["fixtures/*.env", "fixtures/*.str", "fixtures/*.es", "fixtures/*.ag"],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.7",
    install_requires=[
        "networkx>=2.5",
        "graphviz>=0.16",
        "ply>=3.11",
    ],
    extras_require={
        "dev": [
            "pytest>=6.0.0",
            "flake8>=3.9.0",
            "black>=21.5b0",
        ],
    },
    entry_points={
        "console_scripts": [
            "agw=asyncgames.cli:main",
        ],
    },
)

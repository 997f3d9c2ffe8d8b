from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="cuspidal_tables",
    version="0.3.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={
        "cuspidal_tables": ["data/catalog.json"],
    },
    install_requires=[
        "mcp>=1.4.1,<2",
        "sympy>=1.12",
        "numpy>=1.24",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    entry_points={
        "console_scripts": [
            "cusp-tables=cuspidal_tables.cli:main",
            "cusp-tables-mcp=cuspidal_tables.mcp_server:main",
        ],
    },
    description="Exact cuspidal character sheaf combinatorics for stably graded exceptional Lie algebras.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Operating System :: OS Independent",
    ],
    python_requires='>=3.10',
)

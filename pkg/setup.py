from setuptools import setup, find_packages

setup(
    name="EdgeFilterLab",
    version="1.0",
    description="Edge-variant graph filter design and distributed simulation",
    author="EdgeFilterLab Team",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    py_modules=["main"],
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.26.4",
        "scipy>=1.11.0",
        "pandas>=2.2.3",
        "networkx>=3.2",
        "openpyxl>=3.1.5",
        "tqdm>=4.66.5",
    ],
    extras_require={
        "test": ["pytest>=8.0"],
    },
    entry_points={
        "console_scripts": [
            "edgefilterlab=main:main",
        ],
    },
)

from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="zxlab",
    version="0.1.0",
    description="Exact ZX-diagram evaluation and the #SAT to circuit-extraction reduction",
    long_description=long_description,
    python_requires=">=3.9",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "networkx",
        "numpy",
        "pandas",
        "sympy",
    ],
    extras_require={
        "dev": [
            "pytest",
            "pytest-mock",
            "scipy",
        ],
    },
    entry_points={
        "console_scripts": ["zxlab=zxlab.__main__:main"],
    },
)

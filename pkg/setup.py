from setuptools import setup

setup(
    name="rankin-bookkeeper",
    version="0.1.0",
    description="Exact bookkeeping for the Rankin-Selberg period on GL(n) x GL(n+1): inducing data, divisors, residue graphs.",
    author="Your Name",
    packages=["src", "src.core", "src.commands", "src.utils"],
    package_dir={"src": "src"},
    py_modules=["src.cli"],
    install_requires=[
        "pandas",
        "matplotlib",
        "click",
        "sympy",
        "mpmath",
        "networkx"
    ],
    extras_require={
        "dev": ["pytest", "hypothesis"]
    },
    entry_points={
        "console_scripts": [
            "rankin=src.cli:main"
        ]
    },
    include_package_data=True,
    python_requires=">=3.8",
)

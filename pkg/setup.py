from setuptools import setup, find_packages

setup(
    name='concurrenceLib',
    version='1.0.0',
    description="Lower and upper bounds on the concurrence of 2 x K mixed states",
    long_description="Optimized-basis lower bound, variational upper bound, entanglement-of-formation bound, "
                     "PPT verdict and exactness certificate, with a command-line driver for the random-state "
                     "and parametric-family studies",
    packages=find_packages(exclude=["examples", "examples.*"]),
    install_requires=[
        "numpy",
        "scipy",
        "pandas",
    ],
    entry_points={
        "console_scripts": [
            "concurrence-bounds=concurrenceLib.code.Cli:main",
        ],
    },
    include_package_data=True,
)

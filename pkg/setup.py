#
# (c) 2026, pyCMono contributors
#
# Created: 02.10.2026
# Updated: 19.10.2026
#
# License: Apache 2.0
#
import setuptools

with open("README.md", "r", encoding='utf-8') as fh:
    long_description = fh.read()

setuptools.setup(
    name = 'pyCMono',
    version = '0.1.0',
    author = 'pyCMono contributors',
    description = 'Conditionally monotone convolutions, cumulants and limit theorems',
    long_description = long_description,
    long_description_content_type = 'text/markdown',
    packages = setuptools.find_packages(exclude=('tests',)),
    python_requires = '>=3.8',
    install_requires = [
        'sympy>=1.9',
        'numpy>=1.20',
        'scipy>=1.7',
        'mpmath>=1.2',
    ],
    extras_require = {
        'tests': ['pytest>=7', 'hypothesis>=6'],
    },
    entry_points = {
        'console_scripts': ['cmono = cmono.cli:main'],
    },
    classifiers=(
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics"
    )
)

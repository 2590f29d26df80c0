from setuptools import setup, find_packages

# Core dependencies
install_requires = [
    'numpy>=1.24.0',
    'scipy>=1.10.0',
    'pandas>=2.0.0',
    'statsmodels>=0.14.0',
    'PyYAML>=6.0',
    'python-dotenv>=1.0.0',
    'tqdm>=4.66.0',
    'pydantic>=2.0.0',
]

# Development dependencies
extras_require = {
    'dev': [
        'pytest>=7.4.0',
        'pytest-cov>=4.1.0',
        'pytest-mock>=3.11.1',
        'black>=23.7.0',
        'isort>=5.12.0',
        'flake8>=6.1.0',
        'mypy>=1.4.0',
        'types-PyYAML>=6.0.0',
        'pandas-stubs>=2.0.0',
    ],
}

# Read the README for the long description
try:
    with open('README.md', 'r', encoding='utf-8') as f:
        long_description = f.read()
except (IOError, FileNotFoundError):
    long_description = "Co-movement analysis of crude oil, gold and equity index prices"

setup(
    name="comove",
    version="0.1.0",
    description="Time, frequency and wavelet co-movement analysis of oil, gold and NSE-Nifty prices",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(include=['comove*']),
    install_requires=install_requires,
    extras_require=extras_require,
    entry_points={
        'console_scripts': [
            'comove=comove.cli.main:main',
        ],
    },
    python_requires='>=3.9',
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Topic :: Office/Business :: Financial",
        "Topic :: Scientific/Engineering :: Mathematics",
    ]
)

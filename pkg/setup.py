import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="hk-height-zeta",
    version="0.0.0",
    description="Exact height zeta functions and point counts for Hirzebruch-Kleinschmidt varieties over F_q(T)",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=['tests']),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: BSD License",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics"
    ],
    python_requires='>=3.8',
    install_requires=[
        'numpy', 'pandas', 'scipy', 'sympy', 'toml', 'tqdm', 'Click'
    ],
    extras_require={
        'test': ["pytest"]
    },
    entry_points={
        'console_scripts': ['hkzeta=src.hkzeta.cli:cli']
    }
)

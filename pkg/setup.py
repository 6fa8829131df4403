import pathlib

from setuptools import find_packages, setup

here = pathlib.Path(__file__).parent
require = (here / "requirements.txt").read_text(encoding='utf-8').split()
readme = (here / "README.md").read_text(encoding='utf-8')
about = {}
exec((here / 'driftflow' / '__version__.py').read_text(encoding='utf-8'), about)
setup(
    name=about['__title__'],
    version=about['__version__'],
    description=about['__description__'],
    long_description=readme,
    long_description_content_type="text/markdown",
    author=about['__author__'],
    license="MIT",
    platforms=['any'],
    keywords=about['__keywords__'],
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    packages=find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    install_requires=require,
    python_requires='>=3.8',
    entry_points={'console_scripts': ['driftflow = driftflow.cli:main']},
)

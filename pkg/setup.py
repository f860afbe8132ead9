from setuptools import setup
from os import path

import freegig as package


with open(path.join(path.abspath(path.dirname(__file__)), 'README.md')) as f:
    readme = f.read()

setup(
    name='freegig',
    version=package.__version__,
    packages=['freegig'],
    install_requires=[
        'numpy>=1.17',
        'scipy',
        'matplotlib',
    ],
    extras_require={
        "dev": ["nose2", "tox", "flake8"],
        "docs": ["sphinx", "sphinx-argparse"],
    },
    description='Free GIG and Marchenko-Pastur numerics with a free '
                'Matsumoto-Yor verification harness',
    long_description=readme,
    long_description_content_type='text/markdown',
    license='MIT',
    entry_points={
        'console_scripts': [
            'fgig = freegig.cli:main',
        ],
    },
    scripts=[
        'tools/fgig.py',
    ],
    keywords=[
        'free probability',
        'random matrices',
        'marchenko-pastur',
        'generalized inverse gaussian',
        'free cumulants',
    ],
    python_requires='>=3.6',
    classifiers=[
        'Programming Language :: Python',
        'Programming Language :: Python :: 3.6',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3 :: Only',
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)

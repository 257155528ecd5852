#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Purpose
-------
This script installs the hyperfine_spam package in the local files, giving the
option to call HyperfineSPAM in the command line by typing HSPAM or HyperfineSPAM.

Code documentation
------------------
"""

from setuptools import setup

with open('README.rst', encoding='utf-8') as readme_file:
    readme = readme_file.read()

with open('HISTORY.rst', encoding='utf-8') as history_file:
    history = history_file.read()

requirements = ['numpy>=1.17',
                'scipy>=1.4',
                'pandas>=1.5',
                'tqdm>=4.40']

test_requirements = ['pytest>=6', ]

setup(
    author="HyperfineSPAM developers",
    python_requires='>=3.8',
    install_requires=requirements,
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Topic :: Scientific/Engineering :: Physics',
    ],
    description="State preparation and measurement error models for "
                "trapped-ion hyperfine qubits.",
    license="GNU General Public License v3",
    long_description=readme + '\n\n' + history,
    include_package_data=True,
    package_data={'HyperfineSPAM.AtomicData': ['species_table.tsv']},
    keywords='hyperfine_spam',
    name='hyperfine_spam',
    test_suite='tests',
    tests_require=test_requirements,
    version='0.1.0',
    zip_safe=False,

    packages = ['HyperfineSPAM',
                'HyperfineSPAM.AtomicData',
                'HyperfineSPAM.RateModel',
                'HyperfineSPAM.PumpSimulation',
                'HyperfineSPAM.Detection',
                'HyperfineSPAM.Statistics',
                'HyperfineSPAM.utils'],

    entry_points={'console_scripts': ["HyperfineSPAM = HyperfineSPAM.hyperfine_spam:main",
                                      "HSPAM = HyperfineSPAM.hyperfine_spam:main"]}
)

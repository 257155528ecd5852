#!/usr/bin/env python
#
# HyperfineSPAM documentation build configuration file.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

import HyperfineSPAM  # noqa: E402

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.napoleon', 'sphinx.ext.viewcode']
napoleon_numpy_docstring = True
napoleon_google_docstring = False
autodoc_mock_imports = ['numpy', 'scipy', 'pandas', 'tqdm']

source_suffix = '.rst'
master_doc = 'index'

project = 'HyperfineSPAM'
copyright = "2026, HyperfineSPAM developers"
author = "HyperfineSPAM developers"
version = HyperfineSPAM.__version__
release = HyperfineSPAM.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'
html_theme = 'alabaster'

man_pages = [
    (master_doc, 'hyperfinespam', 'HyperfineSPAM Documentation', [author], 1)
]

# -*- coding: utf-8 -*-

import tlan

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
    "myst_parser",
]

myst_enable_extensions = ["dollarmath", "colon_fence"]
master_doc = "index"
source_suffix = {
    ".rst": "restructuredtext",
    ".md": "markdown",
}
templates_path = ["_templates"]

# General information about the project.
project = "tlan"
author = tlan.__author__
version = tlan.__version__
release = tlan.__version__

exclude_patterns = ["_build"]
html_theme = "sphinx_book_theme"
html_title = "tlan"
html_show_sourcelink = False
html_theme_options = {
    "path_to_docs": "docs",
    "use_download_button": True,
}

autodoc_type_aliases = {
    "EdgeId": "tlan.helpers.EdgeId",
    "NodeId": "tlan.helpers.NodeId",
    "QueryId": "tlan.helpers.QueryId",
}

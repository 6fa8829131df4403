# Sphinx configuration of the driftflow docs
import sys
from pathlib import Path

here = Path(__file__).parent
sys.path.insert(0, str((here / '..').resolve()))

project = 'driftflow'
copyright = '2026, driftflow developers'
author = 'driftflow developers'
version_info = dict()
exec((here / '../driftflow/__version__.py').read_text(encoding='utf-8'), version_info)
release = version_info['__version__']

extensions = [
    'sphinx_automodapi.automodapi',
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'numpydoc',
    'myst_parser',
    'sphinx_copybutton',
]
source_suffix = ['.rst', '.md']
exclude_patterns = ['_build']

# docstrings are numpydoc; members are listed by automodule
numpydoc_show_class_members = False
autodoc_member_order = 'bysource'
intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
    'pandas': ('https://pandas.pydata.org/docs', None),
}
copybutton_prompt_text = '>>> '

pygments_style = 'sphinx'
html_theme = 'furo'
html_title = f'driftflow {release}'

"""File formats, SVG rendering and the command line front end."""

from .formats import FormatError, InstanceFile, dumps, loads, read, write
from .render import RenderStyle, render_svg

__all__ = ["FormatError", "InstanceFile", "RenderStyle", "dumps", "loads", "read", "render_svg", "write"]

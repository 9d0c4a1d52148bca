"""Report generation."""

from .gnuplot_script import build_gnuplot_script

__all__ = ["build_gnuplot_script"]

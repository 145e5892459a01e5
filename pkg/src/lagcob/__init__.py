"""lagcob: a numerical workbench for Lagrangian surgery traces, cobordisms,
and their filtered Floer algebra.

Modules:
    models    explicit immersions (Whitney spheres, surgery traces,
              suspensions, double bottlenecks, bottlenecked handles)
    verify    numerical oracles (Lagrangian check, slices, critical points,
              self-intersections, areas, Hofer norms, teardrops)
    grading   det^2 phases, winding indices, the self-intersection index
    cochains  Floer generator sets and Euler-characteristic bookkeeping
    novikov   Novikov ring arithmetic, curved complexes, Maurer-Cartan
    cli       the `lagcob` command-line front end
"""

from .ambient import AmbientSpace
from .immersion import Chart, DomainPoint, Immersion
from .models import (
    DoubleBottleneckSpec, FigureEightBase, GraphFamily, HomotopyWithPrimitive,
    MultiGraphBase, make_bottlenecked_handle, make_double_bottleneck,
    make_figure_eight, make_generalized_suspension, make_local_slice,
    make_local_surgery_trace, make_null_cobordism, make_section,
    make_sheared_torus, make_suspension, make_whitney_sphere, truncate,
    whitney_area, whitney_bottleneck_family, whitney_radius,
)
from .novikov import NovikovElement, T, build_complex, mc_leading_order

__version__ = "0.1.0"

__all__ = [
    "AmbientSpace", "Chart", "DomainPoint", "Immersion",
    "DoubleBottleneckSpec", "FigureEightBase", "GraphFamily",
    "HomotopyWithPrimitive", "MultiGraphBase", "make_bottlenecked_handle",
    "make_double_bottleneck", "make_figure_eight",
    "make_generalized_suspension", "make_local_slice",
    "make_local_surgery_trace", "make_null_cobordism", "make_section",
    "make_sheared_torus", "make_suspension", "make_whitney_sphere",
    "truncate", "whitney_area", "whitney_bottleneck_family", "whitney_radius",
    "NovikovElement", "T", "build_complex", "mc_leading_order",
    "__version__",
]

"""Geometry of the Heisenberg model space: geodesics, spheres, Apollonius and
triangle surfaces, and ratio theorems on geodesic triangles."""
from .core import (ORIGIN, Point, TranslationParams, compose, inverse_translation, metric_at,
                   rotate_about, rotate_about_z, symmetric_height, tangent_norm, translate,
                   translation_to_origin)
from .errors import (InvalidInput, ModelBoundViolation, NilGeometryError, NumericalFailure,
                     OutOfModelRange)
from .geodesic import (GeodesicParams, GeodesicSolution, distance, geodesic_between,
                       geodesic_ode_oracle, geodesic_point, geodesic_point_from, point_at_ratio,
                       sample_geodesic, solve_geodesic)
from .projection import ArcDescriptor, Point2D, fibre_project, intersect_arcs, projected_arc
from .surfaces import (Mesh, TriangleSurface, apollonius_sample, ball_is_convex, meridian,
                       sphere_mesh, sphere_point, triangle_surface_mesh, triangle_surface_point)
from .triangle import (CevaConfig, SurfaceLine, ceva_config, ceva_product, ceva_product_projected,
                       menelaus_point, menelaus_product, simple_ratio, surface_line)

__version__ = "0.1.0"

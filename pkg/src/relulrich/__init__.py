"""Exact certificates for relatively Ulrich bundles on cyclic and abelian covers."""

from .coverarith import (AbelianCoverSpec, compose_abelian_plan, feasibility_report,
                         pushforward_summands, riemann_hurwitz)
from .ellmodel import WeierstrassCurve, multmap_image_ell
from .exactfield import CycloScalar
from .gradedgeom import (BaseVariety, NotInImage, ProductDecomposition, decompose_in_image,
                         is_surjective, multmap_image)
from .matfac import (MatrixRoot, UlrichCertificate, clifford_root, cyclic_root,
                     determinant_check, double_cover_mf, ulrich_certificate, verify_root)
from .polyring import MultiPoly, parse_poly

__version__ = "0.1.0"

__all__ = [
    "AbelianCoverSpec", "BaseVariety", "CycloScalar", "MatrixRoot", "MultiPoly", "NotInImage",
    "ProductDecomposition", "UlrichCertificate", "WeierstrassCurve", "clifford_root",
    "compose_abelian_plan", "cyclic_root", "decompose_in_image", "determinant_check",
    "double_cover_mf", "feasibility_report", "is_surjective", "multmap_image",
    "multmap_image_ell", "parse_poly", "pushforward_summands", "riemann_hurwitz",
    "ulrich_certificate", "verify_root",
]

#pragma once

#include "ocuflow/mesh.hpp"

namespace ocuflow {

/// Parametric description of the 2d eye cross-section (metres).
///
/// The domain is a tensor block: x runs from the posterior pole (x = 0)
/// through shell | vitreous | lens | posterior-chamber gap | iris plate |
/// anterior chamber | cornea; y is the vertical body axis, symmetric about 0.
/// The corneal inner wall bulges anteriorly by cornea_bulge * (1 - (y/y_r)^2)
/// inside the chamber rim |y| <= chamber_half_height, so the front outline is
/// a parabolic dome continued by a flat lid-covered face.
struct EyeGeometry {
  double mesh_size = 5.0e-4;          ///< target cell size in the solid regions
  double height = 2.4e-2;             ///< total vertical extent
  double shell_thickness = 1.5e-3;    ///< outer shell / sclera layer
  double vitreous_width = 1.2e-2;     ///< axial extent of the vitreous body
  double lens_width = 4.0e-3;         ///< axial extent of the lens block
  double pc_width = 2.0e-4;           ///< fluid gap between lens/vitreous and iris
  double iris_width = 2.5e-4;         ///< iris plate thickness
  double ac_width = 3.0e-4;           ///< chamber depth at the rim (iris to cornea)
  double cornea_bulge = 6.5e-4;       ///< extra chamber depth at the axis
  double cornea_thickness = 6.0e-4;   ///< corneal shell thickness
  double pupil_half_height = 1.2e-3;  ///< half-height of the pupil opening
  double lens_half_height = 2.4e-3;   ///< half-height of the lens block
  double chamber_half_height = 3.09e-3; ///< iris root / chamber rim height
  double ambient_strip = 3.0e-3;      ///< exposed front face beyond the rim

  /// Throws std::invalid_argument when dimensions are missing, non-positive
  /// or ordered inconsistently (e.g. pupil taller than the lens).
  void validate() const;

  double ah_axial_extent() const;    ///< pc + iris + ac + bulge (widest fluid span)
  double ah_vertical_extent() const; ///< 2 * chamber_half_height
  double ah_area() const;            ///< exact area of the fluid cross-section
  double axial_length() const;       ///< posterior pole to corneal apex (outer)
};

/// Builds the triangulated cross-section. The result carries all six regions
/// and the full set of boundary tags, and passes mesh_validate by
/// construction. Fluid cells are graded to roughly half the solid cell size
/// with a minimum number of layers across each thin gap.
Mesh build_eye_mesh(const EyeGeometry& geo);

} // namespace ocuflow

#include "ocuflow/eye_geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocuflow {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok)
    throw std::invalid_argument("eye geometry: " + what);
}

} // namespace

void EyeGeometry::validate() const {
  require(mesh_size > 0.0, "mesh_size must be positive");
  require(height > 0.0, "height must be positive");
  require(shell_thickness > 0.0, "shell_thickness must be positive");
  require(vitreous_width > 0.0, "vitreous_width must be positive");
  require(lens_width > 0.0, "lens_width must be positive");
  require(pc_width > 0.0, "pc_width must be positive");
  require(iris_width > 0.0, "iris_width must be positive");
  require(ac_width > 0.0, "ac_width must be positive");
  require(cornea_bulge >= 0.0, "cornea_bulge must be non-negative");
  require(cornea_thickness > 0.0, "cornea_thickness must be positive");
  require(ambient_strip >= 0.0, "ambient_strip must be non-negative");
  require(pupil_half_height > 0.0, "pupil_half_height must be positive");
  require(pupil_half_height < lens_half_height,
          "pupil_half_height must be smaller than lens_half_height");
  require(lens_half_height < chamber_half_height,
          "lens_half_height must be smaller than chamber_half_height");
  require(chamber_half_height < 0.5 * height - shell_thickness,
          "chamber rim must stay below the outer shell band");
  require(chamber_half_height + ambient_strip <= 0.5 * height,
          "ambient strip extends past the top of the domain");
}

double EyeGeometry::ah_axial_extent() const {
  return pc_width + iris_width + ac_width + cornea_bulge;
}

double EyeGeometry::ah_vertical_extent() const { return 2.0 * chamber_half_height; }

double EyeGeometry::ah_area() const {
  // Posterior gap and rim-depth chamber are rectangles over the full rim
  // height; the pupil channel spans the iris plate; the parabolic bulge adds
  // integral of b(1 - (y/y_r)^2) = (4/3) b y_r.
  const double yr = chamber_half_height;
  return 2.0 * yr * (pc_width + ac_width) + 2.0 * pupil_half_height * iris_width +
         (4.0 / 3.0) * cornea_bulge * yr;
}

double EyeGeometry::axial_length() const {
  return shell_thickness + vitreous_width + lens_width + pc_width + iris_width + ac_width +
         cornea_bulge + cornea_thickness;
}

namespace {

enum Band { BandPupil, BandLens, BandWrap, BandFiller, BandRim };
enum Station {
  StShell,
  StVitreous,
  StLens,
  StPosterior,
  StIris,
  StChamber,
  StCornea,
  StationCount
};

int classify(int station, int band) {
  const bool inner = band == BandPupil || band == BandLens || band == BandWrap;
  switch (station) {
  case StShell: return region::OuterShell;
  case StVitreous: return inner ? region::Vitreous : region::OuterShell;
  case StLens:
    if (band == BandPupil || band == BandLens)
      return region::Lens;
    return band == BandWrap ? region::Vitreous : region::OuterShell;
  case StPosterior: return inner ? region::AqueousHumor : region::OuterShell;
  case StIris:
    if (band == BandPupil)
      return region::AqueousHumor;
    return (band == BandLens || band == BandWrap) ? region::Iris : region::OuterShell;
  case StChamber: return inner ? region::AqueousHumor : region::OuterShell;
  case StCornea: return inner ? region::Cornea : region::OuterShell;
  default: throw std::logic_error("bad station");
  }
}

int wall_tag_for(int solid_region) {
  switch (solid_region) {
  case region::Cornea: return boundary::GammaC;
  case region::Iris: return boundary::GammaI;
  case region::Lens: return boundary::GammaL;
  case region::Vitreous: return boundary::GammaVH;
  case region::OuterShell: return boundary::GammaSc;
  default: throw std::logic_error("fluid-fluid interface cannot be tagged");
  }
}

/// Appends n graded points partitioning (from, to]; n chosen so the step is
/// at most `target`, but never fewer than `min_n` intervals.
void subdivide(std::vector<double>& out, double from, double to, double target, int min_n) {
  const double len = to - from;
  int n = static_cast<int>(std::ceil(len / target - 1.0e-9));
  n = std::max(n, min_n);
  for (int i = 1; i <= n; ++i)
    out.push_back(from + len * static_cast<double>(i) / static_cast<double>(n));
}

} // namespace

Mesh build_eye_mesh(const EyeGeometry& geo) {
  geo.validate();
  const double h = geo.mesh_size;
  const double hf = 0.5 * h; // fluid-region target size
  const double half_height = 0.5 * geo.height;
  const double yr = geo.chamber_half_height;

  // ---- vertical levels (built for y >= 0, then mirrored) ----
  std::vector<double> upper{0.0};
  subdivide(upper, 0.0, geo.pupil_half_height, hf, 2);
  subdivide(upper, geo.pupil_half_height, geo.lens_half_height, hf, 2);
  subdivide(upper, geo.lens_half_height, yr, hf, 2);
  subdivide(upper, yr, half_height - geo.shell_thickness, h, 2);
  subdivide(upper, half_height - geo.shell_thickness, half_height, h, 1);
  std::vector<double> levels;
  for (size_t i = upper.size(); i-- > 1;)
    levels.push_back(-upper[i]);
  levels.insert(levels.end(), upper.begin(), upper.end());
  const int ny = static_cast<int>(levels.size()) - 1;

  // ---- axial stations ----
  // Fixed boundaries through the iris; the chamber and cornea columns follow
  // the parabolic wall x = X5 + ac + bulge * (1 - (y/yr)^2).
  const double x1 = geo.shell_thickness;
  const double x2 = x1 + geo.vitreous_width;
  const double x3 = x2 + geo.lens_width;
  const double x4 = x3 + geo.pc_width;
  const double x5 = x4 + geo.iris_width;
  const double fixed_bounds[6] = {0.0, x1, x2, x3, x4, x5};

  const auto intervals = [&](double width, double target, int min_n) {
    return std::max(min_n, static_cast<int>(std::ceil(width / target - 1.0e-9)));
  };
  int counts[StationCount];
  counts[StShell] = intervals(geo.shell_thickness, h, 2);
  counts[StVitreous] = intervals(geo.vitreous_width, h, 3);
  counts[StLens] = intervals(geo.lens_width, h, 2);
  counts[StPosterior] = intervals(geo.pc_width, hf, 3);
  counts[StIris] = intervals(geo.iris_width, hf, 3);
  counts[StChamber] = intervals(geo.ac_width + geo.cornea_bulge, hf, 4);
  counts[StCornea] = intervals(geo.cornea_thickness, hf, 2);

  int nx = 0;
  for (int s = 0; s < StationCount; ++s)
    nx += counts[s];

  // Column -> (station, fraction within station).
  std::vector<int> col_station(static_cast<size_t>(nx) + 1);
  std::vector<double> col_frac(static_cast<size_t>(nx) + 1);
  {
    int col = 0;
    for (int s = 0; s < StationCount; ++s)
      for (int k = (s == 0 ? 0 : 1); k <= counts[s]; ++k, ++col) {
        col_station[static_cast<size_t>(col)] = s;
        col_frac[static_cast<size_t>(col)] =
            static_cast<double>(k) / static_cast<double>(counts[s]);
      }
    // Station boundaries belong to the station on their left except x = 0.
    col_station[0] = StShell;
    col_frac[0] = 0.0;
  }

  const auto bulge = [&](double y) {
    const double t = y / yr;
    return geo.cornea_bulge * std::max(0.0, 1.0 - t * t);
  };
  const auto column_x = [&](int col, double y) {
    const int s = col_station[static_cast<size_t>(col)];
    const double f = col_frac[static_cast<size_t>(col)];
    if (s < StChamber)
      return fixed_bounds[s] + f * (fixed_bounds[s + 1] - fixed_bounds[s]);
    if (s == StChamber)
      return x5 + f * (geo.ac_width + bulge(y));
    return x5 + geo.ac_width + bulge(y) + f * geo.cornea_thickness;
  };

  Mesh mesh;
  mesh.dim = 2;
  mesh.coords.reserve(static_cast<size_t>(nx + 1) * (ny + 1) * 2);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      mesh.coords.push_back(column_x(i, levels[static_cast<size_t>(j)]));
      mesh.coords.push_back(levels[static_cast<size_t>(j)]);
    }
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  // ---- cells with region classification per quad ----
  const auto band_of = [&](double abs_y) {
    if (abs_y < geo.pupil_half_height)
      return BandPupil;
    if (abs_y < geo.lens_half_height)
      return BandLens;
    if (abs_y < yr)
      return BandWrap;
    if (abs_y < half_height - geo.shell_thickness)
      return BandFiller;
    return BandRim;
  };
  std::vector<int> quad_region(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    const double ym = 0.5 * (levels[static_cast<size_t>(j)] + levels[static_cast<size_t>(j) + 1]);
    const int band = band_of(std::abs(ym));
    for (int i = 0; i < nx; ++i) {
      // Columns i..i+1 lie in the station of the right column unless that is
      // a station's first column; station of the quad = station owning the
      // interval, which is the right column's station.
      const int s = col_station[static_cast<size_t>(i) + 1];
      quad_region[static_cast<size_t>(j) * nx + i] = classify(s, band);
    }
  }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int r = quad_region[static_cast<size_t>(j) * nx + i];
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      mesh.cells.insert(mesh.cells.end(), {v00, v10, v11});
      mesh.cells.insert(mesh.cells.end(), {v00, v11, v01});
      mesh.cell_region.push_back(r);
      mesh.cell_region.push_back(r);
    }

  // ---- boundary facets ----
  const auto add_facet = [&](int a, int b, int tag) {
    mesh.facets.push_back(a);
    mesh.facets.push_back(b);
    mesh.facet_tag.push_back(tag);
  };
  const double amb_limit = yr + geo.ambient_strip + 1.0e-12;
  for (int j = 0; j < ny; ++j) {
    add_facet(vid(0, j), vid(0, j + 1), boundary::GammaBody);
    const double ylo = std::abs(levels[static_cast<size_t>(j)]);
    const double yhi = std::abs(levels[static_cast<size_t>(j) + 1]);
    const bool exposed = std::max(ylo, yhi) <= amb_limit;
    add_facet(vid(nx, j), vid(nx, j + 1),
              exposed ? boundary::GammaAmb : boundary::GammaBody);
  }
  for (int i = 0; i < nx; ++i) {
    add_facet(vid(i, 0), vid(i + 1, 0), boundary::GammaBody);
    add_facet(vid(i, ny), vid(i + 1, ny), boundary::GammaBody);
  }
  // Fluid-solid interfaces: tag by the solid side.
  const auto maybe_tag = [&](int ra, int rb, int va, int vb) {
    if (ra == rb)
      return;
    const bool a_fluid = ra == region::AqueousHumor;
    const bool b_fluid = rb == region::AqueousHumor;
    if (a_fluid == b_fluid)
      return; // solid-solid interface, untagged
    add_facet(va, vb, wall_tag_for(a_fluid ? rb : ra));
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      maybe_tag(quad_region[static_cast<size_t>(j) * nx + i - 1],
                quad_region[static_cast<size_t>(j) * nx + i], vid(i, j), vid(i, j + 1));
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      maybe_tag(quad_region[static_cast<size_t>(j - 1) * nx + i],
                quad_region[static_cast<size_t>(j) * nx + i], vid(i, j), vid(i + 1, j));

  return mesh;
}

} // namespace ocuflow

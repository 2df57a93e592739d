#pragma once

#include <array>
#include <string>
#include <vector>

namespace ocuflow {

/// Body orientation relative to gravity. The mesh is posture-independent;
/// only the gravity vector rotates.
enum class Posture { Standing, Prone, Supine };

Posture posture_from_name(const std::string& name);
std::string posture_name(Posture p);

/// Gravity vector in mesh coordinates (x = anterior axis pointing out of the
/// cornea, y = vertical body axis):
///   standing: gravity along -y (upright head, horizontal gaze)
///   prone:    face down, gravity along -x (into the eye, cornea lowest)
///   supine:   face up, gravity along +x (cornea highest)
std::array<double, 2> posture_gravity(Posture p, double g);

/// Conversion factor between pascals and millimetres of mercury.
inline constexpr double kPascalPerMmHg = 133.322;

/// Material and boundary-exchange constants (SI units throughout).
struct PhysicalParams {
  // Aqueous humor (water-like fluid)
  double mu = 0.001;      ///< dynamic viscosity [Pa s]
  double rho = 1000.0;    ///< density [kg/m^3]
  double cp = 4178.0;     ///< specific heat [J/(kg K)]
  double beta = 3.0e-4;   ///< volumetric expansion coefficient [1/K]
  double k_ah = 0.576;    ///< fluid thermal conductivity [W/(m K)]
  double g = 9.81;        ///< gravitational acceleration [m/s^2]
  double t_ref = 298.0;   ///< buoyancy reference temperature [K]

  // Solid-region conductivities [W/(m K)]
  double k_cornea = 0.0;
  double k_iris = 0.0;
  double k_lens = 0.0;
  double k_vitreous = 0.0;
  double k_outershell = 0.0;

  // Heat exchange with the body (inner boundary)
  double h_bl = 65.0;     ///< blood convection coefficient [W/(m^2 K)]
  double t_bl = 310.0;    ///< blood temperature [K]

  // Heat exchange with the surroundings (corneal surface)
  double h_amb = 10.0;    ///< ambient convection coefficient [W/(m^2 K)]
  double h_r = 6.0;       ///< linearized radiation coefficient [W/(m^2 K)]
  double evap = 40.0;     ///< tear evaporation heat loss [W/m^2]
  double t_amb = 307.0;   ///< ambient reference temperature [K]

  /// Perfusion exchange on the iris walls.  The iris carries the eye's blood
  /// supply, so its fluid-facing surfaces exchange heat with blood at t_bl;
  /// 0 disables the term.
  double h_uveal = 0.0;   ///< uveal perfusion coefficient [W/(m^2 K)]

  /// Conductivity table indexed by region id (throws if a solid value is
  /// missing, i.e. still at its zero placeholder).
  std::vector<double> conductivity_by_region() const;
};

} // namespace ocuflow

#include "ocuflow/physics.hpp"

#include <stdexcept>

#include "ocuflow/mesh.hpp"

namespace ocuflow {

Posture posture_from_name(const std::string& name) {
  if (name == "standing")
    return Posture::Standing;
  if (name == "prone")
    return Posture::Prone;
  if (name == "supine")
    return Posture::Supine;
  throw std::invalid_argument("unknown posture '" + name +
                              "' (expected standing, prone or supine)");
}

std::string posture_name(Posture p) {
  switch (p) {
  case Posture::Standing: return "standing";
  case Posture::Prone: return "prone";
  case Posture::Supine: return "supine";
  }
  return "?";
}

std::array<double, 2> posture_gravity(Posture p, double g) {
  switch (p) {
  case Posture::Standing: return {0.0, -g};
  case Posture::Prone: return {-g, 0.0};
  case Posture::Supine: return {g, 0.0};
  }
  return {0.0, 0.0};
}

std::vector<double> PhysicalParams::conductivity_by_region() const {
  std::vector<double> k(static_cast<size_t>(region::count), 0.0);
  k[static_cast<size_t>(region::AqueousHumor)] = k_ah;
  k[static_cast<size_t>(region::Cornea)] = k_cornea;
  k[static_cast<size_t>(region::Iris)] = k_iris;
  k[static_cast<size_t>(region::Lens)] = k_lens;
  k[static_cast<size_t>(region::Vitreous)] = k_vitreous;
  k[static_cast<size_t>(region::OuterShell)] = k_outershell;
  for (int r = 0; r < region::count; ++r)
    if (k[static_cast<size_t>(r)] <= 0.0)
      throw std::runtime_error("missing thermal conductivity for region '" + region_name(r) +
                               "'");
  return k;
}

} // namespace ocuflow

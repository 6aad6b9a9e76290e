#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "vlcee/common.hpp"

namespace vlcee {

// Optical front-end constants of the LED / photodetector pair.
struct OpticalParams {
  double pd_area = 1e-4;               // photodetector area, m^2
  double filter_gain = 1.0;            // optical filter gain G
  double refractive_index = 1.5;       // concentrator refractive index
  double semi_angle = deg2rad(60.0);   // LED half-intensity semi-angle, rad, in (0, pi/2)
  double fov = deg2rad(75.0);          // photodetector field of view, rad, in (0, pi/2]
};

// Room geometry in meters. LEDs face straight down, photodetectors face
// straight up; every LED must sit strictly above every user.
struct Scene {
  Eigen::Vector3d room{5.0, 5.0, 3.0};
  std::vector<Eigen::Vector3d> leds;
  std::vector<Eigen::Vector3d> users;

  int num_leds() const { return static_cast<int>(leds.size()); }
  int num_users() const { return static_cast<int>(users.size()); }
};

// LoS gain matrix, users x leds. Entries are zero exactly when the incidence
// angle falls outside the photodetector field of view.
using ChannelMatrix = Eigen::MatrixXd;

std::vector<std::string> validate_optical(const OpticalParams& params);
std::vector<std::string> validate_scene(const Scene& scene);

// Lambert index m = -ln 2 / ln cos(semi_angle). Rejects semi-angles outside
// (0, pi/2) so the result is always finite and positive.
double lambert_index(double semi_angle);

// Concentrator gain kappa^2 / sin^2(fov) inside the field of view, zero
// outside. The boundary belongs to the nonzero branch.
double concentrator_gain(double incidence, const OpticalParams& params);

// LoS Lambertian gain between one LED and one user position.
double channel_gain(const Eigen::Vector3d& led, const Eigen::Vector3d& user,
                    const OpticalParams& params);

ChannelMatrix build_channel_matrix(const Scene& scene, const OpticalParams& params);

// Aggregate gain (sum over LEDs) sampled on the floor plane z = 0.
// gain(iy, ix) belongs to the point (xs[ix], ys[iy]).
struct FloorMap {
  Eigen::VectorXd xs;
  Eigen::VectorXd ys;
  Eigen::MatrixXd gain;
};

FloorMap floor_channel_map(const Scene& scene, const OpticalParams& params,
                           double resolution);

// CSV export: header `x,y,gain`, one row per grid cell, row-major (y outer,
// x inner), 9 significant digits.
void write_channel_map_csv(const FloorMap& map, std::ostream& os);

}  // namespace vlcee

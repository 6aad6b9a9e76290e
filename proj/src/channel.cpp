#include "vlcee/channel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace vlcee {

std::vector<std::string> validate_optical(const OpticalParams& p) {
  std::vector<std::string> v;
  if (!(p.pd_area > 0)) v.push_back("pd_area must be > 0");
  if (!(p.filter_gain > 0)) v.push_back("filter_gain must be > 0");
  if (!(p.refractive_index >= 1.0)) v.push_back("refractive_index must be >= 1");
  if (!(p.semi_angle > 0 && p.semi_angle < kPi / 2))
    v.push_back("semi_angle must lie strictly inside (0, pi/2)");
  if (!(p.fov > 0 && p.fov <= kPi / 2)) v.push_back("fov must lie in (0, pi/2]");
  return v;
}

std::vector<std::string> validate_scene(const Scene& s) {
  std::vector<std::string> v;
  if (s.leds.empty()) v.push_back("scene needs at least one LED");
  if (s.users.empty()) v.push_back("scene needs at least one user");
  auto inside = [&](const Eigen::Vector3d& p) {
    return p.x() >= 0 && p.x() <= s.room.x() && p.y() >= 0 && p.y() <= s.room.y() &&
           p.z() >= 0 && p.z() <= s.room.z();
  };
  for (int n = 0; n < s.num_leds(); ++n)
    if (!inside(s.leds[n])) v.push_back("led " + std::to_string(n) + " outside room extents");
  for (int k = 0; k < s.num_users(); ++k)
    if (!inside(s.users[k])) v.push_back("user " + std::to_string(k) + " outside room extents");
  for (int n = 0; n < s.num_leds(); ++n)
    for (int k = 0; k < s.num_users(); ++k)
      if (!(s.leds[n].z() > s.users[k].z()))
        v.push_back("led " + std::to_string(n) + " not strictly above user " + std::to_string(k));
  return v;
}

double lambert_index(double semi_angle) {
  if (!(semi_angle > 0 && semi_angle < kPi / 2))
    throw std::domain_error("lambert_index: semi_angle must lie in (0, pi/2)");
  return -std::log(2.0) / std::log(std::cos(semi_angle));
}

double concentrator_gain(double incidence, const OpticalParams& params) {
  if (!(incidence >= 0 && incidence <= kPi / 2))
    throw std::domain_error("concentrator_gain: incidence must lie in [0, pi/2]");
  if (incidence > params.fov) return 0.0;
  const double s = std::sin(params.fov);
  return params.refractive_index * params.refractive_index / (s * s);
}

double channel_gain(const Eigen::Vector3d& led, const Eigen::Vector3d& user,
                    const OpticalParams& params) {
  const double dz = led.z() - user.z();
  const double d = (led - user).norm();
  if (!(dz > 0) || !(d > 0))
    throw std::domain_error("channel_gain: LED must sit strictly above the user");

  // With the PD facing up and the LED facing down, irradiance and incidence
  // angles coincide and cos = dz / d.
  const double c = std::clamp(dz / d, 0.0, 1.0);
  const double incidence = std::acos(c);
  const double g = concentrator_gain(incidence, params);
  if (g == 0.0) return 0.0;

  const double m = lambert_index(params.semi_angle);
  return (m + 1.0) * params.pd_area * std::pow(c, m) * c * params.filter_gain * g /
         (2.0 * kPi * d * d);
}

ChannelMatrix build_channel_matrix(const Scene& scene, const OpticalParams& params) {
  ChannelMatrix h(scene.num_users(), scene.num_leds());
  for (int k = 0; k < scene.num_users(); ++k)
    for (int n = 0; n < scene.num_leds(); ++n)
      h(k, n) = channel_gain(scene.leds[n], scene.users[k], params);
  return h;
}

FloorMap floor_channel_map(const Scene& scene, const OpticalParams& params,
                           double resolution) {
  if (!(resolution > 0)) throw std::domain_error("floor_channel_map: resolution must be > 0");
  const auto axis = [&](double extent) {
    const int n = static_cast<int>(std::floor(extent / resolution + 1e-9)) + 1;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = i * resolution;
    return v;
  };
  FloorMap map;
  map.xs = axis(scene.room.x());
  map.ys = axis(scene.room.y());
  map.gain.resize(map.ys.size(), map.xs.size());
  for (int iy = 0; iy < map.ys.size(); ++iy) {
    for (int ix = 0; ix < map.xs.size(); ++ix) {
      const Eigen::Vector3d p(map.xs[ix], map.ys[iy], 0.0);
      double sum = 0.0;
      for (const auto& led : scene.leds) sum += channel_gain(led, p, params);
      map.gain(iy, ix) = sum;
    }
  }
  return map;
}

void write_channel_map_csv(const FloorMap& map, std::ostream& os) {
  os << "x,y,gain\n";
  char buf[96];
  for (int iy = 0; iy < map.ys.size(); ++iy) {
    for (int ix = 0; ix < map.xs.size(); ++ix) {
      std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", map.xs[ix], map.ys[iy],
                    map.gain(iy, ix));
      os << buf;
    }
  }
}

}  // namespace vlcee

#include "rideshare/generator.hpp"

#include <cmath>
#include <stdexcept>

#include "rideshare/rng.hpp"

namespace rideshare {

GeneratedInstance generate_instance(const GeneratorConfig& config) {
  if (config.n < 1) throw std::invalid_argument("generate_instance: n must be >= 1");
  if (config.capacity < 1) throw std::invalid_argument("generate_instance: capacity must be >= 1");
  Rng rng(config.seed);

  GeneratedInstance out;
  EuclideanLayout& layout = out.layout;
  layout.speed_m_per_s = config.speed_m_per_s;
  layout.cost_per_m = config.cost_per_m;
  const int points = 2 * config.n + 2;
  layout.points.reserve(points);
  for (int k = 0; k < points; ++k) {
    const double x = rng.uniform(0.0, config.rect_width_m);
    const double y = rng.uniform(0.0, config.rect_height_m);
    layout.points.push_back({x, y});
  }

  Instance& inst = out.instance;
  inst.n = config.n;
  inst.depart_time = config.depart_time;
  inst.capacity = config.capacity;
  inst.cost_mode = config.cost_mode;
  inst.euclidean_geometry = true;
  expand_geometry(layout, inst.travel_time, inst.travel_cost);

  const Duration driver_direct = inst.travel_time[inst.origin_node()][inst.destination_node()];
  inst.max_arrival = config.depart_time +
                     static_cast<Duration>(config.arrival_factor) *
                         (driver_direct + config.arrival_slack_s);

  const double sigma_money =
      config.sigma * 1000.0 * static_cast<double>(config.cost_per_m);  // one km's cost
  for (int i = 1; i <= config.n; ++i) {
    PassengerRequest p;
    p.id = i;
    p.max_pickup_time = config.depart_time + config.pickup_window_s;
    p.max_travel_time = static_cast<Duration>(config.travel_factor) *
                        inst.travel_time[inst.pickup_node(i)][inst.dropoff_node(i)];
    inst.passengers.push_back(p);
  }
  for (int i = 1; i <= config.n; ++i) {
    const Money direct = direct_cost(inst, i);
    const Money floor = round_trip_cost(inst, i);  // affordable under every policy
    const double draw = std::fabs(sigma_money * rng.normal());
    const Money perturbed = direct + static_cast<Money>(std::llround(draw));
    inst.passengers[i - 1].bid = std::max(floor, perturbed);
  }
  return out;
}

}  // namespace rideshare

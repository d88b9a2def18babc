#include "rideshare/model.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rideshare {

namespace {

std::string cell(const char* name, int i, int j) {
  return std::string(name) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

template <class T>
void check_matrix(const std::vector<std::vector<T>>& m, int size, const char* name,
                  std::vector<Violation>& out) {
  if (static_cast<int>(m.size()) != size) {
    out.push_back({name, "wrong-row-count"});
    return;
  }
  for (int i = 0; i < size; ++i) {
    if (static_cast<int>(m[i].size()) != size) {
      out.push_back({std::string(name) + "[" + std::to_string(i) + "]", "wrong-column-count"});
      return;
    }
  }
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      if (i == j && m[i][j] != 0) out.push_back({cell(name, i, j), "diagonal-nonzero"});
      if (m[i][j] < 0) out.push_back({cell(name, i, j), "negative-entry"});
      if (m[i][j] > kMaxTimeValue) out.push_back({cell(name, i, j), "entry-above-bound"});
    }
  }
}

template <class T>
void check_triangle(const std::vector<std::vector<T>>& m, const char* name,
                    std::vector<Violation>& out) {
  const int size = static_cast<int>(m.size());
  for (int i = 0; i < size; ++i) {
    for (int k = 0; k < size; ++k) {
      for (int j = 0; j < size; ++j) {
        if (m[i][j] > m[i][k] + m[k][j]) {
          out.push_back({cell(name, i, j), "triangle-inequality"});
          return;  // one witness is enough
        }
      }
    }
  }
}

}  // namespace

const char* cost_mode_name(CostMode mode) {
  switch (mode) {
    case CostMode::ridesharing_detour: return "ridesharing_detour";
    case CostMode::ridesourcing_total: return "ridesourcing_total";
  }
  throw std::logic_error("unknown cost mode");
}

CostMode cost_mode_from_name(const std::string& name) {
  if (name == "ridesharing_detour") return CostMode::ridesharing_detour;
  if (name == "ridesourcing_total") return CostMode::ridesourcing_total;
  throw std::invalid_argument("unknown cost_mode: " + name);
}

const PassengerRequest& Instance::passenger(int id) const {
  if (id < 1 || id > n) throw std::out_of_range("passenger id out of range");
  return passengers[static_cast<std::size_t>(id) - 1];
}

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  if (inst.n < 0) out.push_back({"n", "negative"});
  if (inst.capacity < 1) out.push_back({"capacity", "below-one"});
  const int size = inst.node_count();
  check_matrix(inst.travel_time, size, "travel_time", out);
  check_matrix(inst.travel_cost, size, "travel_cost", out);
  if (static_cast<int>(inst.passengers.size()) != inst.n) {
    out.push_back({"passengers", "wrong-count"});
    return out;
  }
  const bool matrices_ok =
      out.end() == std::find_if(out.begin(), out.end(), [](const Violation& v) {
        return v.rule == "wrong-row-count" || v.rule == "wrong-column-count";
      });
  for (int i = 1; i <= inst.n; ++i) {
    const PassengerRequest& p = inst.passengers[i - 1];
    const std::string tag = "passengers[" + std::to_string(i - 1) + "]";
    if (p.id != i) out.push_back({tag + ".id", "id-not-positional"});
    if (p.bid < 0) out.push_back({tag + ".bid", "negative-bid"});
    if (p.max_pickup_time < inst.depart_time) {
      out.push_back({tag + ".max_pickup_time", "pickup-before-depart"});
    }
    if (p.max_pickup_time > kMaxTimeValue || p.max_travel_time > kMaxTimeValue) {
      out.push_back({tag, "entry-above-bound"});
    }
    if (matrices_ok) {
      const Duration direct = inst.travel_time[inst.pickup_node(i)][inst.dropoff_node(i)];
      if (p.max_travel_time < direct) {
        out.push_back({tag + ".max_travel_time", "infeasible-travel-window"});
      }
    }
  }
  if (inst.max_arrival > kMaxTimeValue || inst.depart_time > kMaxTimeValue ||
      inst.depart_time < 0) {
    out.push_back({"depart_time/max_arrival", "entry-above-bound"});
  }
  if (inst.euclidean_geometry && matrices_ok) {
    check_triangle(inst.travel_time, "travel_time", out);
    check_triangle(inst.travel_cost, "travel_cost", out);
  }
  return out;
}

Money direct_cost(const Instance& inst, int passenger_id) {
  if (passenger_id < 1 || passenger_id > inst.n) {
    throw std::out_of_range("direct_cost: passenger id out of range");
  }
  return inst.travel_cost[inst.pickup_node(passenger_id)][inst.dropoff_node(passenger_id)];
}

Money round_trip_cost(const Instance& inst, int passenger_id) {
  if (passenger_id < 1 || passenger_id > inst.n) {
    throw std::out_of_range("round_trip_cost: passenger id out of range");
  }
  const int p = inst.pickup_node(passenger_id);
  const int d = inst.dropoff_node(passenger_id);
  const int o = inst.origin_node();
  const int t = inst.destination_node();
  const Money leg = inst.travel_cost[p][d];
  const Money from_origin = inst.travel_cost[o][p] + leg + inst.travel_cost[d][o];
  const Money from_destination = inst.travel_cost[t][p] + leg + inst.travel_cost[d][t];
  return std::min(from_origin, from_destination);
}

Instance scale_money(const Instance& inst, Money factor) {
  if (factor < 1) throw std::invalid_argument("scale_money: factor must be >= 1");
  Instance out = inst;
  for (auto& row : out.travel_cost) {
    for (auto& c : row) c *= factor;
  }
  for (auto& p : out.passengers) p.bid *= factor;
  return out;
}

void expand_geometry(const EuclideanLayout& layout,
                     std::vector<std::vector<Duration>>& travel_time,
                     std::vector<std::vector<Money>>& travel_cost) {
  if (layout.speed_m_per_s <= 0.0) throw std::invalid_argument("speed must be positive");
  if (layout.cost_per_m < 0) throw std::invalid_argument("cost_per_m must be non-negative");
  const int size = static_cast<int>(layout.points.size());
  travel_time.assign(size, std::vector<Duration>(size, 0));
  travel_cost.assign(size, std::vector<Money>(size, 0));
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      if (i == j) continue;
      const double dx = layout.points[i][0] - layout.points[j][0];
      const double dy = layout.points[i][1] - layout.points[j][1];
      const double dist = std::sqrt(dx * dx + dy * dy);
      // Rounding up keeps both matrices subadditive wherever distances are.
      travel_time[i][j] = static_cast<Duration>(std::ceil(dist / layout.speed_m_per_s));
      travel_cost[i][j] =
          static_cast<Money>(std::ceil(dist * static_cast<double>(layout.cost_per_m)));
    }
  }
}

namespace {

void parse_passengers(const nlohmann::json& doc, Instance& inst) {
  for (const auto& pj : doc.at("passengers")) {
    PassengerRequest p;
    p.id = pj.at("id").get<int>();
    p.bid = pj.at("bid").get<Money>();
    p.max_pickup_time = pj.at("max_pickup_time").get<TimePoint>();
    p.max_travel_time = pj.at("max_travel_time").get<Duration>();
    inst.passengers.push_back(p);
  }
}

}  // namespace

Instance instance_from_json(const nlohmann::json& doc) {
  const int version = doc.at("version").get<int>();
  if (version != 1) throw std::runtime_error("unsupported instance version");
  Instance inst;
  inst.n = doc.at("n").get<int>();
  inst.depart_time = doc.at("depart_time").get<TimePoint>();
  inst.max_arrival = doc.at("max_arrival").get<TimePoint>();
  inst.capacity = doc.at("capacity").get<int>();
  inst.cost_mode = cost_mode_from_name(doc.at("cost_mode").get<std::string>());
  const auto& geo = doc.at("geometry");
  const std::string type = geo.at("type").get<std::string>();
  if (type == "matrix") {
    inst.travel_time = geo.at("travel_time").get<std::vector<std::vector<Duration>>>();
    inst.travel_cost = geo.at("travel_cost").get<std::vector<std::vector<Money>>>();
  } else if (type == "euclidean") {
    EuclideanLayout layout;
    layout.speed_m_per_s = geo.at("speed_m_per_s").get<double>();
    layout.cost_per_m = geo.at("cost_per_m").get<Money>();
    for (const auto& pt : geo.at("points")) {
      layout.points.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
    }
    if (static_cast<int>(layout.points.size()) != 2 * inst.n + 2) {
      throw std::runtime_error("geometry points count must be 2n+2");
    }
    expand_geometry(layout, inst.travel_time, inst.travel_cost);
    inst.euclidean_geometry = true;
  } else {
    throw std::runtime_error("unknown geometry type: " + type);
  }
  parse_passengers(doc, inst);
  return inst;
}

namespace {

nlohmann::ordered_json passengers_json(const Instance& inst) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& p : inst.passengers) {
    arr.push_back({{"id", p.id},
                   {"bid", p.bid},
                   {"max_pickup_time", p.max_pickup_time},
                   {"max_travel_time", p.max_travel_time}});
  }
  return arr;
}

nlohmann::ordered_json instance_header_json(const Instance& inst) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["n"] = inst.n;
  doc["depart_time"] = inst.depart_time;
  doc["max_arrival"] = inst.max_arrival;
  doc["capacity"] = inst.capacity;
  doc["cost_mode"] = cost_mode_name(inst.cost_mode);
  return doc;
}

}  // namespace

nlohmann::ordered_json instance_to_json(const Instance& inst) {
  nlohmann::ordered_json doc = instance_header_json(inst);
  doc["geometry"] = {{"type", "matrix"},
                     {"travel_time", inst.travel_time},
                     {"travel_cost", inst.travel_cost}};
  doc["passengers"] = passengers_json(inst);
  return doc;
}

nlohmann::ordered_json instance_to_json(const Instance& inst, const EuclideanLayout& layout) {
  nlohmann::ordered_json doc = instance_header_json(inst);
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& pt : layout.points) pts.push_back({pt[0], pt[1]});
  doc["geometry"] = {{"type", "euclidean"},
                     {"speed_m_per_s", layout.speed_m_per_s},
                     {"cost_per_m", layout.cost_per_m},
                     {"points", pts}};
  doc["passengers"] = passengers_json(inst);
  return doc;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
    return instance_from_json(doc);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_instance_file(const nlohmann::ordered_json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << doc.dump(2) << "\n";
}

}  // namespace rideshare

#include "energylab/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "energylab/rng.hpp"

namespace elab {

std::string config_digest(const json& j) {
  std::ostringstream os;
  os << std::hex << fnv1a(j.dump());
  return os.str();
}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# seed=" << rec.seed << "\n";
  out << "# config_digest=" << rec.config_digest << "\n";
  std::size_t n = rec.energies.empty() ? 0 : rec.energies[0].size();
  out << "t";
  for (std::size_t i = 0; i < n; ++i) out << ",E_" << i;
  out << "\n";
  out.precision(17);
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    out << rec.times[k];
    for (double e : rec.energies[k]) out << "," << e;
    out << "\n";
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json j;
  in >> j;
  return j;
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  if (!obj.is_object()) throw std::runtime_error(where + ": expected a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw std::runtime_error(where + ": unknown key '" + it.key() + "'");
  }
}

}  // namespace elab

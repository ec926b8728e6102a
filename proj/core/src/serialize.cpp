#include <json.hpp>

#include "einlab/green.hpp"

namespace einlab {

namespace {
std::string dump(const nlohmann::ordered_json& j) { return j.dump(2); }
}  // namespace

std::string to_json(const DomainGrid& grid) {
  nlohmann::ordered_json j;
  j["level"] = grid.level;
  j["dim"] = grid.bulk.dim;
  j["gauss_points"] = gauss_points(grid.level);
  j["periodic_points"] = periodic_points(grid.level);
  j["bulk_nodes"] = grid.bulk.size();
  auto faces = nlohmann::ordered_json::array();
  for (const auto& f : grid.faces) faces.push_back(f.size());
  j["face_nodes"] = faces;
  return dump(j);
}

std::string to_json(const GreenTerms& r) {
  nlohmann::ordered_json j;
  j["bulk_hw"] = r.bulk_hw;
  j["bulk_wh"] = r.bulk_wh;
  j["boundary_hw"] = r.boundary_hw;
  j["boundary_wh"] = r.boundary_wh;
  j["residual"] = r.residual;
  return dump(j);
}

std::string to_json(const LbarResidual& r) {
  nlohmann::ordered_json j;
  j["interior"] = r.interior;
  j["traceless"] = r.traceless;
  j["mean_curv"] = r.mean_curv;
  j["volume"] = r.volume;
  j["volume_ref"] = r.volume_ref;
  j["trace_sup"] = r.trace_sup;
  j["interior_nodes"] = r.interior_nodes;
  j["skipped_nodes"] = r.skipped_nodes;
  j["kernel"] = r.kernel();
  return dump(j);
}

std::string to_json(const ZeroMean& r) {
  nlohmann::ordered_json j;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["residual"] = r.residual;
  j["hypothesis"] = r.hypothesis;
  return dump(j);
}

std::string to_json(const HiddenBC& r) {
  nlohmann::ordered_json j;
  j["hb1"] = r.hb1;
  j["hb2"] = r.hb2;
  j["l_sigma_trace"] = r.l_sigma_trace;
  j["hypothesis"] = r.hypothesis;
  j["applicable"] = r.applicable;
  if (!r.applicable) j["status"] = "hypothesis not met";
  return dump(j);
}

std::string to_json(const QuadraticForm& r) {
  nlohmann::ordered_json j;
  j["vLv"] = r.vLv;
  j["HvLv"] = r.HvLv;
  j["vH"] = r.vH;
  j["vv"] = r.vv;
  return dump(j);
}

}  // namespace einlab

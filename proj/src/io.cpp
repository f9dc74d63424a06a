#include "rq/io.hpp"

#include <fstream>
#include <sstream>

namespace rq::io {

namespace {

using R = real_t<c128>;

R parse_real_part(const json& j) {
  if (j.is_number_integer()) return R(static_cast<long long>(j.get<long long>()));
  if (j.is_number_float()) return field<c128>::from_double(j.get<double>());
  if (j.is_string()) return R(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    Rational q(static_cast<long long>(j[0].get<long long>()),
               static_cast<long long>(j[1].get<long long>()));
    return rational_to_real<R>(q);
  }
  fail(errc::parse_error, "number must be int, float, decimal string, or [num, den]");
}

}  // namespace

c128 parse_scalar(const json& j) {
  // a 2-array at coordinate level is complex [re, im]; rationals [num, den]
  // appear nested inside the parts (or as decimal strings)
  if (j.is_array() && j.size() == 2)
    return c128(parse_real_part(j[0]), parse_real_part(j[1]));
  return c128(parse_real_part(j), R(0));
}

json scalar_to_json(const c128& z, int digits) {
  json out = json::array();
  out.push_back(field<c128>::to_string(re(z), digits));
  out.push_back(field<c128>::to_string(im(z), digits));
  return out;
}

json points_to_json(const geom::PointConfig<c128>& cfg) {
  json pts = json::array();
  for (const auto& p : cfg.points()) {
    json coords = json::array();
    for (const auto& c : p.coords()) coords.push_back(scalar_to_json(c));
    pts.push_back(json{{"coords", coords}});
  }
  return pts;
}

geom::PointConfig<c128> points_from_json(const json& j, std::size_t ambient_dim) {
  std::vector<geom::ProjPoint<c128>> pts;
  for (const auto& pj : j.at("points")) {
    num::Vec<c128> v;
    for (const auto& cj : pj.at("coords")) v.push_back(parse_scalar(cj));
    if (v.size() != ambient_dim + 1)
      fail(errc::parse_error, "point coordinate count does not match ambient_dim");
    pts.push_back(geom::ProjPoint<c128>(v));
  }
  geom::Pairing pairing(pts.size(), pts.size());
  bool have_structure = j.contains("real") || j.contains("pairs");
  if (have_structure) {
    for (auto& x : pairing) x = pts.size();  // sentinel
    if (j.contains("real"))
      for (const auto& idx : j.at("real")) pairing.at(idx.get<std::size_t>()) = idx.get<std::size_t>();
    if (j.contains("pairs"))
      for (const auto& pr : j.at("pairs")) {
        std::size_t a = pr.at(0).get<std::size_t>(), b = pr.at(1).get<std::size_t>();
        pairing.at(a) = b;
        pairing.at(b) = a;
      }
    for (std::size_t i = 0; i < pairing.size(); ++i)
      if (pairing[i] == pts.size())
        fail(errc::parse_error, "point " + std::to_string(i) + " missing from real/pairs");
    return geom::PointConfig<c128>(pts, pairing);
  }
  return geom::PointConfig<c128>(pts);
}

ParsedConfig parse_config(const json& j) {
  if (!j.contains("schema") || j.at("schema").get<std::string>() != "rq/1")
    fail(errc::parse_error, "missing or unsupported schema (want \"rq/1\")");
  ParsedConfig out;
  out.kind = j.value("kind", std::string("points"));
  out.vc.ambient_dim = j.value("ambient_dim", 3);
  out.vc.example_id = j.value("example_id", std::string(""));
  if (j.contains("points")) out.vc.points = points_from_json(j, out.vc.ambient_dim);
  if (j.contains("subspaces")) {
    for (const auto& sj : j.at("subspaces")) {
      std::vector<geom::ProjPoint<c128>> span;
      for (const auto& pj : sj.at("span")) {
        num::Vec<c128> v;
        for (const auto& cj : pj.at("coords")) v.push_back(parse_scalar(cj));
        if (v.size() != out.vc.ambient_dim + 1)
          fail(errc::parse_error, "span coordinate count does not match ambient_dim");
        span.push_back(geom::ProjPoint<c128>(v));
      }
      out.vc.subspaces.push_back(geom::LinearSubspace<c128>(span));
    }
    out.vc.subspace_pairing.assign(out.vc.subspaces.size(), out.vc.subspaces.size());
    if (j.contains("subspace_real"))
      for (const auto& idx : j.at("subspace_real"))
        out.vc.subspace_pairing.at(idx.get<std::size_t>()) = idx.get<std::size_t>();
    if (j.contains("subspace_pairs"))
      for (const auto& pr : j.at("subspace_pairs")) {
        std::size_t a = pr.at(0).get<std::size_t>(), b = pr.at(1).get<std::size_t>();
        out.vc.subspace_pairing.at(a) = b;
        out.vc.subspace_pairing.at(b) = a;
      }
    for (std::size_t i = 0; i < out.vc.subspace_pairing.size(); ++i)
      if (out.vc.subspace_pairing[i] == out.vc.subspaces.size())
        fail(errc::parse_error, "subspace " + std::to_string(i) + " missing real/pair structure");
  }
  if (j.contains("metadata"))
    for (auto it = j.at("metadata").begin(); it != j.at("metadata").end(); ++it)
      out.vc.metadata[it.key()] = it.value().is_string() ? it.value().get<std::string>()
                                                         : it.value().dump();
  if (j.contains("expected")) {
    out.vc.expected_complex = j.at("expected").value("complex", -1);
    out.vc.expected_real = j.at("expected").value("real", 0);
  }
  return out;
}

json config_to_json(const vanishing::VanishingConfig& vc, const std::string& kind) {
  json out;
  out["schema"] = "rq/1";
  out["kind"] = kind;
  if (!vc.example_id.empty()) out["example_id"] = vc.example_id;
  out["ambient_dim"] = vc.ambient_dim;
  if (vc.points.size() > 0) {
    out["points"] = points_to_json(vc.points);
    json real_idx = json::array(), pairs = json::array();
    if (vc.points.is_real_set()) {
      const auto& pr = vc.points.pairing();
      for (std::size_t i = 0; i < pr.size(); ++i) {
        if (pr[i] == i)
          real_idx.push_back(i);
        else if (pr[i] > i)
          pairs.push_back(json::array({i, pr[i]}));
      }
      out["real"] = real_idx;
      out["pairs"] = pairs;
    }
  }
  if (!vc.subspaces.empty()) {
    json subs = json::array();
    for (const auto& L : vc.subspaces) {
      json span = json::array();
      for (const auto& p : L.span()) {
        json coords = json::array();
        for (const auto& c : p.coords()) coords.push_back(scalar_to_json(c));
        span.push_back(json{{"coords", coords}});
      }
      subs.push_back(json{{"span", span}});
    }
    out["subspaces"] = subs;
    json real_idx = json::array(), pairs = json::array();
    for (std::size_t i = 0; i < vc.subspace_pairing.size(); ++i) {
      if (vc.subspace_pairing[i] == i)
        real_idx.push_back(i);
      else if (vc.subspace_pairing[i] > i)
        pairs.push_back(json::array({i, vc.subspace_pairing[i]}));
    }
    out["subspace_real"] = real_idx;
    out["subspace_pairs"] = pairs;
  }
  if (!vc.metadata.empty()) {
    json md;
    for (const auto& [k, v] : vc.metadata) md[k] = v;
    out["metadata"] = md;
  }
  if (vc.expected_complex >= 0 || vc.expected_real >= 0)
    out["expected"] = json{{"complex", vc.expected_complex}, {"real", vc.expected_real}};
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::parse_error, "cannot write " + path);
  out << data;
}

}  // namespace rq::io

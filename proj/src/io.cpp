#include "polyscat/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace polyscat::io {

namespace {

Vec parse_point(const json& arr) {
  if (!arr.is_array() || (arr.size() != 2 && arr.size() != 3))
    throw InvalidInput("point must be a 2- or 3-entry array");
  return arr.size() == 2 ? Vec(arr[0].get<double>(), arr[1].get<double>())
                         : Vec(arr[0].get<double>(), arr[1].get<double>(),
                               arr[2].get<double>());
}

json point_to_json(const Vec& p) {
  json arr = json::array();
  for (int i = 0; i < p.n; ++i) arr.push_back(p[i]);
  return arr;
}

std::optional<Polytope> parse_optional_polytope(const json& cell) {
  if (cell.is_null()) return std::nullopt;
  if (!cell.contains("vertices")) throw InvalidInput("cell needs vertices");
  std::vector<Vec> pts;
  for (const auto& v : cell["vertices"]) pts.push_back(parse_point(v));
  return Polytope::from_points(pts);
}

Complex parse_complex(const json& v) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2)
    return Complex(v[0].get<double>(), v[1].get<double>());
  throw InvalidInput("complex value must be a number or [re, im]");
}

}  // namespace

std::string hash_bytes(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string hash_file(const std::string& path) {
  return hash_bytes(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write file: " + path);
  out << content;
}

CellPartition parse_cell_partition(const json& doc) {
  if (!doc.contains("cells")) throw InvalidInput("partition needs cells");
  CellPartition part;
  part.d0 = doc.value("d0", 0.0);
  std::vector<std::optional<Polytope>> cells;
  for (const auto& cell : doc["cells"])
    cells.push_back(parse_optional_polytope(cell));
  if (doc.contains("ordering")) {
    const auto& ord = doc["ordering"];
    if (ord.size() != cells.size())
      throw InvalidInput("ordering must be a permutation of the cells");
    for (const auto& idx : ord)
      part.cells.push_back(cells.at(idx.get<size_t>()));
  } else {
    part.cells = std::move(cells);
  }
  return part;
}

NestedFamily parse_nested_family(const json& doc) {
  if (!doc.contains("shells")) throw InvalidInput("family needs shells");
  NestedFamily fam;
  fam.m0 = doc.value("m0", 0.0);
  for (const auto& shell : doc["shells"])
    fam.shells.push_back(parse_optional_polytope(shell));
  return fam;
}

json to_json(const CellPartition& part) {
  json doc;
  doc["dimension"] = part.dim();
  doc["d0"] = part.d0;
  json cells = json::array();
  for (const auto& cell : part.cells) {
    if (!cell) {
      cells.push_back(nullptr);
      continue;
    }
    json verts = json::array();
    for (const auto& v : cell->vertices()) verts.push_back(point_to_json(v));
    cells.push_back(json{{"vertices", verts}});
  }
  doc["cells"] = cells;
  return doc;
}

json to_json(const NestedFamily& fam) {
  json doc;
  doc["dimension"] = fam.dim();
  doc["m0"] = fam.m0;
  json shells = json::array();
  for (const auto& shell : fam.shells) {
    if (!shell) {
      shells.push_back(nullptr);
      continue;
    }
    json verts = json::array();
    for (const auto& v : shell->vertices()) verts.push_back(point_to_json(v));
    shells.push_back(json{{"vertices", verts}});
  }
  doc["shells"] = shells;
  return doc;
}

std::unique_ptr<Potential> parse_potential(const json& doc) {
  if (doc.contains("builtin")) {
    std::string kind = doc["builtin"].get<std::string>();
    Complex value = parse_complex(doc.value("value", json::array({1.0, 0.0})));
    if (kind == "disc" || kind == "ball") {
      Vec center = parse_point(doc["center"]);
      return std::make_unique<BallPotential>(center, doc["radius"].get<double>(),
                                             value);
    }
    if (kind == "square" || kind == "cube") {
      Vec lo = parse_point(doc["lo"]), hi = parse_point(doc["hi"]);
      CellPartition part;
      part.d0 = doc.value("d0", 0.1);
      part.cells.push_back(Polytope::axis_box(lo, hi));
      return std::make_unique<PiecewiseConstantPotential>(
          part, std::vector<Complex>{value});
    }
    if (kind == "lshape") {
      double s = doc.value("size", 1.0);
      CellPartition part;
      part.d0 = doc.value("d0", 0.1);
      part.cells.push_back(Polytope::axis_box(Vec(-s / 2, -s / 2), Vec(0, s / 2)));
      part.cells.push_back(Polytope::axis_box(Vec(0, -s / 2), Vec(s / 2, 0)));
      return std::make_unique<PiecewiseConstantPotential>(
          part, std::vector<Complex>{value, value});
    }
    if (kind == "pixels") {
      CellPartition part =
          pixel_lattice(doc["rows"].get<int>(), doc["cols"].get<int>(),
                        doc["side"].get<double>(), doc.value("d0", 0.05));
      std::vector<Complex> values;
      if (doc.contains("values"))
        for (const auto& v : doc["values"]) values.push_back(parse_complex(v));
      else
        values.assign(part.cells.size(), Complex(0));
      return std::make_unique<PiecewiseConstantPotential>(part,
                                                          std::move(values));
    }
    throw InvalidInput("unknown builtin potential: " + kind);
  }

  std::vector<Complex> values;
  if (doc.contains("values"))
    for (const auto& v : doc["values"]) values.push_back(parse_complex(v));
  if (doc.contains("cells")) {
    CellPartition part = parse_cell_partition(doc);
    if (values.empty()) values.assign(part.cells.size(), Complex(0));
    return std::make_unique<PiecewiseConstantPotential>(part, std::move(values));
  }
  if (doc.contains("shells")) {
    NestedFamily fam = parse_nested_family(doc);
    return std::make_unique<PiecewiseConstantPotential>(fam, std::move(values));
  }
  throw InvalidInput("potential document needs builtin, cells or shells");
}

void write_pattern_csv(const std::string& path, const FarFieldPattern& a,
                       const std::string& geometry_hash) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "# k=%.17g d=%.17g", a.k,
                a.incident_direction[0]);
  out << line;
  for (int i = 1; i < a.n; ++i) {
    std::snprintf(line, sizeof(line), ",%.17g", a.incident_direction[i]);
    out << line;
  }
  out << " geometry=" << geometry_hash << "\n";
  out << (a.n == 2 ? "theta,re,im\n" : "theta,phi,re,im\n");
  for (size_t i = 0; i < a.directions.size(); ++i) {
    const Vec& d = a.directions[i];
    if (a.n == 2) {
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n",
                    std::atan2(d[1], d[0]), a.values[i].real(),
                    a.values[i].imag());
    } else {
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n",
                    std::acos(std::clamp(d[2], -1.0, 1.0)),
                    std::atan2(d[1], d[0]), a.values[i].real(),
                    a.values[i].imag());
    }
    out << line;
  }
  write_text_file(path, out.str());
}

void write_field_dump(const std::string& path, const FieldSolution& sol) {
  std::ostringstream out;
  char line[256];
  out << "polyscat-field 1\n";
  std::snprintf(line, sizeof(line),
                "n=%d R=%.17g h=%.17g counts=%d,%d,%d k=%.17g\n", sol.grid.n,
                sol.grid.R, sol.grid.h, sol.grid.counts[0], sol.grid.counts[1],
                sol.grid.counts[2], sol.incident.k);
  out << line;
  std::snprintf(line, sizeof(line), "d=%.17g", sol.incident.direction[0]);
  out << line;
  for (int i = 1; i < sol.grid.n; ++i) {
    std::snprintf(line, sizeof(line), ",%.17g", sol.incident.direction[i]);
    out << line;
  }
  out << "\nlayout=us,u float64 interleaved re,im\n";
  auto dump = [&](const std::vector<Complex>& field) {
    for (const auto& v : field) {
      double re = v.real(), im = v.imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof(double));
      out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
  };
  dump(sol.scattered);
  dump(sol.total);
  write_text_file(path, out.str());
}

void write_json_lines(const std::string& path, const std::vector<json>& records) {
  std::ostringstream out;
  for (const auto& rec : records) out << rec.dump() << "\n";
  write_text_file(path, out.str());
}

std::vector<json> read_json_lines(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<json> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(json::parse(line));
  }
  return records;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::string& config_hash, double wall_ms,
                    const std::vector<std::string>& artifact_paths) {
  json manifest;
  manifest["version"] = "0.1.0";
  manifest["command"] = command;
  manifest["config_hash"] = config_hash;
  manifest["wall_time_ms"] = wall_ms;
  json artifacts = json::array();
  for (const auto& p : artifact_paths) {
    std::string rel = std::filesystem::path(p).filename().string();
    artifacts.push_back(json{{"path", rel}, {"hash", hash_file(p)}});
  }
  manifest["artifacts"] = artifacts;
  write_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

}  // namespace polyscat::io

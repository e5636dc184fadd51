#include "geoapprox/io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace geo {

using json = nlohmann::json;

IoError::IoError(size_t line_no, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}

namespace {

Point parse_coords(const json& arr, size_t line) {
  if (!arr.is_array() || arr.empty() || arr.size() > kMaxDim)
    throw IoError(line, "coordinate array must hold 1..4 numbers");
  Point p;
  p.dim = static_cast<int>(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw IoError(line, "coordinate is not a number");
    p.c[i] = arr[i].get<double>();
    if (!std::isfinite(p.c[i])) throw IoError(line, "coordinate is not finite");
  }
  return p;
}

GeomObject parse_object(const json& j, size_t line) {
  if (!j.is_object()) throw IoError(line, "record is not a JSON object");
  if (!j.contains("id") || !j["id"].is_number_integer()) throw IoError(line, "missing integer id");
  GeomObject o;
  o.id = j["id"].get<int64_t>();
  o.weight = 1.0;
  if (j.contains("weight")) {
    if (!j["weight"].is_number()) throw IoError(line, "weight is not a number");
    o.weight = j["weight"].get<double>();
    if (!std::isfinite(o.weight) || o.weight < 0.0) throw IoError(line, "weight must be finite and >= 0");
  }
  o.color = Color::none;
  if (j.contains("color")) {
    const std::string c = j["color"].is_string() ? j["color"].get<std::string>() : "";
    if (c == "A")
      o.color = Color::A;
    else if (c == "B")
      o.color = Color::B;
    else
      throw IoError(line, "color must be \"A\" or \"B\"");
  }
  const std::string kind = j.contains("kind") && j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  if (kind == "box") {
    if (!j.contains("lo") || !j.contains("hi")) throw IoError(line, "box needs lo and hi");
    AxisBox b;
    b.lo = parse_coords(j["lo"], line);
    b.hi = parse_coords(j["hi"], line);
    if (b.lo.dim != b.hi.dim) throw IoError(line, "lo/hi dimension mismatch");
    if (!b.valid()) throw IoError(line, "box needs lo <= hi per axis");
    o.shape = b;
  } else if (kind == "disk") {
    if (!j.contains("center") || !j.contains("radius")) throw IoError(line, "disk needs center and radius");
    Disk d;
    d.center = parse_coords(j["center"], line);
    if (d.center.dim != 2) throw IoError(line, "disk center must be 2-dimensional");
    if (!j["radius"].is_number()) throw IoError(line, "radius is not a number");
    d.radius = j["radius"].get<double>();
    if (!std::isfinite(d.radius) || d.radius <= 0.0) throw IoError(line, "radius must be finite and > 0");
    o.shape = d;
  } else {
    throw IoError(line, "kind must be \"box\" or \"disk\"");
  }
  return o;
}

json coords_json(const Point& p) {
  json arr = json::array();
  for (int i = 0; i < p.dim; ++i) arr.push_back(p[i]);
  return arr;
}

json object_json(const GeomObject& o) {
  json j;
  j["id"] = o.id;
  if (o.is_box()) {
    j["kind"] = "box";
    j["lo"] = coords_json(o.box().lo);
    j["hi"] = coords_json(o.box().hi);
  } else {
    j["kind"] = "disk";
    j["center"] = coords_json(o.disk().center);
    j["radius"] = o.disk().radius;
  }
  j["weight"] = o.weight;
  if (o.color == Color::A) j["color"] = "A";
  if (o.color == Color::B) j["color"] = "B";
  return j;
}

json parse_line(const std::string& text, size_t line) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError(line, "malformed JSON");
  return j;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

ObjectSet read_instance(std::istream& in) {
  ObjectSet out;
  std::set<int64_t> ids;
  std::string text;
  size_t line = 0;
  int dim = 0;
  while (std::getline(in, text)) {
    ++line;
    if (blank(text)) continue;
    GeomObject o = parse_object(parse_line(text, line), line);
    if (!ids.insert(o.id).second) throw IoError(line, "duplicate id " + std::to_string(o.id));
    if (dim == 0)
      dim = o.dim();
    else if (o.dim() != dim)
      throw IoError(line, "mixed dimensions in one instance");
    out.push_back(std::move(o));
  }
  return out;
}

ObjectSet read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(0, "cannot open " + path);
  return read_instance(in);
}

void write_instance(std::ostream& out, const ObjectSet& s) {
  for (const auto& o : s) out << object_json(o).dump() << "\n";
}

void write_instance_file(const std::string& path, const ObjectSet& s) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot open " + path);
  write_instance(out, s);
}

UpdateStream read_stream(std::istream& in) {
  UpdateStream st;
  std::map<int64_t, size_t> live;  // id -> insert count (sanity)
  std::string text;
  size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (blank(text)) continue;
    json j = parse_line(text, line);
    if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
      throw IoError(line, "stream record needs an \"op\" string");
    const std::string op = j["op"].get<std::string>();
    if (op == "checkpoint") {
      st.checkpoints.push_back(st.ops.size());
    } else if (op == "insert") {
      UpdateOp u;
      u.is_insert = true;
      u.obj = parse_object(j, line);
      if (live.count(u.obj.id)) throw IoError(line, "insert of live id " + std::to_string(u.obj.id));
      live[u.obj.id] = 1;
      st.ops.push_back(std::move(u));
    } else if (op == "delete") {
      if (!j.contains("id") || !j["id"].is_number_integer()) throw IoError(line, "delete needs an integer id");
      UpdateOp u;
      u.is_insert = false;
      u.id = j["id"].get<int64_t>();
      if (!live.count(u.id)) throw IoError(line, "delete of unknown id " + std::to_string(u.id));
      live.erase(u.id);
      st.ops.push_back(std::move(u));
    } else {
      throw IoError(line, "op must be insert, delete, or checkpoint");
    }
  }
  return st;
}

UpdateStream read_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(0, "cannot open " + path);
  return read_stream(in);
}

void write_stream(std::ostream& out, const UpdateStream& s) {
  size_t next_cp = 0;
  for (size_t i = 0; i <= s.ops.size(); ++i) {
    while (next_cp < s.checkpoints.size() && s.checkpoints[next_cp] == i) {
      out << R"({"op":"checkpoint"})" << "\n";
      ++next_cp;
    }
    if (i == s.ops.size()) break;
    const UpdateOp& u = s.ops[i];
    if (u.is_insert) {
      json j = object_json(u.obj);
      j["op"] = "insert";
      out << j.dump() << "\n";
    } else {
      json j;
      j["op"] = "delete";
      j["id"] = u.id;
      out << j.dump() << "\n";
    }
  }
}

void write_stream_file(const std::string& path, const UpdateStream& s) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot open " + path);
  write_stream(out, s);
}

ObjectSet live_set(const UpdateStream& s, size_t upto) {
  std::vector<GeomObject> acc;
  size_t n = std::min(upto, s.ops.size());
  for (size_t i = 0; i < n; ++i) {
    const UpdateOp& u = s.ops[i];
    if (u.is_insert) {
      acc.push_back(u.obj);
    } else {
      for (size_t k = 0; k < acc.size(); ++k)
        if (acc[k].id == u.id) {
          acc.erase(acc.begin() + static_cast<std::ptrdiff_t>(k));
          break;
        }
    }
  }
  return acc;
}

}  // namespace geo

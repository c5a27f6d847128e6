#include "gausshardy/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gausshardy/quadrature.hpp"
#include "gausshardy/util.hpp"

namespace gh::io {

using nlohmann::json;

std::string expansion_to_json(const ChaosExpansion& c) {
  // sorted by (order, lexicographic) for reproducible artifacts
  std::vector<std::pair<MultiIndex, double>> entries(c.coefficients.begin(), c.coefficients.end());
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.first.order() != b.first.order()) return a.first.order() < b.first.order();
    return a.first < b.first;
  });
  std::ostringstream os;
  os << "{\"n\":" << c.dimension << ",\"coeffs\":[";
  bool first = true;
  for (const auto& [beta, v] : entries) {
    if (!first) os << ",";
    first = false;
    os << "{\"beta\":[";
    for (int d = 0; d < beta.size(); ++d) {
      if (d) os << ",";
      os << beta[d];
    }
    os << "],\"c\":" << fmt_double(v) << "}";
  }
  os << "]}";
  return os.str();
}

ChaosExpansion expansion_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("coeffs"))
    throw ParseError("expansion JSON needs keys n and coeffs");
  ChaosExpansion c;
  c.dimension = j["n"].get<int>();
  if (c.dimension < 1 || c.dimension > 3) throw ParseError("n must be 1..3");
  for (const auto& item : j["coeffs"]) {
    if (!item.contains("beta") || !item.contains("c"))
      throw ParseError("coefficient entries need beta and c");
    std::vector<int> e = item["beta"].get<std::vector<int>>();
    if (static_cast<int>(e.size()) != c.dimension) throw ParseError("beta length must equal n");
    for (int v : e)
      if (v < 0) throw ParseError("beta entries must be non-negative");
    c.add(MultiIndex(std::move(e)), item["c"].get<double>());
  }
  return c;
}

std::string grid_to_csv(const GridFunction& g) {
  std::ostringstream os;
  for (int d = 0; d < g.dimension; ++d) os << "x" << (d + 1) << ",";
  os << "value\n";
  for (std::size_t i = 0; i < g.count(); ++i) {
    auto x = g.point(i);
    for (int d = 0; d < g.dimension; ++d) os << fmt_double(x[d]) << ",";
    os << fmt_double(g.values[i]) << "\n";
  }
  return os.str();
}

namespace {
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}
}  // namespace

GridFunction grid_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty file");
  std::vector<std::string> header = split_csv(line);
  int dim = static_cast<int>(header.size()) - 1;
  if (dim < 1 || dim > 3 || header.back() != "value")
    throw ParseError(1, "header must be x1..xn,value");
  for (int d = 0; d < dim; ++d)
    if (header[d] != "x" + std::to_string(d + 1))
      throw ParseError(1, "header must be x1..xn,value");
  GridFunction g;
  g.dimension = dim;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv(line);
    if (static_cast<int>(fields.size()) != dim + 1)
      throw ParseError(lineno, "expected " + std::to_string(dim + 1) + " fields");
    for (int d = 0; d <= dim; ++d) {
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[d], &pos);
      } catch (const std::exception&) {
        throw ParseError(lineno, "not a number: '" + fields[d] + "'");
      }
      if (pos != fields[d].size()) throw ParseError(lineno, "trailing characters in '" + fields[d] + "'");
      if (d < dim)
        g.points.push_back(v);
      else
        g.values.push_back(v);
    }
  }
  return g;
}

bool attach_tensor_rule(GridFunction& g) {
  std::size_t count = g.count();
  int order = 0;
  if (g.dimension == 1) {
    order = static_cast<int>(count);
  } else {
    order = static_cast<int>(std::llround(std::pow(double(count), 1.0 / g.dimension)));
    std::size_t check = 1;
    for (int d = 0; d < g.dimension; ++d) check *= order;
    if (check != count) return false;
  }
  if (order < 1 || order > 256) return false;
  GridFunction ref = tensor_grid_function(g.dimension, order);
  for (std::size_t i = 0; i < g.points.size(); ++i)
    if (std::abs(g.points[i] - ref.points[i]) > 1e-12) return false;
  g.weights = ref.weights;
  g.rule_order = order;
  return true;
}

std::string ball_to_json(const AdmissibleBall& b) {
  std::ostringstream os;
  os << "{\"center\":[";
  for (std::size_t d = 0; d < b.center.size(); ++d) {
    if (d) os << ",";
    os << fmt_double(b.center[d]);
  }
  os << "],\"radius\":" << fmt_double(b.radius) << ",\"scale\":" << fmt_double(b.scale) << "}";
  return os.str();
}

AdmissibleBall ball_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("center") || !j.contains("radius"))
    throw ParseError("ball JSON needs center and radius");
  AdmissibleBall b;
  b.center = j["center"].get<std::vector<double>>();
  b.radius = j["radius"].get<double>();
  b.scale = j.value("scale", 2.0);
  if (b.center.empty() || b.center.size() > 3) throw ParseError("center must have 1..3 entries");
  if (!(b.radius > 0.0)) throw ParseError("radius must be positive");
  return b;
}

std::string atom_to_json(const TentAtom& atom) {
  json j;
  j["ball"] = json::parse(ball_to_json(atom.ball));
  j["t_samples"] = atom.t_samples;
  j["y_points"] = atom.y_points;
  j["profile"] = atom.profile;
  j["norm_certificate"] = atom.norm_certificate;
  j["poly_coeffs"] = atom.poly_coeffs;
  j["lambda"] = atom.lambda;
  j["amplitude"] = atom.amplitude;
  return j.dump();
}

TentAtom atom_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  TentAtom atom;
  atom.ball = ball_from_json(j.at("ball").dump());
  atom.t_samples = j.at("t_samples").get<std::vector<double>>();
  atom.y_points = j.at("y_points").get<std::vector<double>>();
  atom.profile = j.at("profile").get<std::vector<double>>();
  atom.norm_certificate = j.value("norm_certificate", 0.0);
  atom.poly_coeffs = j.at("poly_coeffs").get<std::vector<double>>();
  atom.lambda = j.at("lambda").get<double>();
  atom.amplitude = j.at("amplitude").get<double>();
  return atom;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace gh::io

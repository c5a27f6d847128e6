#pragma once

#include <stdexcept>
#include <string>

#include "gausshardy/chaos.hpp"
#include "gausshardy/functionals.hpp"
#include "gausshardy/geometry.hpp"

namespace gh::io {

/// malformed-input error carrying a 1-based line number (0 when not line
/// oriented)
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
  explicit ParseError(const std::string& msg) : std::runtime_error(msg), line(0) {}
};

/// {"n": int, "coeffs": [{"beta": [ints], "c": float}]}, coefficients sorted
/// by (order, lexicographic)
std::string expansion_to_json(const ChaosExpansion& c);
ChaosExpansion expansion_from_json(const std::string& text);

/// CSV with mandatory header x1..xn,value
std::string grid_to_csv(const GridFunction& g);
GridFunction grid_from_csv(const std::string& text);

/// attaches tensor-rule gamma weights when the points are exactly the nodes
/// of some gauss-hermite tensor grid; returns false otherwise
bool attach_tensor_rule(GridFunction& g);

std::string ball_to_json(const AdmissibleBall& b);
AdmissibleBall ball_from_json(const std::string& text);

/// {ball, t_samples, y_points, profile rows, params...}; the generator data
/// is included so eval() reconstructs the profile exactly
std::string atom_to_json(const TentAtom& atom);
TentAtom atom_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gh::io

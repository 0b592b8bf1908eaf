#include "fvlab/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fvlab/errors.hpp"

namespace fvlab {

namespace {

// Token stream over non-comment lines, tracking the current line number.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  bool next(std::string& tok) {
    while (true) {
      if (line_stream_ >> tok) return true;
      std::string line;
      if (!std::getline(in_, line)) return false;
      ++line_;
      if (!line.empty() && line[0] == '#') continue;
      line_stream_.clear();
      line_stream_.str(line);
    }
  }

  int line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::istringstream line_stream_;
  int line_ = 0;
};

long expect_int(TokenReader& r, const char* what) {
  std::string tok;
  if (!r.next(tok)) throw ParseError(std::string("unexpected end of file, expected ") + what, r.line());
  try {
    std::size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("expected integer ") + what + ", got '" + tok + "'", r.line());
  }
}

double expect_real(TokenReader& r, const char* what) {
  std::string tok;
  if (!r.next(tok)) throw ParseError(std::string("unexpected end of file, expected ") + what, r.line());
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("expected coordinate ") + what + ", got '" + tok + "'", r.line());
  }
}

void expect_keyword(TokenReader& r, const char* kw) {
  std::string tok;
  if (!r.next(tok)) throw ParseError(std::string("unexpected end of file, expected '") + kw + "'", r.line());
  if (tok != kw) throw ParseError(std::string("expected '") + kw + "', got '" + tok + "'", r.line());
}

}  // namespace

TensorMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file '" + path + "'", 0);
  TokenReader r(in);

  expect_keyword(r, "dim");
  const long d = expect_int(r, "dimension");
  if (d < 2 || d > 16) throw ParseError("dimension must be in [2,16]", r.line());

  std::vector<Axis> axes;
  axes.reserve(static_cast<std::size_t>(d));
  for (long a = 0; a < d; ++a) {
    expect_keyword(r, "axis");
    const long M = expect_int(r, "segment count");
    if (M < 2) throw ParseError("axis segment count must be >= 2", r.line());
    std::vector<double> coords;
    coords.reserve(static_cast<std::size_t>(M) + 1);
    for (long i = 0; i <= M; ++i) coords.push_back(expect_real(r, "value"));
    try {
      axes.push_back(axis_from_coords(std::move(coords)));
    } catch (const MeshError& e) {
      throw ParseError(e.what(), r.line());
    }
  }
  std::string extra;
  if (r.next(extra)) throw ParseError("trailing content '" + extra + "' after last axis", r.line());
  return TensorMesh(std::move(axes));
}

void write_mesh_file(const TensorMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "dim " << mesh.dim() << "\n";
  char buf[64];
  for (int a = 0; a < mesh.dim(); ++a) {
    const Axis& ax = mesh.axis(a);
    out << "axis " << ax.segments() << "\n";
    for (std::size_t i = 0; i < ax.coords().size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", ax.coords()[i]);
      out << buf << (i + 1 == ax.coords().size() ? "\n" : " ");
    }
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace fvlab

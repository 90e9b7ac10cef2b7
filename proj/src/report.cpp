#include "robreg/report.hpp"

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include "json.hpp"
#include <sstream>

namespace robreg::report {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) throw Error("report: row width does not match the header");
  rows.push_back(std::move(row));
}

namespace {

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void line(std::ostringstream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << field(cells[i]);
  os << '\n';
}

nlohmann::json parse_json(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

double as_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + ": expected a number, got " + j.dump());
  return j.get<double>();
}

}  // namespace

std::string to_csv(const Table& t) {
  std::ostringstream os;
  os << "# meta: ";
  for (std::size_t i = 0; i < t.meta.size(); ++i) os << (i ? ";" : "") << t.meta[i].first << '=' << t.meta[i].second;
  os << '\n';
  line(os, t.header);
  for (const auto& r : t.rows) line(os, r);
  return os.str();
}

CMat parse_complex_matrix(const std::string& text) {
  const nlohmann::json j = parse_json(text, "matrix literal");
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw ConfigError("matrix literal: expected a non-empty array of rows");
  }
  const std::size_t rows = j.size(), cols = j[0].size();
  CMat M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ConfigError("matrix literal: ragged rows");
    for (std::size_t k = 0; k < cols; ++k) {
      const auto& e = j[i][k];
      if (e.is_array()) {
        if (e.size() != 2) throw ConfigError("matrix literal: complex entries are [re, im]");
        M(i, k) = {as_number(e[0], "matrix literal"), as_number(e[1], "matrix literal")};
      } else {
        M(i, k) = as_number(e, "matrix literal");
      }
    }
  }
  return M;
}

Mat parse_matrix(const std::string& text) {
  const CMat M = parse_complex_matrix(text);
  if (M.imag().cwiseAbs().maxCoeff() != 0.0) throw ConfigError("matrix literal: expected real entries");
  return M.real();
}

Vec parse_vector(const std::string& text) {
  const nlohmann::json j = parse_json(text, "vector literal");
  if (j.is_number()) return Vec::Constant(1, j.get<double>());
  if (!j.is_array() || j.empty()) throw ConfigError("vector literal: expected a non-empty array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = as_number(j[i], "vector literal");
  return v;
}

CMat read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix file " + path);
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string banner, object, format, field_kind, symmetry;
  hs >> banner >> object >> format >> field_kind >> symmetry;
  for (std::string* s : {&object, &format, &field_kind, &symmetry}) {
    for (char& ch : *s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  if (banner != "%%MatrixMarket" || object != "matrix") throw ConfigError(path + ": not a Matrix Market matrix file");
  if (format != "coordinate" && format != "array") throw ConfigError(path + ": unsupported format " + format);
  const bool complex = field_kind == "complex";
  if (!complex && field_kind != "real" && field_kind != "integer" && field_kind != "double") {
    throw ConfigError(path + ": unsupported field " + field_kind);
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric" && symmetry != "hermitian") {
    throw ConfigError(path + ": unsupported symmetry " + symmetry);
  }
  std::string l;
  while (std::getline(in, l) && (l.empty() || l[0] == '%')) {
  }
  std::istringstream size_line(l);
  long rows = 0, cols = 0, nnz = 0;
  size_line >> rows >> cols;
  if (format == "coordinate") size_line >> nnz;
  if (!size_line || rows <= 0 || cols <= 0) throw ConfigError(path + ": bad size line");
  CMat M = CMat::Zero(rows, cols);
  auto place = [&](long i, long j, std::complex<double> v) {
    if (i < 0 || j < 0 || i >= rows || j >= cols) throw ConfigError(path + ": entry index out of range");
    M(i, j) = v;
    if (i != j) {
      if (symmetry == "symmetric") M(j, i) = v;
      if (symmetry == "skew-symmetric") M(j, i) = -v;
      if (symmetry == "hermitian") M(j, i) = std::conj(v);
    }
  };
  auto read_value = [&](std::istream& s) {
    double re = 0.0, im = 0.0;
    s >> re;
    if (complex) s >> im;
    if (!s) throw ConfigError(path + ": malformed entry");
    return std::complex<double>(re, im);
  };
  if (format == "coordinate") {
    for (long k = 0; k < nnz; ++k) {
      long i = 0, j = 0;
      if (!(in >> i >> j)) throw ConfigError(path + ": expected " + std::to_string(nnz) + " entries");
      place(i - 1, j - 1, read_value(in));
    }
  } else {
    const bool sym = symmetry != "general";
    for (long j = 0; j < cols; ++j) {
      for (long i = sym ? j : 0; i < rows; ++i) {
        if (symmetry == "skew-symmetric" && i == j) continue;
        place(i, j, read_value(in));
      }
    }
  }
  return M;
}

}  // namespace robreg::report

#include "robreg/sdpa.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace robreg::sdpa {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Problem from_norm(const lmi::NormInstance& inst) {
  const Mat M0 = lmi::build_norm_lmi(inst, 0.0, 0.0).M;
  const Mat Mt = lmi::build_norm_lmi(inst, 1.0, 0.0).M - M0;
  const Mat Mmu = lmi::build_norm_lmi(inst, 0.0, 1.0).M - M0;
  Problem p;
  p.variable_names = {"t", "mu"};
  p.block_sizes = {M0.rows()};
  p.objective = Vec::Zero(2);
  p.objective[0] = 1.0;
  p.F = {{-M0}, {Mt}, {Mmu}};
  return p;
}

Problem from_quad(const lmi::QuadInstance& inst) {
  const lmi::QuadFactors fac = lmi::quad_factors(inst.H, inst.c);
  const Mat M0 = lmi::build_quad_lmi(inst, 0.0, 0.0, 0.0).block.M;
  const Mat Ms = lmi::build_quad_lmi(inst, 0.0, 1.0, 0.0).block.M - M0;
  const Mat Mmu = lmi::build_quad_lmi(inst, 0.0, 0.0, 1.0).block.M - M0;
  const Eigen::Index N = M0.rows();
  Mat S0 = Mat::Zero(2, 2), St = Mat::Zero(2, 2), Ss = Mat::Zero(2, 2);
  S0(0, 0) = 1.0;
  S0(1, 1) = fac.c_Hinv_c - inst.d;
  St(1, 1) = 1.0;
  Ss(0, 1) = Ss(1, 0) = 1.0;
  Problem p;
  p.variable_names = {"t", "s", "mu"};
  p.block_sizes = {N, 2};
  p.objective = Vec::Zero(3);
  p.objective[0] = 1.0;
  p.F = {{-M0, -S0}, {Mat::Zero(N, N), St}, {Ms, Ss}, {Mmu, Mat::Zero(2, 2)}};
  return p;
}

void write(std::ostream& os, const Problem& p, const std::optional<Vec>& decision) {
  os << "* variables:";
  for (const auto& n : p.variable_names) os << ' ' << n;
  os << '\n';
  if (decision) {
    os << "* decision:";
    for (Eigen::Index k = 0; k < decision->size(); ++k) os << ' ' << num((*decision)[k]);
    os << '\n';
  }
  os << p.variables() << '\n' << p.block_sizes.size() << '\n';
  for (std::size_t b = 0; b < p.block_sizes.size(); ++b) os << (b ? " " : "") << p.block_sizes[b];
  os << '\n';
  for (Eigen::Index k = 0; k < p.objective.size(); ++k) os << (k ? " " : "") << num(p.objective[k]);
  os << '\n';
  for (std::size_t k = 0; k < p.F.size(); ++k) {
    for (std::size_t b = 0; b < p.F[k].size(); ++b) {
      const Mat& M = p.F[k][b];
      for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = i; j < M.cols(); ++j) {
          if (M(i, j) != 0.0) os << k << ' ' << b + 1 << ' ' << i + 1 << ' ' << j + 1 << ' ' << num(M(i, j)) << '\n';
        }
      }
    }
  }
}

void export_file(const std::string& path, const Problem& p, const std::optional<Vec>& decision) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write(os, p, decision);
  os.flush();
  if (!os) throw Error("write to " + path + " failed");
}

Problem read(std::istream& is) {
  std::vector<std::string> lines;
  Problem p;
  for (std::string line; std::getline(is, line);) {
    if (line.empty()) continue;
    if (line[0] == '*' || line[0] == '"') {
      if (line.rfind("* variables:", 0) == 0) {
        std::istringstream ss(line.substr(12));
        for (std::string n; ss >> n;) p.variable_names.push_back(n);
      }
      continue;
    }
    lines.push_back(line);
  }
  if (lines.size() < 4) throw ConfigError("sdpa: missing header lines");
  auto strip = [](std::string s) {
    for (char& ch : s) {
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    }
    return s;
  };
  int nvars = 0, nblocks = 0;
  if (!(std::istringstream(lines[0]) >> nvars) || nvars <= 0) throw ConfigError("sdpa: bad variable count");
  if (!(std::istringstream(lines[1]) >> nblocks) || nblocks <= 0) throw ConfigError("sdpa: bad block count");
  {
    std::istringstream ss(strip(lines[2]));
    for (int b = 0; b < nblocks; ++b) {
      long v = 0;
      if (!(ss >> v) || v == 0) throw ConfigError("sdpa: bad block sizes");
      p.block_sizes.push_back(v);
    }
  }
  {
    std::istringstream ss(strip(lines[3]));
    p.objective.resize(nvars);
    for (int k = 0; k < nvars; ++k) {
      if (!(ss >> p.objective[k])) throw ConfigError("sdpa: bad objective row");
    }
  }
  p.F.assign(nvars + 1, {});
  for (auto& blocks : p.F) {
    for (Eigen::Index s : p.block_sizes) blocks.push_back(Mat::Zero(std::abs(s), std::abs(s)));
  }
  for (std::size_t l = 4; l < lines.size(); ++l) {
    std::istringstream ss(strip(lines[l]));
    int k = 0, b = 0, i = 0, j = 0;
    double v = 0.0;
    if (!(ss >> k >> b >> i >> j >> v)) throw ConfigError("sdpa: bad entry line " + std::to_string(l + 1));
    if (k < 0 || k > nvars || b < 1 || b > nblocks) throw ConfigError("sdpa: entry index out of range");
    Mat& M = p.F[k][b - 1];
    if (i < 1 || j < 1 || i > M.rows() || j > M.rows()) throw ConfigError("sdpa: entry position out of range");
    M(i - 1, j - 1) = v;
    M(j - 1, i - 1) = v;
  }
  return p;
}

Problem read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  return read(is);
}

Mat evaluate_block(const Problem& p, const Vec& y, std::size_t block) {
  require_dim(y, p.variables(), "sdpa: decision vector");
  Mat M = -p.F[0][block];
  for (int k = 0; k < p.variables(); ++k) M += y[k] * p.F[k + 1][block];
  return M;
}

}  // namespace robreg::sdpa

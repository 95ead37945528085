#include "saddlekit/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace saddlekit {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

KvFile KvFile::parse(const std::string& text) {
  KvFile kv;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(lineno, "empty section name");
      kv.sections[section];
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "empty key");
    auto [it, inserted] = kv.sections[section].emplace(key, Entry{value, lineno});
    if (!inserted) fail(lineno, "duplicate key '" + key + "'");
  }
  return kv;
}

KvFile KvFile::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool KvFile::has_section(const std::string& s) const {
  return sections.count(s) > 0;
}

const KvFile::Entry* KvFile::find(const std::string& section,
                                  const std::string& key) const {
  auto s = sections.find(section);
  if (s == sections.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  k->second.consumed = true;
  return &k->second;
}

std::string KvFile::get_string(const std::string& section,
                               const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e)
    throw ConfigError("missing key '" + key + "' in section [" + section + "]");
  return e->value;
}

std::optional<std::string> KvFile::get_optional(const std::string& section,
                                                const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e) return std::nullopt;
  return e->value;
}

double KvFile::get_double(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e)
    throw ConfigError("missing key '" + key + "' in section [" + section + "]");
  try {
    size_t pos = 0;
    double v = std::stod(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(e->line, "'" + key + "' is not a number");
  }
}

long KvFile::get_long(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e)
    throw ConfigError("missing key '" + key + "' in section [" + section + "]");
  try {
    size_t pos = 0;
    long v = std::stol(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(e->line, "'" + key + "' is not an integer");
  }
}

Vector KvFile::get_vector(const std::string& section, const std::string& key,
                          Index n) const {
  const Entry* e = find(section, key);
  if (!e)
    throw ConfigError("missing key '" + key + "' in section [" + section + "]");
  std::istringstream is(e->value);
  Vector v(n);
  for (Index i = 0; i < n; ++i)
    if (!(is >> v[i])) fail(e->line, "'" + key + "' needs " + std::to_string(n) + " numbers");
  double extra;
  if (is >> extra) fail(e->line, "'" + key + "' has trailing values");
  return v;
}

Matrix KvFile::get_matrix(const std::string& section, const std::string& key,
                          Index rows, Index cols) const {
  Vector flat = get_vector(section, key, rows * cols);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = flat[i * cols + j];  // row-major
  return m;
}

void KvFile::reject_unconsumed() const {
  for (const auto& [section, entries] : sections)
    for (const auto& [key, e] : entries)
      if (!e.consumed)
        fail(e.line, "unknown key '" + key + "'" +
                         (section.empty() ? "" : " in section [" + section + "]"));
}

void KvFile::require_format_version() const {
  const Entry* e = find("", "format_version");
  if (!e) throw ConfigError("missing format_version");
  if (trim(e->value) != "1") fail(e->line, "format_version must be 1");
}

SaddleProblem load_problem(const KvFile& kv) {
  Vector dims = kv.get_vector("", "dims", 2);
  Index d_x = static_cast<Index>(dims[0]);
  Index d_y = static_cast<Index>(dims[1]);
  if (d_x < 1 || d_y < 1) throw ConfigError("dims must be positive");

  SaddleProblem p;
  p.d_x = d_x;
  p.d_y = d_y;

  double mu = kv.get_double("g", "mu");
  double L = kv.get_double("g", "L");
  Matrix A = kv.get_matrix("g", "A", d_x, d_x);
  Vector a = kv.get_vector("g", "a", d_x);
  p.g = SmoothOracle::quadratic(std::move(A), std::move(a), mu, L);

  std::string variant = kv.get_string("fstar", "variant");
  if (variant == "zero") {
    p.fstar = DualOracle::zero(d_y);
  } else if (variant == "quadratic") {
    double mu_y = kv.get_double("fstar", "mu_y");
    Matrix B = kv.get_matrix("fstar", "B", d_y, d_y);
    Vector b = kv.get_vector("fstar", "b", d_y);
    p.fstar = DualOracle::quadratic(std::move(B), std::move(b), mu_y);
  } else {
    throw ConfigError("fstar variant must be zero or quadratic");
  }

  p.k.K = kv.get_matrix("k", "K", d_y, d_x);
  p.k.L_xy = kv.get_double("k", "L_xy");
  p.k.mu_xy = kv.get_double("k", "mu_xy");
  return p;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_matrix(const Matrix& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      if (!out.empty()) out += ' ';
      out += fmt(m(i, j));
    }
  return out;
}

}  // namespace

std::string problem_to_string(const SaddleProblem& p) {
  if (!p.g.quad) throw UnsupportedOracleError("problem_to_string: quadratic G required");
  std::ostringstream os;
  os << "format_version = 1\n";
  os << "dims = " << p.d_x << ' ' << p.d_y << "\n\n";
  os << "[g]\n";
  os << "mu = " << fmt(p.g.mu) << "\nL = " << fmt(p.g.L) << "\n";
  os << "A = " << fmt_matrix(p.g.quad->A) << "\n";
  os << "a = " << fmt_matrix(p.g.quad->a.transpose()) << "\n\n";
  os << "[fstar]\n";
  if (p.fstar.variant == DualVariant::Zero) {
    os << "variant = zero\n\n";
  } else if (p.fstar.variant == DualVariant::Quadratic) {
    os << "variant = quadratic\n";
    os << "mu_y = " << fmt(p.fstar.mu_y) << "\n";
    os << "B = " << fmt_matrix(p.fstar.quad->A) << "\n";
    os << "b = " << fmt_matrix(p.fstar.quad->a.transpose()) << "\n\n";
  } else {
    throw UnsupportedOracleError("problem_to_string: custom F* not serializable");
  }
  os << "[k]\n";
  os << "L_xy = " << fmt(p.k.L_xy) << "\nmu_xy = " << fmt(p.k.mu_xy) << "\n";
  os << "K = " << fmt_matrix(p.k.dense()) << "\n";
  return os.str();
}

}  // namespace saddlekit

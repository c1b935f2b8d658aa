#include "volsafe/polytope/hpolytope.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "volsafe/errors.hpp"
#include "volsafe/format.hpp"

namespace volsafe {

void HPolytope::validate() const {
  if (A.rows() != b.size()) throw InvalidArgument("HPolytope: A and b row counts differ");
  if (A_eq.rows() != b_eq.size()) throw InvalidArgument("HPolytope: A_eq and b_eq row counts differ");
  if (A_eq.rows() > 0 && A_eq.cols() != A.cols())
    throw InvalidArgument("HPolytope: A and A_eq column counts differ");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != A.cols())
    throw InvalidArgument("HPolytope: one label per column required");
}

double HPolytope::max_violation(const Eigen::VectorXd& z) const {
  double v = -std::numeric_limits<double>::infinity();
  if (A.rows() > 0) v = (A * z - b).maxCoeff();
  if (A_eq.rows() > 0) v = std::max(v, (A_eq * z - b_eq).cwiseAbs().maxCoeff());
  return v;
}

HPolytope HPolytope::translated(const Eigen::VectorXd& c) const {
  HPolytope p = *this;
  p.b = b - A * c;
  if (A_eq.rows() > 0) p.b_eq = b_eq - A_eq * c;
  return p;
}

void HPolytope::add_row(const Eigen::RowVectorXd& a, double rhs) {
  if (A.cols() == 0 && A.rows() == 0) A.resize(0, a.size());
  A.conservativeResize(A.rows() + 1, Eigen::NoChange);
  A.row(A.rows() - 1) = a;
  b.conservativeResize(b.size() + 1);
  b(b.size() - 1) = rhs;
}

void HPolytope::add_eq_row(const Eigen::RowVectorXd& a, double rhs) {
  if (A_eq.rows() == 0) A_eq.resize(0, a.size());
  A_eq.conservativeResize(A_eq.rows() + 1, Eigen::NoChange);
  A_eq.row(A_eq.rows() - 1) = a;
  b_eq.conservativeResize(b_eq.size() + 1);
  b_eq(b_eq.size() - 1) = rhs;
}

HPolytope make_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  const Eigen::Index n = lo.size();
  Eigen::MatrixXd a(2 * n, n);
  a << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs(2 * n);
  rhs << hi, -lo;
  return HPolytope(a, rhs);
}

namespace {

void write_row(std::ostream& out, double rhs, const Eigen::RowVectorXd& a) {
  out << format_number(rhs);
  for (Eigen::Index j = 0; j < a.size(); ++j) out << ' ' << format_number(a(j));
  out << '\n';
}

/// Next non-blank, non-comment line; false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

double parse_double(const std::string& tok, std::size_t line_no) {
  if (tok == "inf") return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "not a number: '" + tok + "'");
  }
}

}  // namespace

void write_hpolytope(std::ostream& out, const HPolytope& p) {
  p.validate();
  out << "hpolytope " << p.dim() << ' ' << p.n_ineq() << ' ' << p.n_eq() << '\n';
  out << "labels";
  if (p.labels.empty()) out << " -";
  for (const auto& l : p.labels) out << ' ' << l;
  out << '\n';
  for (int i = 0; i < p.n_ineq(); ++i) write_row(out, p.b(i), p.A.row(i));
  for (int i = 0; i < p.n_eq(); ++i) write_row(out, p.b_eq(i), p.A_eq.row(i));
}

HPolytope read_hpolytope(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw ParseError(0, "empty polytope file");

  std::istringstream header(line);
  std::string magic;
  long dim = -1, n_ineq = -1, n_eq = -1;
  header >> magic >> dim >> n_ineq >> n_eq;
  if (magic != "hpolytope" || header.fail() || dim < 1 || n_ineq < 0 || n_eq < 0)
    throw ParseError(line_no, "expected 'hpolytope <dim> <n_ineq> <n_eq>'");

  HPolytope p;
  p.A.resize(n_ineq, dim);
  p.b.resize(n_ineq);
  p.A_eq.resize(n_eq, dim);
  p.b_eq.resize(n_eq);

  if (!next_line(in, line, line_no)) throw ParseError(line_no, "missing labels line");
  {
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok != "labels") throw ParseError(line_no, "expected 'labels'");
    std::vector<std::string> names;
    while (ls >> tok) names.push_back(tok);
    if (!(names.size() == 1 && names[0] == "-")) {
      if (static_cast<long>(names.size()) != dim)
        throw ParseError(line_no, "expected " + std::to_string(dim) + " labels");
      p.labels = std::move(names);
    }
  }

  for (long r = 0; r < n_ineq + n_eq; ++r) {
    if (!next_line(in, line, line_no))
      throw ParseError(line_no, "expected " + std::to_string(n_ineq + n_eq) + " rows, got " +
                                    std::to_string(r));
    std::istringstream rs(line);
    std::vector<double> vals;
    for (std::string tok; rs >> tok;) vals.push_back(parse_double(tok, line_no));
    if (static_cast<long>(vals.size()) != dim + 1)
      throw ParseError(line_no, "expected " + std::to_string(dim + 1) + " values");
    const bool eq = r >= n_ineq;
    const long row = eq ? r - n_ineq : r;
    (eq ? p.b_eq : p.b)(row) = vals[0];
    for (long j = 0; j < dim; ++j) (eq ? p.A_eq : p.A)(row, j) = vals[j + 1];
  }
  if (next_line(in, line, line_no)) throw ParseError(line_no, "unexpected trailing content");
  return p;
}

}  // namespace volsafe

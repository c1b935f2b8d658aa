#include "volsafe/calibrate/trajectory.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "volsafe/errors.hpp"
#include "volsafe/format.hpp"

namespace volsafe {

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, delim)) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

double parse_cell(const std::vector<std::string>& cells, int col, const std::string& name,
                  std::size_t line_no) {
  if (col >= static_cast<int>(cells.size()))
    throw ParseError(line_no, "missing value for column '" + name + "'");
  const std::string& s = cells[col];
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw ParseError(line_no, "column '" + name + "': not a number: '" + s + "'");
  }
  if (!std::isfinite(v)) throw ParseError(line_no, "column '" + name + "': value is not finite");
  return v;
}

}  // namespace

std::vector<TrajectoryRecord> ingest_trajectory(std::istream& in, const TrajectoryFormat& fmt) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split(line, fmt.delimiter);
    break;
  }
  if (header.empty()) throw ParseError(0, "empty trajectory input");

  const int c_time = find_column(header, fmt.time);
  const int c_vl = find_column(header, fmt.leader_speed);
  const int c_vf = find_column(header, fmt.follower_speed);
  const int c_gap = find_column(header, fmt.gap);
  const int c_acc = find_column(header, fmt.follower_accel);
  for (const auto& [col, name] : {std::pair{c_time, fmt.time}, std::pair{c_vl, fmt.leader_speed},
                                  std::pair{c_vf, fmt.follower_speed}, std::pair{c_gap, fmt.gap}}) {
    if (col < 0) throw ParseError(line_no, "header lacks required column '" + name + "'");
  }

  std::vector<TrajectoryRecord> recs;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line, fmt.delimiter);
    TrajectoryRecord r;
    r.time = parse_cell(cells, c_time, fmt.time, line_no);
    r.leader_speed = parse_cell(cells, c_vl, fmt.leader_speed, line_no);
    r.follower_speed = parse_cell(cells, c_vf, fmt.follower_speed, line_no);
    r.gap = parse_cell(cells, c_gap, fmt.gap, line_no);
    if (c_acc >= 0) r.follower_accel = parse_cell(cells, c_acc, fmt.follower_accel, line_no);
    if (!(r.gap > 0.0)) throw ParseError(line_no, "gap must be positive");
    if (!recs.empty() && !(r.time > recs.back().time))
      throw ParseError(line_no, "time is not strictly increasing");
    recs.push_back(r);
  }
  if (recs.empty()) throw ParseError(line_no, "trajectory has no data rows");
  if (c_acc < 0) {
    if (recs.size() < 2) throw ParseError(line_no, "need two rows to derive accelerations");
    derive_accelerations(recs);
  }
  return recs;
}

void derive_accelerations(std::vector<TrajectoryRecord>& r) {
  const std::size_t n = r.size();
  if (n < 2) throw InvalidArgument("derive_accelerations: need at least two records");
  auto slope = [&](std::size_t i, std::size_t j) {
    return (r[j].follower_speed - r[i].follower_speed) / (r[j].time - r[i].time);
  };
  std::vector<double> a(n);
  a[0] = slope(0, 1);
  a[n - 1] = slope(n - 2, n - 1);
  for (std::size_t i = 1; i + 1 < n; ++i) a[i] = slope(i - 1, i + 1);
  for (std::size_t i = 0; i < n; ++i) r[i].follower_accel = a[i];
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& recs) {
  out << "time,leader_speed,follower_speed,gap,follower_accel\n";
  for (const auto& r : recs) {
    out << format_number(r.time) << ',' << format_number(r.leader_speed) << ','
        << format_number(r.follower_speed) << ',' << format_number(r.gap) << ','
        << format_number(r.follower_accel) << '\n';
  }
}

}  // namespace volsafe

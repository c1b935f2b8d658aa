#include "volsafe/polytope/vertex_enumeration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <unordered_map>

#include "volsafe/errors.hpp"
#include "volsafe/polytope/lp.hpp"

namespace volsafe {

namespace {

struct Ray {
  Eigen::VectorXd r;
  RowSet zeros;  // processed rows with h.r == 0
};

/// Greedy choice of `need` linearly independent rows of H, row 0 first.
std::vector<int> independent_rows(const Eigen::MatrixXd& H, int need) {
  std::vector<int> chosen;
  std::vector<Eigen::VectorXd> ortho;
  for (int i = 0; i < H.rows() && static_cast<int>(chosen.size()) < need; ++i) {
    Eigen::VectorXd v = H.row(i).transpose();
    for (const auto& q : ortho) v -= q.dot(v) * q;
    const double nv = v.norm();
    if (nv > 1e-8) {
      chosen.push_back(i);
      ortho.push_back(v / nv);
    }
  }
  return chosen;
}

}  // namespace

VertexSet enumerate_vertices(const HPolytope& p, const VeOptions& opt) {
  p.validate();
  if (p.n_eq() > 0) throw InvalidArgument("enumerate_vertices: project out equalities first");
  const int d = p.dim();
  if (d > opt.max_dimension)
    throw InfeasibleError("vertex enumeration refused: dimension " + std::to_string(d) +
                          " exceeds the limit " + std::to_string(opt.max_dimension));
  if (p.n_ineq() + 1 > kMaxVeRows)
    throw InfeasibleError("vertex enumeration refused: too many rows");

  const ChebyshevBall ball = chebyshev_center(p);
  const Eigen::VectorXd& c = ball.center;
  const Eigen::VectorXd bs = p.b - p.A * c;

  // homogenised rows h = (b_i, -a_i), normalised; row 0 is t >= 0
  const int D = d + 1;
  std::vector<int> source;  // H row -> polytope row (-1 for t >= 0)
  Eigen::MatrixXd H(p.n_ineq() + 1, D);
  H.row(0).setZero();
  H(0, 0) = 1.0;
  source.push_back(-1);
  int m = 1;
  for (int i = 0; i < p.n_ineq(); ++i) {
    Eigen::RowVectorXd h(D);
    h(0) = bs(i);
    h.tail(d) = -p.A.row(i);
    const double nrm = h.norm();
    if (p.A.row(i).norm() < 1e-14) continue;  // 0 <= b, satisfied at the center
    H.row(m++) = h / nrm;
    source.push_back(i);
  }
  H.conservativeResize(m, Eigen::NoChange);

  const std::vector<int> init = independent_rows(H, D);
  if (static_cast<int>(init.size()) < D)
    throw InfeasibleError("polytope is unbounded (constraint normals do not span the space)");

  Eigen::MatrixXd HK(D, D);
  for (int k = 0; k < D; ++k) HK.row(k) = H.row(init[k]);
  const Eigen::MatrixXd R0 = HK.inverse();
  std::vector<Ray> rays;
  for (int k = 0; k < D; ++k) {
    Ray ray{R0.col(k).normalized(), {}};
    for (int j = 0; j < D; ++j)
      if (j != k) ray.zeros.set(init[j]);
    rays.push_back(std::move(ray));
  }

  std::vector<char> used(m, 0);
  for (int k : init) used[k] = 1;
  const double tol = opt.tolerance;
  std::vector<double> s;
  for (int row = 0; row < m; ++row) {
    if (used[row]) continue;
    const Eigen::VectorXd h = H.row(row).transpose();
    s.resize(rays.size());
    std::vector<int> plus, minus;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      s[k] = h.dot(rays[k].r);
      if (s[k] > tol)
        plus.push_back(static_cast<int>(k));
      else if (s[k] < -tol)
        minus.push_back(static_cast<int>(k));
      else
        rays[k].zeros.set(row);
    }
    if (minus.empty()) continue;

    std::vector<Ray> fresh;
    for (int ip : plus) {
      for (int im : minus) {
        const RowSet common = rays[ip].zeros & rays[im].zeros;
        if (static_cast<int>(common.count()) < D - 2) continue;
        bool adjacent = true;
        for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
          if (static_cast<int>(k) == ip || static_cast<int>(k) == im) continue;
          if ((rays[k].zeros & common) == common) adjacent = false;
        }
        if (!adjacent) continue;
        Ray nr;
        nr.r = (s[ip] * rays[im].r - s[im] * rays[ip].r).normalized();
        nr.zeros = common;
        nr.zeros.set(row);
        fresh.push_back(std::move(nr));
      }
    }
    std::vector<Ray> kept;
    kept.reserve(rays.size() - minus.size() + fresh.size());
    for (std::size_t k = 0; k < rays.size(); ++k) {
      if (s[k] >= -tol) kept.push_back(std::move(rays[k]));
    }
    for (auto& r : fresh) kept.push_back(std::move(r));
    rays = std::move(kept);
    if (rays.size() > opt.max_vertices)
      throw InfeasibleError("vertex enumeration refused: more than " +
                            std::to_string(opt.max_vertices) + " intermediate rays");
  }

  // back to vertices; a ray with t == 0 is a recession direction
  std::vector<Eigen::VectorXd> pts;
  std::vector<RowSet> incs;
  pts.reserve(rays.size());
  for (const auto& ray : rays) {
    if (ray.r(0) <= tol) throw InfeasibleError("polytope is unbounded");
    pts.push_back(c + ray.r.tail(d) / ray.r(0));
    RowSet inc;
    for (int k = 1; k < m; ++k)
      if (ray.zeros.test(k)) inc.set(source[k]);
    incs.push_back(inc);
  }

  // merge near-duplicates (degenerate vertices reached along several
  // paths): sort on the first coordinate and compare within a window
  std::vector<int> order(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) order[k] = static_cast<int>(k);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return pts[a](0) < pts[b](0); });
  VertexSet out;
  for (int k : order) {
    int dup = -1;
    for (int j = static_cast<int>(out.points.size()) - 1; j >= 0; --j) {
      const Eigen::VectorXd& q = out.points[j];
      const double radius = opt.merge_distance * (1.0 + q.norm());
      if (pts[k](0) - q(0) > radius) break;
      if ((pts[k] - q).norm() <= radius) {
        dup = j;
        break;
      }
    }
    if (dup >= 0) {
      out.incidence[dup] |= incs[k];
      continue;
    }
    out.points.push_back(pts[k]);
    out.incidence.push_back(incs[k]);
  }
  return out;
}

namespace {

class ConeVolume {
 public:
  ConeVolume(const HPolytope& p, const VertexSet& vs) : p_(p), vs_(vs) {}

  double face_volume(const RowSet& closure, const std::vector<int>& verts, const Eigen::MatrixXd& Q) {
    const int k = static_cast<int>(Q.cols());
    if (k == 0) return 1.0;
    if (auto it = memo_.find(closure); it != memo_.end()) return it->second;

    // candidate facets: vertices of F tight at one more row, keyed by closure
    std::vector<RowSet> cand_rows;
    std::vector<std::vector<int>> cand_verts;
    std::vector<int> cand_row;
    for (int i = 0; i < p_.n_ineq(); ++i) {
      if (closure.test(i)) continue;
      std::vector<int> sub;
      RowSet rs;
      rs.set();
      for (int v : verts) {
        if (vs_.incidence[v].test(i)) {
          sub.push_back(v);
          rs &= vs_.incidence[v];
        }
      }
      if (sub.empty()) continue;
      if (std::find(cand_rows.begin(), cand_rows.end(), rs) != cand_rows.end()) continue;
      cand_rows.push_back(rs);
      cand_verts.push_back(std::move(sub));
      cand_row.push_back(i);
    }

    const int apex = verts.front();
    const Eigen::VectorXd& x0 = vs_.points[apex];
    double sum = 0.0;
    for (std::size_t g = 0; g < cand_rows.size(); ++g) {
      // maximal: no other candidate strictly contains it
      bool maximal = true;
      for (std::size_t h = 0; h < cand_rows.size() && maximal; ++h) {
        if (h != g && (cand_rows[h] & cand_rows[g]) == cand_rows[h] && cand_rows[h] != cand_rows[g])
          maximal = false;
      }
      if (!maximal) continue;
      if (std::find(cand_verts[g].begin(), cand_verts[g].end(), apex) != cand_verts[g].end())
        continue;
      const int i = cand_row[g];
      const Eigen::VectorXd w = Q.transpose() * p_.A.row(i).transpose();
      const double wn = w.norm();
      const double dist = (p_.b(i) - p_.A.row(i).dot(x0)) / wn;
      Eigen::MatrixXd Qg;
      if (k == 1) {
        Qg.resize(Q.rows(), 0);
      } else {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(w / wn);
        const Eigen::MatrixXd full = qr.householderQ();
        Qg = Q * full.rightCols(k - 1);
      }
      sum += dist * face_volume(cand_rows[g], cand_verts[g], Qg);
    }
    const double vol = sum / k;
    memo_.emplace(closure, vol);
    return vol;
  }

  std::size_t faces_visited() const noexcept { return memo_.size(); }

 private:
  const HPolytope& p_;
  const VertexSet& vs_;
  std::unordered_map<RowSet, double> memo_;
};

}  // namespace

VolumeEstimate ve_volume(const HPolytope& p, const VeOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const VertexSet vs = enumerate_vertices(p, opt);
  RowSet closure;
  closure.set();
  for (const auto& inc : vs.incidence) closure &= inc;
  std::vector<int> all(vs.points.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = static_cast<int>(k);
  ConeVolume cv(p, vs);
  const double v = cv.face_volume(closure, all, Eigen::MatrixXd::Identity(p.dim(), p.dim()));

  VolumeEstimate e;
  e.value = v;
  e.method = VolumeMethod::ve;
  e.vertices_found = vs.points.size();
  e.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return e;
}

}  // namespace volsafe

#include "objmap/recon/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "objmap/core/rng.hpp"

namespace objmap::recon {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

double TriangleMesh::area() const {
  double s = 0.0;
  for (const auto& t : triangles)
    s += triangle_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
  return s;
}

void TriangleMesh::append(const TriangleMesh& other) {
  const auto base = static_cast<std::uint32_t>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  for (const auto& t : other.triangles)
    triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
}

TriangleMesh TriangleMesh::transformed(const RigidPose& pose) const {
  TriangleMesh out = *this;
  for (Vec3& v : out.vertices) v = pose.apply(v);
  return out;
}

// Ericson, Real-Time Collision Detection, 5.1.5
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);

  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

TriangleMesh crop_mesh(const TriangleMesh& mesh, const OrientedBox& box) {
  TriangleMesh out;
  out.provenance_id = mesh.provenance_id;
  std::vector<std::int64_t> remap(mesh.vertices.size(), -1);
  for (const auto& t : mesh.triangles) {
    const Vec3 centroid =
        (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0;
    if (!box.contains(centroid, 1e-12)) continue;
    std::array<std::uint32_t, 3> nt{};
    for (int k = 0; k < 3; ++k) {
      if (remap[t[k]] < 0) {
        remap[t[k]] = static_cast<std::int64_t>(out.vertices.size());
        out.vertices.push_back(mesh.vertices[t[k]]);
      }
      nt[k] = static_cast<std::uint32_t>(remap[t[k]]);
    }
    out.triangles.push_back(nt);
  }
  return out;
}

PointCloud3 sample_mesh_points(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed) {
  if (mesh.empty()) throw Error("sample_mesh_points: empty mesh");
  std::vector<double> cum(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    total += triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    cum[i] = total;
  }
  if (total <= 0.0) throw Error("sample_mesh_points: zero-area mesh");

  Rng rng(seed);
  PointCloud3 out;
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rng.uniform() * total;
    const auto it = std::lower_bound(cum.begin(), cum.end(), r);
    const std::size_t ti = std::min<std::size_t>(it - cum.begin(), cum.size() - 1);
    const auto& t = mesh.triangles[ti];
    const double su = std::sqrt(rng.uniform());
    const double v = rng.uniform();
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    out.points.push_back(a * (1.0 - su) + b * (su * (1.0 - v)) + c * (su * v));
  }
  return out;
}

MeshDistanceIndex::MeshDistanceIndex(const TriangleMesh& mesh) {
  if (mesh.empty()) throw Error("MeshDistanceIndex: empty mesh");
  tris_.reserve(mesh.triangles.size());
  Vec3 lo = mesh.vertices[mesh.triangles[0][0]], hi = lo;
  for (const auto& t : mesh.triangles) {
    std::array<Vec3, 3> tri{mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    for (const Vec3& v : tri) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    tris_.push_back(tri);
  }
  origin_ = lo;
  extent_ = hi - lo;
  cell_ = std::max((hi - lo).norm() / 64.0, 1e-9);

  for (std::uint32_t i = 0; i < tris_.size(); ++i) {
    Vec3 tlo = tris_[i][0].cwiseMin(tris_[i][1]).cwiseMin(tris_[i][2]);
    Vec3 thi = tris_[i][0].cwiseMax(tris_[i][1]).cwiseMax(tris_[i][2]);
    long x0, y0, z0, x1, y1, z1;
    cell_of(tlo, x0, y0, z0);
    cell_of(thi, x1, y1, z1);
    for (long x = x0; x <= x1; ++x)
      for (long y = y0; y <= y1; ++y)
        for (long z = z0; z <= z1; ++z) cells_[key(x, y, z)].push_back(i);
  }
}

std::uint64_t MeshDistanceIndex::key(long ix, long iy, long iz) const {
  return hash_mix(hash_mix(static_cast<std::uint64_t>(ix), static_cast<std::uint64_t>(iy)),
                  static_cast<std::uint64_t>(iz));
}

void MeshDistanceIndex::cell_of(const Vec3& p, long& ix, long& iy, long& iz) const {
  ix = static_cast<long>(std::floor((p.x() - origin_.x()) / cell_));
  iy = static_cast<long>(std::floor((p.y() - origin_.y()) / cell_));
  iz = static_cast<long>(std::floor((p.z() - origin_.z()) / cell_));
}

double MeshDistanceIndex::tri_distance(std::uint32_t t, const Vec3& p) const {
  return (closest_point_on_triangle(p, tris_[t][0], tris_[t][1], tris_[t][2]) - p).norm();
}

double MeshDistanceIndex::distance(const Vec3& p) const {
  long qx, qy, qz;
  cell_of(p, qx, qy, qz);

  double far_sq = 0.0;
  for (int cx = 0; cx < 2; ++cx)
    for (int cy = 0; cy < 2; ++cy)
      for (int cz = 0; cz < 2; ++cz) {
        Vec3 corner = origin_ + Vec3(cx * extent_.x(), cy * extent_.y(), cz * extent_.z());
        far_sq = std::max(far_sq, (corner - p).squaredNorm());
      }
  const long r_max = static_cast<long>(std::ceil(std::sqrt(far_sq) / cell_)) + 2;

  double best = std::numeric_limits<double>::infinity();
  for (long r = 0; r <= r_max; ++r) {
    const double bound = (static_cast<double>(r) - 1.0) * cell_;
    if (bound > 0.0 && bound > best) break;
    for (long dx = -r; dx <= r; ++dx) {
      for (long dy = -r; dy <= r; ++dy) {
        const bool face = (std::labs(dx) == r || std::labs(dy) == r);
        const long step = face ? 1 : (2 * r > 0 ? 2 * r : 1);
        for (long dz = -r; dz <= r; dz += step) {
          auto it = cells_.find(key(qx + dx, qy + dy, qz + dz));
          if (it == cells_.end()) continue;
          for (std::uint32_t t : it->second) best = std::min(best, tri_distance(t, p));
        }
      }
    }
  }
  return best;
}

double MeshDistanceIndex::distance_brute(const Vec3& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t t = 0; t < tris_.size(); ++t) best = std::min(best, tri_distance(t, p));
  return best;
}

void save_obj(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  char buf[160];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    f << buf;
  }
  for (const auto& t : mesh.triangles)
    f << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  if (!f) throw IoError("write failed: " + path);
}

TriangleMesh load_obj(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path);
  TriangleMesh mesh;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "v") {
      Vec3 v;
      ss >> v.x() >> v.y() >> v.z();
      mesh.vertices.push_back(v);
    } else if (tok == "f") {
      std::array<std::uint32_t, 3> t{};
      for (int k = 0; k < 3; ++k) {
        std::string fv;
        ss >> fv;
        t[k] = static_cast<std::uint32_t>(std::stoul(fv)) - 1;
      }
      mesh.triangles.push_back(t);
    }
  }
  return mesh;
}

}  // namespace objmap::recon

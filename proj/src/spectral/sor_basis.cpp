#include "qlab/spectral/sor_basis.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qlab/common/errors.hpp"
#include "qlab/common/quadrature.hpp"

namespace qlab::spectral {

namespace {

double f_at(const geometry::Profile& p, double s) { return p.jet(s)[0]; }

double integrate(const geometry::Profile& p, double a, double b, bool inverse) {
  const GaussRule& g = gauss_legendre(8);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double f = f_at(p, mid + half * g.nodes[i]);
    s += g.weights[i] * (inverse ? 1.0 / f : f);
  }
  return half * s;
}

constexpr std::uint64_t kMagic = 0x51534f5242415331ULL;

}  // namespace

SorBasis::Block SorBasis::solve_block(const geometry::Profile& p, int m, int intervals, double mu_max,
                                      bool vectors) {
  const int N = intervals;
  const double L = p.length(), h = L / N;
  Block b;
  b.m = m;
  b.offset = m == 0 ? 0 : 1;
  const std::size_t last = m == 0 ? N : N - 1;
  b.rows = last - b.offset + 1;

  std::vector<double> W(b.rows), diag(b.rows), off(b.rows > 0 ? b.rows - 1 : 0);
  auto flux = [&](std::size_t i) {  // interface between nodes i and i + 1
    return f_at(p, (i + 0.5) * h) / h;
  };
  for (std::size_t r = 0; r < b.rows; ++r) {
    const std::size_t i = b.offset + r;
    const double lo = std::max(0.0, (i - 0.5) * h), hi = std::min(L, (i + 0.5) * h);
    W[r] = integrate(p, lo, hi, false);
    double a = 0.0;
    if (i > 0) a += flux(i - 1);
    if (i < static_cast<std::size_t>(N)) a += flux(i);
    if (m != 0) a += double(m) * m * integrate(p, lo, hi, true);
    diag[r] = a;
  }
  for (std::size_t r = 0; r + 1 < b.rows; ++r) off[r] = -flux(b.offset + r) / std::sqrt(W[r] * W[r + 1]);
  for (std::size_t r = 0; r < b.rows; ++r) diag[r] /= W[r];

  const lapack_int n = static_cast<lapack_int>(b.rows);
  lapack_int found = 0;
  std::vector<double> w(b.rows);
  std::vector<lapack_int> support(2 * b.rows);
  {
    std::vector<double> d = diag, e = off;
    e.push_back(0.0);
    double dummy = 0.0;
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'N', 'V', n, d.data(), e.data(), -1.0, mu_max, 0, 0,
                                           0.0, &found, w.data(), &dummy, 1, support.data());
    if (info != 0) throw NumericalError("dstevr failed (eigenvalue count)");
  }
  b.mu.assign(w.begin(), w.begin() + found);
  if (!vectors || found == 0) return b;

  std::vector<double> d = diag, e = off;
  e.push_back(0.0);
  std::vector<double> z(b.rows * static_cast<std::size_t>(found));
  lapack_int got = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, found, 0.0,
                                         &got, w.data(), z.data(), n, support.data());
  if (info != 0 || got != found) throw NumericalError("dstevr failed (eigenvectors)");
  b.mu.assign(w.begin(), w.begin() + got);
  // Undo the symmetrization, U = W^{-1/2} v, with a sign fixed by the first
  // significant entry.
  for (lapack_int c = 0; c < got; ++c) {
    double* col = z.data() + static_cast<std::size_t>(c) * b.rows;
    for (std::size_t r = 0; r < b.rows; ++r) col[r] /= std::sqrt(W[r]);
    double ref = 0.0;
    for (std::size_t r = 0; r < b.rows && ref == 0.0; ++r)
      if (std::abs(col[r]) > 1e-8) ref = col[r];
    if (ref < 0.0)
      for (std::size_t r = 0; r < b.rows; ++r) col[r] = -col[r];
  }
  b.vec = std::move(z);
  return b;
}

SorBasis::SorBasis(geometry::Profile profile, int m_max, double lambda_max, SorOptions opts)
    : profile_(std::move(profile)), m_requested_(m_max), m_max_(m_max), lambda_max_(lambda_max) {
  if (!(lambda_max > 0.0)) throw DomainError("SOR basis needs lambda_max > 0");
  const double L = profile_.length();
  for (int i = 0; i <= 1000; ++i) f_max_ = std::max(f_max_, f_at(profile_, L * i / 1000.0));
  intervals_ = opts.intervals > 0 ? opts.intervals
                                  : std::max(4000, static_cast<int>(std::ceil(100.0 * lambda_max * L / kPi)));
  if (intervals_ < 2000) throw PreconditionError("SOR basis needs at least 2000 radial intervals");

  const int m_cap = m_max >= 0 ? m_max : static_cast<int>(std::ceil(lambda_max * f_max_)) + 1;
  const double mu_max = lambda_max * lambda_max;
  double entries = 0.0;
  for (int m = 0; m <= m_cap; ++m) {
    Block b = solve_block(profile_, m, intervals_, mu_max, true);
    if (b.mu.empty()) {
      if (m_max < 0) break;
      continue;
    }
    entries += double(b.vec.size());
    if (entries > opts.max_entries)
      throw PreconditionError("SOR basis would store more than " + std::to_string(opts.max_entries) +
                              " eigenvector entries; lower lambda_max or m_max");
    if (opts.check_resolution) {
      const Block fine = solve_block(profile_, m, 2 * intervals_, mu_max * 1.05 + 1.0, false);
      for (std::size_t k = 0; k < b.mu.size() && k < fine.mu.size(); ++k) {
        const double rel = std::abs(fine.mu[k] - b.mu[k]) / std::max(1.0, std::abs(b.mu[k]));
        resolution_change_ = std::max(resolution_change_, rel);
      }
      if (fine.mu.size() < b.mu.size()) resolution_change_ = std::max(resolution_change_, 1.0);
      if (resolution_change_ > opts.resolution_tol) {
        std::ostringstream os;
        os << "SOR eigenvalues moved by " << resolution_change_ << " relative under refinement (m = " << m
           << ", intervals = " << intervals_ << ")";
        throw ResolutionError(os.str());
      }
    }
    blocks_.push_back(std::move(b));
  }
  m_max_ = blocks_.empty() ? 0 : blocks_.back().m;
  assemble(lambda_max);
}

void SorBasis::assemble(double) {
  const double L = profile_.length(), h = L / intervals_;
  nodes_.resize(intervals_ + 1);
  weights_.resize(intervals_ + 1);
  volume_ = 0.0;
  for (int i = 0; i <= intervals_; ++i) {
    nodes_[i] = i * h;
    weights_[i] = integrate(profile_, std::max(0.0, (i - 0.5) * h), std::min(L, (i + 0.5) * h), false);
    volume_ += 2.0 * kPi * weights_[i];
  }
  struct Item {
    double mu;
    int m;
    std::size_t block, column;
  };
  std::vector<Item> items;
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (std::size_t c = 0; c < blocks_[b].mu.size(); ++c) {
      const int m = blocks_[b].m;
      items.push_back({blocks_[b].mu[c], m, b, c});
      if (m != 0) items.push_back({blocks_[b].mu[c], -m, b, c});
    }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.mu != b.mu) return a.mu < b.mu;
    return std::abs(a.m) != std::abs(b.m) ? std::abs(a.m) < std::abs(b.m) : a.m > b.m;
  });
  lambda_.clear();
  entries_.clear();
  for (const Item& it : items) {
    lambda_.push_back(std::sqrt(std::max(0.0, it.mu)));
    entries_.push_back({it.m, it.block, it.column});
  }
}

std::string SorBasis::provenance() const {
  std::ostringstream os;
  os << "sor(" << profile_.name() << ",m_max=" << m_max_ << ",lambda_max=" << lambda_max_
     << ",intervals=" << intervals_ << ")";
  return os.str();
}

double SorBasis::profile(double s) const { return f_at(profile_, std::clamp(s, 0.0, profile_.length())); }

double SorBasis::radial(std::size_t j, double s) const {
  const Entry& e = entries_[j];
  const Block& b = blocks_[e.block];
  const double L = profile_.length(), h = L / intervals_;
  s = std::clamp(s, 0.0, L);
  std::size_t i = static_cast<std::size_t>(s / h);
  if (i >= static_cast<std::size_t>(intervals_)) i = intervals_ - 1;
  const double t = s / h - double(i);
  auto value = [&](std::size_t node) {
    if (node < b.offset || node >= b.offset + b.rows) return 0.0;
    return b.vec[e.column * b.rows + (node - b.offset)];
  };
  return (1.0 - t) * value(i) + t * value(i + 1);
}

std::vector<double> SorBasis::radial_values(std::size_t j) const {
  const Entry& e = entries_[j];
  const Block& b = blocks_[e.block];
  std::vector<double> out(nodes_.size(), 0.0);
  for (std::size_t r = 0; r < b.rows; ++r) out[b.offset + r] = b.vec[e.column * b.rows + r];
  return out;
}

cplx SorBasis::evaluate(std::size_t j, const Vec& x) const {
  if (j >= size()) throw DomainError("SOR basis index out of range");
  if (x.size() != 2) throw DomainError("SOR basis expects (s, theta)");
  return std::polar(radial(j, x(0)) / std::sqrt(2.0 * kPi), entries_[j].m * x(1));
}

cplx SorBasis::evaluate_sum(const CoefficientVector& f, const Vec& x) const {
  const std::size_t end = std::min(f.support_end(), size());
  cplx s(0.0, 0.0);
  for (std::size_t j = 0; j < end; ++j)
    if (f.c[j] != cplx(0.0, 0.0)) s += f.c[j] * evaluate(j, x);
  return s;
}

SampleGrid SorBasis::sample_grid(double lambda) const {
  const double L = profile_.length();
  const std::size_t ns = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(10.0 * lambda * L / (2.0 * kPi))));
  const std::size_t nt = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(10.0 * lambda * f_max_)));
  SampleGrid g;
  g.size = (ns + 1) * nt;
  g.spacing = L / double(ns);
  g.point = [ns, nt, L](std::size_t i) {
    Vec x(2);
    x << L * double(i / nt) / double(ns), 2.0 * kPi * double(i % nt) / double(nt);
    return x;
  };
  return g;
}

std::vector<Vec> SorBasis::neighbourhood(const Vec& x, double h, int radius) const {
  std::vector<Vec> out;
  const double L = profile_.length();
  const double f = std::max(profile(x(0)), h);
  for (int i = -radius; i <= radius; ++i)
    for (int k = -radius; k <= radius; ++k) {
      Vec y(2);
      y << std::clamp(x(0) + i * h, 0.0, L), x(1) + k * h / f;
      out.push_back(y);
    }
  return out;
}

std::vector<std::size_t> SorBasis::zonal_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < size(); ++j)
    if (entries_[j].m == 0) out.push_back(j);
  return out;
}

double SorBasis::zonal_value(std::size_t j, double s) const {
  if (entries_.at(j).m != 0) throw DomainError("not a zonal index");
  return radial(j, s) / std::sqrt(2.0 * kPi);
}

std::string SorBasis::key_for(const geometry::Profile& p, int m_max, double lambda_max, int intervals) {
  std::ostringstream os;
  os.precision(17);
  os << p.name() << ';' << p.bump_amplitude() << ';' << p.bump_center() << ';' << p.bump_width() << ';' << m_max
     << ';' << lambda_max << ';' << intervals;
  return os.str();
}

std::string SorBasis::cache_key() const { return key_for(profile_, m_requested_, lambda_max_, intervals_); }

void SorBasis::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write basis cache " + path);
  auto put = [&](const auto& v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); };
  auto put_vec = [&](const std::vector<double>& v) {
    put(static_cast<std::uint64_t>(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  const std::string key = cache_key();
  put(kMagic);
  put(static_cast<std::uint64_t>(key.size()));
  out.write(key.data(), static_cast<std::streamsize>(key.size()));
  put(m_max_);
  put(intervals_);
  put(lambda_max_);
  put(resolution_change_);
  put(static_cast<std::uint64_t>(blocks_.size()));
  for (const Block& b : blocks_) {
    put(b.m);
    put(static_cast<std::uint64_t>(b.offset));
    put(static_cast<std::uint64_t>(b.rows));
    put_vec(b.mu);
    put_vec(b.vec);
  }
}

SorBasis SorBasis::cached(const geometry::Profile& profile, int m_max, double lambda_max, const std::string& dir,
                          SorOptions opts) {
  const double L = profile.length();
  const int intervals =
      opts.intervals > 0 ? opts.intervals : std::max(4000, static_cast<int>(std::ceil(100.0 * lambda_max * L / kPi)));
  const std::string key = key_for(profile, m_max, lambda_max, intervals);
  const std::string path = (std::filesystem::path(dir) / ("sor_" + std::to_string(std::hash<std::string>{}(key)) +
                                                          ".bin")).string();
  std::ifstream in(path, std::ios::binary);
  if (in) {
    auto get = [&](auto& v) { in.read(reinterpret_cast<char*>(&v), sizeof(v)); };
    auto get_vec = [&](std::vector<double>& v) {
      std::uint64_t n = 0;
      get(n);
      v.resize(n);
      in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    };
    std::uint64_t magic = 0, klen = 0;
    get(magic);
    get(klen);
    std::string stored(klen, '\0');
    if (magic == kMagic && klen < 4096) in.read(stored.data(), static_cast<std::streamsize>(klen));
    if (magic == kMagic && stored == key) {
      SorBasis b;
      b.profile_ = profile;
      b.m_requested_ = m_max;
      b.lambda_max_ = lambda_max;
      get(b.m_max_);
      get(b.intervals_);
      get(b.lambda_max_);
      get(b.resolution_change_);
      std::uint64_t nb = 0;
      get(nb);
      for (std::uint64_t i = 0; i < nb && in; ++i) {
        Block blk;
        std::uint64_t off = 0, rows = 0;
        get(blk.m);
        get(off);
        get(rows);
        blk.offset = off;
        blk.rows = rows;
        get_vec(blk.mu);
        get_vec(blk.vec);
        b.blocks_.push_back(std::move(blk));
      }
      if (in) {
        for (int i = 0; i <= 1000; ++i) b.f_max_ = std::max(b.f_max_, f_at(profile, L * i / 1000.0));
        b.assemble(lambda_max);
        return b;
      }
    }
  }
  opts.intervals = intervals;
  SorBasis b(profile, m_max, lambda_max, opts);
  std::filesystem::create_directories(dir);
  b.save(path);
  return b;
}

}  // namespace qlab::spectral

namespace qlab::spectral {

std::vector<double> SorBasis::zonal_coefficients(const std::function<double(double)>& u) const {
  std::vector<double> us(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) us[i] = u(nodes_[i]) * weights_[i];
  std::vector<double> c;
  for (std::size_t j : zonal_indices()) {
    const Block& b = blocks_[entries_[j].block];
    const double* col = b.vec.data() + entries_[j].column * b.rows;
    double s = 0.0;
    for (std::size_t r = 0; r < b.rows; ++r) s += us[b.offset + r] * col[r];
    c.push_back(std::sqrt(2.0 * kPi) * s);
  }
  return c;
}

double SorBasis::zonal_mass(const std::function<double(double)>& u) const {
  double m = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double v = u(nodes_[i]);
    m += 2.0 * kPi * weights_[i] * v * v;
  }
  return m;
}

}  // namespace qlab::spectral

#include "qlab/spectral/torus_basis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

#include "qlab/common/errors.hpp"

namespace qlab::spectral {

namespace {

int smooth_fft_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Out-of-place backward 1D plan; FFTW planning is not thread safe.
class Plan1d {
 public:
  explicit Plan1d(int n) : n_(n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    plan_ = fftw_plan_dft_1d(n, a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(a);
    fftw_free(b);
    if (!plan_) throw NumericalError("FFTW planning failed");
  }
  ~Plan1d() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan1d(const Plan1d&) = delete;
  Plan1d& operator=(const Plan1d&) = delete;
  void run(fftw_complex* in, fftw_complex* out) const { fftw_execute_dft(plan_, in, out); }
  int size() const { return n_; }

 private:
  int n_;
  fftw_plan plan_;
};

struct Buffer {
  explicit Buffer(int n) : p(fftw_alloc_complex(n)), n(n) {}
  ~Buffer() { fftw_free(p); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  void zero() { std::fill_n(reinterpret_cast<double*>(p), 2 * n, 0.0); }
  fftw_complex* p;
  int n;
};

int wrap_index(int m, int n) {
  const int r = m % n;
  return r < 0 ? r + n : r;
}

}  // namespace

TorusBasis::TorusBasis(Mat lattice, double lambda_max) : n_(static_cast<int>(lattice.rows())), A_(std::move(lattice)) {
  if (A_.rows() != A_.cols() || n_ < 1) throw DomainError("torus lattice must be square");
  covol_ = std::abs(A_.determinant());
  if (!(covol_ > 0.0)) throw DomainError("degenerate torus lattice");
  if (!(lambda_max >= 0.0)) throw DomainError("lambda_max must be >= 0");
  if (n_ == 2 && lambda_max > 500.0) throw DomainError("torus basis supports lambda_max <= 500 in dimension 2");
  Ainv_t_ = A_.inverse().transpose();

  // |k|^2 = 4 pi^2 m^T G m. When G is a multiple of an integer matrix the
  // quadratic form is evaluated in integers so equal shells tie exactly.
  const Mat G = Ainv_t_.transpose() * Ainv_t_;
  const double g0 = G(0, 0);
  Eigen::MatrixXd Gi = G / g0;
  bool integral = true;
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k)
      if (std::abs(Gi(i, k) - std::round(Gi(i, k))) > 1e-12) integral = false;

  std::vector<int> bound(n_);
  for (int d = 0; d < n_; ++d)
    bound[d] = static_cast<int>(std::floor(lambda_max * A_.col(d).norm() / (2.0 * kPi))) + 1;

  std::vector<int> m(n_);
  for (int d = 0; d < n_; ++d) m[d] = -bound[d];
  std::vector<std::pair<double, std::vector<int>>> found;
  const double cap = lambda_max * (1.0 + 1e-12);
  while (true) {
    double lam;
    if (integral) {
      long long q = 0;
      for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) q += static_cast<long long>(std::llround(Gi(i, k))) * m[i] * m[k];
      lam = 2.0 * kPi * std::sqrt(g0 * double(q));
    } else {
      Vec mv(n_);
      for (int d = 0; d < n_; ++d) mv(d) = m[d];
      lam = 2.0 * kPi * std::sqrt(std::max(0.0, mv.dot(G * mv)));
    }
    if (lam <= cap) found.emplace_back(lam, m);
    int d = 0;
    while (d < n_ && ++m[d] > bound[d]) {
      m[d] = -bound[d];
      ++d;
    }
    if (d == n_) break;
  }
  std::sort(found.begin(), found.end());
  lambda_.reserve(found.size());
  labels_.reserve(found.size() * n_);
  for (const auto& [lam, lab] : found) {
    lambda_.push_back(lam);
    labels_.insert(labels_.end(), lab.begin(), lab.end());
  }
}

TorusBasis TorusBasis::square(double side, double lambda_max) {
  return TorusBasis(side * Mat::Identity(2, 2), lambda_max);
}

std::string TorusBasis::provenance() const {
  std::ostringstream os;
  os << "torus(n=" << n_ << ",covolume=" << covol_ << ",lambda_max=" << max_eigenvalue() << ")";
  return os.str();
}

std::vector<int> TorusBasis::label(std::size_t j) const {
  return std::vector<int>(labels_.begin() + j * n_, labels_.begin() + (j + 1) * n_);
}

Vec TorusBasis::wavevector(std::size_t j) const {
  Vec mv(n_);
  for (int d = 0; d < n_; ++d) mv(d) = labels_[j * n_ + d];
  return 2.0 * kPi * Ainv_t_ * mv;
}

cplx TorusBasis::evaluate(std::size_t j, const Vec& x) const {
  if (j >= size()) throw DomainError("torus basis index out of range");
  return std::polar(1.0 / std::sqrt(covol_), wavevector(j).dot(x));
}

double TorusBasis::density(std::size_t first, std::size_t last, const Vec&) const {
  last = std::min(last, size());
  return last > first ? double(last - first) / covol_ : 0.0;
}

cplx TorusBasis::evaluate_sum(const CoefficientVector& f, const Vec& x) const {
  const std::size_t end = std::min(f.support_end(), size());
  if (end == 0) return 0.0;
  // Phase 2 pi m.u with u = A^{-1} x; tables of e^{2 pi i m u_d} per axis.
  const Vec u = Ainv_t_.transpose() * x;
  std::vector<int> lo(n_, 0), hi(n_, 0);
  for (std::size_t j = 0; j < end; ++j)
    for (int d = 0; d < n_; ++d) {
      lo[d] = std::min(lo[d], labels_[j * n_ + d]);
      hi[d] = std::max(hi[d], labels_[j * n_ + d]);
    }
  std::vector<std::vector<cplx>> table(n_);
  for (int d = 0; d < n_; ++d) {
    table[d].resize(hi[d] - lo[d] + 1);
    for (int k = lo[d]; k <= hi[d]; ++k) table[d][k - lo[d]] = std::polar(1.0, 2.0 * kPi * k * u(d));
  }
  cplx s(0.0, 0.0);
  for (std::size_t j = 0; j < end; ++j) {
    if (f.c[j] == cplx(0.0, 0.0)) continue;
    cplx e = f.c[j];
    for (int d = 0; d < n_; ++d) e *= table[d][labels_[j * n_ + d] - lo[d]];
    s += e;
  }
  return s / std::sqrt(covol_);
}

std::vector<int> TorusBasis::grid_shape(double lambda, const CoefficientVector& f) const {
  const std::size_t end = std::min(f.support_end(), size());
  std::vector<int> shape(n_);
  for (int d = 0; d < n_; ++d) {
    int span = 0;
    for (std::size_t j = 0; j < end; ++j) span = std::max(span, std::abs(labels_[j * n_ + d]));
    const int need = static_cast<int>(std::ceil(10.0 * lambda * A_.col(d).norm() / (2.0 * kPi)));
    shape[d] = smooth_fft_size(std::max({need, 2 * span + 1, 16}));
  }
  return shape;
}

SampleGrid TorusBasis::sample_grid(double lambda) const {
  const std::vector<int> shape = grid_shape(lambda, CoefficientVector());
  SampleGrid g;
  g.size = 1;
  for (int s : shape) g.size *= static_cast<std::size_t>(s);
  g.spacing = kInf;
  for (int d = 0; d < n_; ++d) g.spacing = std::min(g.spacing, A_.col(d).norm() / shape[d]);
  const Mat A = A_;
  const int n = n_;
  g.point = [A, shape, n](std::size_t i) {
    Vec u(n);
    for (int d = 0; d < n; ++d) {
      u(d) = double(i % shape[d]) / shape[d];
      i /= shape[d];
    }
    return Vec(A * u);
  };
  return g;
}

std::vector<Vec> TorusBasis::neighbourhood(const Vec& x, double h, int radius) const {
  std::vector<Vec> out;
  const int side = 2 * radius + 1;
  std::size_t count = 1;
  for (int d = 0; d < n_; ++d) count *= side;
  for (std::size_t i = 0; i < count; ++i) {
    Vec y = x;
    std::size_t r = i;
    for (int d = 0; d < n_; ++d) {
      y(d) += h * (int(r % side) - radius);
      r /= side;
    }
    out.push_back(y);
  }
  return out;
}

SupResult TorusBasis::strip_sup(const CoefficientVector& f, int n1, int n2, Execution exec) const {
  if (n_ != 2) throw UnsupportedError("strip kernel is two dimensional");
  SupResult out;
  const std::size_t end = std::min(f.support_end(), size());
  if (end == 0) return out;

  int m1 = 0;
  for (std::size_t j = 0; j < end; ++j) m1 = std::max(m1, std::abs(labels_[2 * j]));
  if (2 * m1 + 1 > n1) throw DomainError("strip grid too coarse for the spectrum");
  const int rows = 2 * m1 + 1;

  // Stage 1: rows m_1 = const, transformed along axis 2.
  std::vector<std::vector<std::pair<int, cplx>>> bucket(rows);
  for (std::size_t j = 0; j < end; ++j)
    if (f.c[j] != cplx(0.0, 0.0)) bucket[labels_[2 * j] + m1].emplace_back(labels_[2 * j + 1], f.c[j]);
  std::vector<int> active;
  for (int r = 0; r < rows; ++r)
    if (!bucket[r].empty()) active.push_back(r);

  const Plan1d plan2(n2), plan1(n1);
  std::vector<cplx> strip(active.size() * static_cast<std::size_t>(n2));
  for_each_index(active.size(), exec, [&](std::size_t a) {
    Buffer in(n2), res(n2);
    in.zero();
    for (const auto& [m2, c] : bucket[active[a]]) {
      const int k = wrap_index(m2, n2);
      in.p[k][0] += c.real();
      in.p[k][1] += c.imag();
    }
    plan2.run(in.p, res.p);
    for (int i = 0; i < n2; ++i) strip[a * n2 + i] = cplx(res.p[i][0], res.p[i][1]);
  });

  // Stage 2: per column of the grid, transform along axis 1 and reduce.
  std::vector<double> col_max(n2, 0.0);
  std::vector<int> col_arg(n2, 0);
  for_each_index(static_cast<std::size_t>(n2), exec, [&](std::size_t i2) {
    Buffer in(n1), res(n1);
    in.zero();
    for (std::size_t a = 0; a < active.size(); ++a) {
      const int k = wrap_index(active[a] - m1, n1);
      const cplx v = strip[a * n2 + i2];
      in.p[k][0] += v.real();
      in.p[k][1] += v.imag();
    }
    plan1.run(in.p, res.p);
    double best = -1.0;
    int arg = 0;
    for (int i = 0; i < n1; ++i) {
      const double v = std::hypot(res.p[i][0], res.p[i][1]);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    col_max[i2] = best;
    col_arg[i2] = arg;
  });
  const auto it = std::max_element(col_max.begin(), col_max.end());
  const int i2 = static_cast<int>(it - col_max.begin());
  Vec u(2);
  u << double(col_arg[i2]) / n1, double(i2) / n2;
  out.value = *it / std::sqrt(covol_);
  out.argmax = A_ * u;
  out.points = static_cast<std::size_t>(n1) * n2;
  return out;
}

SupResult TorusBasis::direct_sup(const CoefficientVector& f, int n1, int n2, Execution exec) const {
  if (n_ != 2) throw UnsupportedError("direct grid reference is two dimensional");
  std::vector<double> vals(static_cast<std::size_t>(n1) * n2);
  for_each_index(vals.size(), exec, [&](std::size_t i) {
    Vec u(2);
    u << double(i % n1) / n1, double(i / n1) / n2;
    vals[i] = std::abs(evaluate_sum(f, A_ * u));
  });
  SupResult out;
  const auto it = std::max_element(vals.begin(), vals.end());
  const std::size_t i = static_cast<std::size_t>(it - vals.begin());
  Vec u(2);
  u << double(i % n1) / n1, double(i / n1) / n2;
  out.value = *it;
  out.argmax = A_ * u;
  out.points = vals.size();
  return out;
}

SupResult TorusBasis::sup(const CoefficientVector& f, Execution exec) const {
  if (n_ != 2) return SpectralBasis::sup(f, exec);
  const std::size_t end = std::min(f.support_end(), size());
  if (end == 0) return {};
  const std::vector<int> shape = grid_shape(std::max(eigenvalue(end - 1), 1.0), f);
  SupResult out = strip_sup(f, shape[0], shape[1], exec);
  const double h = 0.25 * std::min(A_.col(0).norm() / shape[0], A_.col(1).norm() / shape[1]);
  for (const Vec& y : neighbourhood(out.argmax, h, 2)) {
    const double v = std::abs(evaluate_sum(f, y));
    ++out.points;
    if (v > out.value) {
      out.value = v;
      out.argmax = y;
    }
  }
  return out;
}

}  // namespace qlab::spectral

#include "emtlab/numerics.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace emtlab::numerics {

namespace {

RVec shifted(RVec x, int axis, double delta) {
  x[axis] += delta;
  return x;
}

RVec eval_at(const Field& f, const RVec& x, int axis, int step_units, double h) {
  try {
    return f(shifted(x, axis, step_units * h));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorKind::parameter,
         std::string("field evaluation failed at stencil offset axis=") + std::to_string(axis) +
             " step=" + std::to_string(step_units) + ": " + e.what());
  }
}

}  // namespace

RMat fd_grad(const Field& f, const RVec& x, const Stencil& st) {
  const int m = static_cast<int>(x.size());
  RVec f0 = f(x);
  const int k = static_cast<int>(f0.size());
  RMat g(k, m);
  for (int a = 0; a < m; ++a) {
    for (auto [off, w] : st.first()) {
      RVec fv = eval_at(f, x, a, off, st.h);
      for (int i = 0; i < k; ++i) g(i, a) += w * fv[i];
    }
    for (int i = 0; i < k; ++i) g(i, a) /= st.h;
  }
  return g;
}

std::vector<RMat> fd_hess(const Field& f, const RVec& x, const Stencil& st) {
  const int m = static_cast<int>(x.size());
  RVec f0 = f(x);
  const int k = static_cast<int>(f0.size());
  std::vector<RMat> hess(k, RMat(m, m));
  const double h2 = st.h * st.h;
  for (int a = 0; a < m; ++a) {
    for (auto [off, w] : st.second()) {
      RVec fv = (off == 0) ? f0 : eval_at(f, x, a, off, st.h);
      for (int i = 0; i < k; ++i) hess[i](a, a) += w * fv[i];
    }
    for (int i = 0; i < k; ++i) hess[i](a, a) /= h2;
  }
  // mixed partials as nested first-derivative stencils
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      RVec acc(k, 0.0);
      for (auto [oa, wa] : st.first())
        for (auto [ob, wb] : st.first()) {
          RVec xx = x;
          xx[a] += oa * st.h;
          xx[b] += ob * st.h;
          RVec fv = f(xx);
          for (int i = 0; i < k; ++i) acc[i] += wa * wb * fv[i];
        }
      for (int i = 0; i < k; ++i) {
        hess[i](a, b) = acc[i] / h2;
        hess[i](b, a) = hess[i](a, b);
      }
    }
  return hess;
}

Jet fd_jet(const Field& f, const RVec& x, const Stencil& st, int depth) {
  Jet jet;
  jet.value = f(x);
  jet.grad = fd_grad(f, x, st);
  if (depth >= 2) jet.hess = fd_hess(f, x, st);
  return jet;
}

std::vector<RVec> sphere_directions(int dim, int n, uint64_t seed) {
  std::vector<RVec> dirs;
  dirs.reserve(n);
  if (dim == 1) {
    dirs.push_back({1.0});
    if (n > 1) dirs.push_back({-1.0});
    return dirs;
  }
  if (dim == 2) {
    for (int i = 0; i < n; ++i) {
      double phi = 2 * M_PI * i / n;
      dirs.push_back({std::cos(phi), std::sin(phi)});
    }
    return dirs;
  }
  if (dim == 3) {
    // Fibonacci lattice
    const double golden = (1 + std::sqrt(5.0)) / 2;
    for (int i = 0; i < n; ++i) {
      double z = 1.0 - (2.0 * i + 1.0) / n;
      double r = std::sqrt(std::max(0.0, 1 - z * z));
      double phi = 2 * M_PI * i / golden;
      dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return dirs;
  }
  Rng rng(seed);
  while (static_cast<int>(dirs.size()) < n) {
    RVec v = rng.normal_vec(dim);
    double nv = norm2(v);
    if (nv < 1e-8) continue;
    for (auto& x : v) x /= nv;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

SampleMin sample_min(const std::function<double(const RVec&)>& fn, int dim, int n_dirs,
                     int n_radii, bool sphere_only, uint64_t seed) {
  if (n_dirs < 1) fail(ErrorKind::parameter, "sample_min: need at least one direction");
  auto dirs = sphere_directions(dim, n_dirs, seed);
  SampleMin best{std::numeric_limits<double>::infinity(), RVec(dim, 0.0)};
  auto consider = [&](const RVec& xi) {
    double v = fn(xi);
    if (v < best.value) {
      best.value = v;
      best.argmin = xi;
    }
  };
  if (!sphere_only) consider(RVec(dim, 0.0));
  for (const auto& d : dirs) {
    if (sphere_only) {
      consider(d);
      continue;
    }
    for (int r = 1; r < n_radii; ++r) {
      double rad = static_cast<double>(r) / (n_radii - 1);
      RVec xi(dim);
      for (int i = 0; i < dim; ++i) xi[i] = rad * d[i];
      consider(xi);
    }
  }
  return best;
}

int default_thread_count() {
  if (const char* env = std::getenv("EMTLAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

void parallel_for(int n, const std::function<void(int)>& fn, int threads) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int nw = std::min(threads, n);
  pool.reserve(nw);
  for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace emtlab::numerics

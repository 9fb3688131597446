#include "levilab/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "levilab/errors.hpp"

namespace levilab {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Observed {
  std::vector<double> min, max;
  explicit Observed(std::size_t n)
      : min(n, std::numeric_limits<double>::infinity()), max(n, -std::numeric_limits<double>::infinity()) {}
  void observe(std::size_t i, double v) {
    min[i] = std::min(min[i], v);
    max[i] = std::max(max[i], v);
  }
};

struct Accumulator {
  std::vector<CompensatedSum> sum, sumsq;
  Observed obs;
  std::uint64_t directions = 0;
  explicit Accumulator(std::size_t n) : sum(n), sumsq(n), obs(n) {}
};

// g(omega) for every field; the rule multiplies by the angular weight.
using DirectionKernel = std::function<void(std::span<const double> omega, std::span<double> g, Observed& obs)>;

struct SphereRun {
  std::vector<double> value;
  std::vector<double> stderr_mc;  // MC only
  Observed obs;
  std::uint64_t directions;
};

[[noreturn]] void rethrow_with_context(const Error& e, const std::string& ctx) {
  const std::string msg = std::string(e.what()) + " " + ctx;
  if (dynamic_cast<const NotStarShapedError*>(&e)) throw NotStarShapedError(msg);
  if (dynamic_cast<const TransversalityError*>(&e)) throw TransversalityError(msg);
  if (dynamic_cast<const DegeneracyError*>(&e)) throw DegeneracyError(msg);
  if (dynamic_cast<const DomainError*>(&e)) throw DomainError(msg);
  if (dynamic_cast<const HypothesisError*>(&e)) throw HypothesisError(msg);
  if (dynamic_cast<const RangeError*>(&e)) throw RangeError(msg);
  if (dynamic_cast<const ArgumentError*>(&e)) throw ArgumentError(msg);
  throw Error(e.kind(), msg);
}

std::string direction_context(std::span<const double> omega) {
  std::ostringstream os;
  os.precision(17);
  os << "[direction";
  for (double w : omega) os << ' ' << w;
  os << ']';
  return os.str();
}

// Runs `chunk_fn(c, acc)` for every chunk c in [0, nchunks) on `threads`
// workers; accumulators are merged in chunk order.
Accumulator run_chunks(std::size_t nchunks, std::size_t nfields, unsigned threads,
                       const std::function<void(std::size_t, Accumulator&)>& chunk_fn) {
  std::vector<Accumulator> partial(nchunks, Accumulator(nfields));
  std::vector<std::exception_ptr> errors(nchunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < nchunks; c = next++) {
      try {
        chunk_fn(c, partial[c]);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  const unsigned nt = std::max(1u, std::min<unsigned>(threads, unsigned(nchunks)));
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Accumulator total(nfields);
  for (const Accumulator& a : partial) {
    for (std::size_t i = 0; i < nfields; ++i) {
      total.sum[i].add(a.sum[i].value());
      total.sumsq[i].add(a.sumsq[i].value());
      total.obs.observe(i, a.obs.min[i]);
      total.obs.observe(i, a.obs.max[i]);
    }
    total.directions += a.directions;
  }
  return total;
}

SphereRun run_product(int d, int order, std::size_t nfields, unsigned threads, const DirectionKernel& kernel) {
  const GaussRule g = gauss_legendre(order);
  const int nangles = d - 1;  // d-2 polar angles (Gauss-Legendre), one azimuth (trapezoid)
  std::vector<double> theta(static_cast<std::size_t>(order)), wtheta(static_cast<std::size_t>(order)), phi(static_cast<std::size_t>(order)),
      wphi(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    theta[std::size_t(i)] = 0.5 * std::numbers::pi * (1.0 + g.nodes[std::size_t(i)]);
    wtheta[std::size_t(i)] = 0.5 * std::numbers::pi * g.weights[std::size_t(i)];
    phi[std::size_t(i)] = 2.0 * std::numbers::pi * (i + 0.5) / order;
    wphi[std::size_t(i)] = 2.0 * std::numbers::pi / order;
  }
  std::uint64_t inner = 1;
  for (int a = 1; a < nangles; ++a) inner *= std::uint64_t(order);

  auto chunk = [&](std::size_t c, Accumulator& acc) {
    std::vector<int> idx(std::size_t(nangles), 0);
    idx[0] = int(c);
    std::vector<double> omega(static_cast<std::size_t>(d)), gvals(nfields);
    for (std::uint64_t t = 0; t < inner; ++t) {
      std::uint64_t rest = t;
      for (int a = nangles - 1; a >= 1; --a) {
        idx[std::size_t(a)] = int(rest % std::uint64_t(order));
        rest /= std::uint64_t(order);
      }
      double w = 1.0;
      double sin_prod = 1.0;
      for (int a = 0; a < d - 2; ++a) {
        const double th = theta[std::size_t(idx[std::size_t(a)])];
        omega[std::size_t(a)] = sin_prod * std::cos(th);
        const double s = std::sin(th);
        w *= wtheta[std::size_t(idx[std::size_t(a)])] * std::pow(s, d - 2 - a);
        sin_prod *= s;
      }
      const double ph = phi[std::size_t(idx[std::size_t(nangles - 1)])];
      omega[std::size_t(d - 2)] = sin_prod * std::cos(ph);
      omega[std::size_t(d - 1)] = sin_prod * std::sin(ph);
      w *= wphi[std::size_t(idx[std::size_t(nangles - 1)])];

      try {
        kernel(omega, gvals, acc.obs);
      } catch (const Error& e) {
        rethrow_with_context(e, direction_context(omega));
      }
      for (std::size_t i = 0; i < nfields; ++i) acc.sum[i].add(w * gvals[i]);
      ++acc.directions;
    }
  };
  Accumulator total = run_chunks(std::size_t(order), nfields, threads, chunk);
  SphereRun r{std::vector<double>(nfields), {}, total.obs, total.directions};
  for (std::size_t i = 0; i < nfields; ++i) r.value[i] = total.sum[i].value();
  return r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SphereRun run_monte_carlo(int d, const MonteCarlo& mc, std::size_t nfields, unsigned threads,
                          const DirectionKernel& kernel) {
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t nchunks = (mc.samples + kChunk - 1) / kChunk;
  auto chunk = [&](std::size_t c, Accumulator& acc) {
    std::mt19937_64 rng(splitmix64(mc.seed ^ splitmix64(std::uint64_t(c))));
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::uint64_t begin = std::uint64_t(c) * kChunk;
    const std::uint64_t end = std::min(mc.samples, begin + kChunk);
    std::vector<double> omega(static_cast<std::size_t>(d)), gvals(nfields);
    for (std::uint64_t s = begin; s < end; ++s) {
      double norm = 0.0;
      do {
        norm = 0.0;
        for (auto& w : omega) {
          w = normal(rng);
          norm += w * w;
        }
      } while (norm < 1e-300);
      norm = std::sqrt(norm);
      for (auto& w : omega) w /= norm;
      try {
        kernel(omega, gvals, acc.obs);
      } catch (const Error& e) {
        rethrow_with_context(e, direction_context(omega));
      }
      for (std::size_t i = 0; i < nfields; ++i) {
        acc.sum[i].add(gvals[i]);
        acc.sumsq[i].add(gvals[i] * gvals[i]);
      }
      ++acc.directions;
    }
  };
  Accumulator total = run_chunks(std::size_t(nchunks), nfields, threads, chunk);
  const double area = unit_sphere_area(d);
  const double N = double(mc.samples);
  SphereRun r{std::vector<double>(nfields), std::vector<double>(nfields), total.obs, total.directions};
  for (std::size_t i = 0; i < nfields; ++i) {
    const double mean = total.sum[i].value() / N;
    const double var = std::max(0.0, total.sumsq[i].value() / N - mean * mean) * N / std::max(1.0, N - 1.0);
    r.value[i] = area * mean;
    r.stderr_mc[i] = area * std::sqrt(var / N);
  }
  return r;
}

// Integrates the kernel over S^{d-1}; nodes_per_direction scales nodes_used.
std::vector<FieldSummary> integrate_sphere(int d, std::size_t nfields, const QuadratureSpec& q,
                                           const std::string& method, std::uint64_t nodes_per_direction,
                                           const std::function<DirectionKernel(int radial_order)>& make_kernel) {
  std::vector<FieldSummary> out(nfields);
  if (const auto* pg = std::get_if<ProductGauss>(&q.method)) {
    const int radial = pg->radial_order > 0 ? pg->radial_order : pg->order;
    const SphereRun main = run_product(d, pg->order, nfields, q.threads, make_kernel(radial));
    const int lower = std::max(2, pg->order - 4);
    std::vector<double> coarse;
    if (lower < pg->order) {
      const int coarse_radial = pg->radial_order > 0 ? std::max(2, pg->radial_order - 4) : lower;
      coarse = run_product(d, lower, nfields, q.threads, make_kernel(coarse_radial)).value;
    }
    for (std::size_t i = 0; i < nfields; ++i) {
      out[i].integral = {main.value[i],
                         coarse.empty() ? std::abs(main.value[i]) : std::abs(main.value[i] - coarse[i]),
                         main.directions * nodes_per_direction, method};
      out[i].min = main.obs.min[i];
      out[i].max = main.obs.max[i];
    }
  } else {
    const auto& mc = std::get<MonteCarlo>(q.method);
    const SphereRun run = run_monte_carlo(d, mc, nfields, q.threads, make_kernel(mc.radial_order));
    for (std::size_t i = 0; i < nfields; ++i) {
      out[i].integral = {run.value[i], run.stderr_mc[i], run.directions * nodes_per_direction, method};
      out[i].min = run.obs.min[i];
      out[i].max = run.obs.max[i];
    }
  }
  return out;
}

Point ray_point(const SurfaceSpec& spec, std::span<const double> v, double t) {
  std::vector<double> x(v.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = spec.center()[int(i)] + t * v[i];
  return Point(std::move(x));
}

struct Frame {
  Eigen::MatrixXd m;
  double det = 1.0;
  bool affine = false;

  void apply(std::span<const double> omega, std::vector<double>& v) const {
    const Eigen::Index d = m.rows();
    v.resize(std::size_t(d));
    for (Eigen::Index r = 0; r < d; ++r) {
      double acc = 0.0;
      for (Eigen::Index c = 0; c < d; ++c) acc += m(r, c) * omega[std::size_t(c)];
      v[std::size_t(r)] = acc;
    }
  }
};

Frame resolve_frame(const SurfaceSpec& spec, StarFrame mode) {
  const int d = spec.real_dim();
  Frame fr{Eigen::MatrixXd::Identity(d, d), 1.0, false};
  if (mode == StarFrame::identity) return fr;
  const Jet2 j = spec.jet(spec.center());
  if (!(j.value < 0.0)) return fr;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * j.rhess);
  if (es.info() != Eigen::Success) return fr;
  const Eigen::VectorXd lam = es.eigenvalues();
  if (!(lam.minCoeff() > 0.0) || lam.maxCoeff() > 1e8 * lam.minCoeff()) return fr;
  const double s = std::sqrt(-j.value);
  const Eigen::VectorXd inv_root = lam.cwiseSqrt().cwiseInverse() * s;
  fr.m = es.eigenvectors() * inv_root.asDiagonal() * es.eigenvectors().transpose();
  fr.det = inv_root.prod();
  fr.affine = true;
  return fr;
}

std::string method_text(const QuadratureSpec& q, const Frame& fr) {
  std::string m = q.describe();
  if (q.frame == StarFrame::automatic && !fr.affine) m += "(identity fallback)";
  return m;
}

void prepare(const SurfaceSpec& spec, const QuadratureSpec& q) {
  q.validate();
  if (!spec.star_shaped())
    throw NotStarShapedError("quadrature: " + spec.family_name() + " surface is not star-shaped");
}

}  // namespace

std::string QuadratureSpec::describe() const {
  std::ostringstream os;
  if (const auto* pg = std::get_if<ProductGauss>(&method)) {
    os << "gauss:order=" << pg->order;
    if (pg->radial_order > 0) os << ",radial=" << pg->radial_order;
  } else {
    const auto& mc = std::get<MonteCarlo>(method);
    os << "mc:samples=" << mc.samples << ",seed=" << mc.seed << ",radial=" << mc.radial_order;
  }
  os << ",frame=" << (frame == StarFrame::automatic ? "auto" : "identity");
  return os.str();
}

void QuadratureSpec::validate() const {
  if (const auto* pg = std::get_if<ProductGauss>(&method)) {
    if (pg->order < 2) throw ArgumentError("quadrature: Gauss order must be >= 2");
    if (pg->radial_order != 0 && pg->radial_order < 2)
      throw ArgumentError("quadrature: radial order must be >= 2");
  } else {
    const auto& mc = std::get<MonteCarlo>(method);
    if (mc.samples < 1000) throw ArgumentError("quadrature: Monte Carlo needs >= 1000 samples");
    if (mc.radial_order < 2) throw ArgumentError("quadrature: radial order must be >= 2");
  }
}

QuadratureSpec default_quadrature(int n) {
  QuadratureSpec q;
  q.method = ProductGauss{n == 1 ? 24 : (n == 2 ? 12 : 8), 0};
  return q;
}

GaussRule gauss_legendre(int order) {
  if (order < 1) throw ArgumentError("gauss_legendre: order must be >= 1");
  GaussRule r{std::vector<double>(static_cast<std::size_t>(order)), std::vector<double>(static_cast<std::size_t>(order))};
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (order == 1) p0 = 1.0;
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[std::size_t(i)] = -x;
    r.nodes[std::size_t(order - 1 - i)] = x;
    r.weights[std::size_t(i)] = w;
    r.weights[std::size_t(order - 1 - i)] = w;
  }
  if (order % 2 == 1) r.nodes[std::size_t(order / 2)] = 0.0;
  return r;
}

double unit_sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

std::uint64_t product_node_count(int d, int order) {
  std::uint64_t n = 1;
  for (int a = 0; a < d - 1; ++a) n *= std::uint64_t(order);
  return n;
}

Eigen::MatrixXd star_frame(const SurfaceSpec& spec, StarFrame frame) { return resolve_frame(spec, frame).m; }

std::vector<FieldSummary> surface_integrals(const SurfaceSpec& spec, std::size_t nfields,
                                            const BoundaryField& field, const QuadratureSpec& q) {
  prepare(spec, q);
  const int d = spec.real_dim();
  const Frame fr = resolve_frame(spec, q.frame);
  auto make_kernel = [&](int) -> DirectionKernel {
    return [&spec, &field, &fr, nfields, d](std::span<const double> omega, std::span<double> g, Observed& obs) {
      std::vector<double> v;
      fr.apply(omega, v);
      const RadialHit hit = radial_root(spec, v);
      const Point x = ray_point(spec, v, hit.rho);
      const Jet2 jet = spec.jet(x);
      const double jac = fr.det * std::pow(hit.rho, d - 1) * jet.rgrad.norm() / hit.grad_dot_direction;
      field(BoundarySample{v, hit.rho, x, jet}, g);
      for (std::size_t i = 0; i < nfields; ++i) {
        obs.observe(i, g[i]);
        g[i] *= jac;
      }
    };
  };
  return integrate_sphere(d, nfields, q, method_text(q, fr), 1, make_kernel);
}

IntegralResult surface_integral(const SurfaceSpec& spec, const std::function<double(const BoundarySample&)>& field,
                                const QuadratureSpec& q) {
  return surface_integrals(
             spec, 1, [&](const BoundarySample& s, std::span<double> out) { out[0] = field(s); }, q)[0]
      .integral;
}

IntegralResult volume(const SurfaceSpec& spec, const QuadratureSpec& q) {
  prepare(spec, q);
  const int d = spec.real_dim();
  const Frame fr = resolve_frame(spec, q.frame);
  auto make_kernel = [&](int) -> DirectionKernel {
    return [&spec, &fr, d](std::span<const double> omega, std::span<double> g, Observed& obs) {
      std::vector<double> v;
      fr.apply(omega, v);
      const RadialHit hit = radial_root(spec, v);
      g[0] = fr.det * std::pow(hit.rho, d) / d;
      obs.observe(0, hit.rho);
    };
  };
  return integrate_sphere(d, 1, q, method_text(q, fr), 1, make_kernel)[0].integral;
}

std::vector<FieldSummary> bulk_integrals(const SurfaceSpec& spec, std::size_t nfields,
                                         const InteriorField& field, const QuadratureSpec& q) {
  prepare(spec, q);
  const int d = spec.real_dim();
  const Frame fr = resolve_frame(spec, q.frame);
  auto make_kernel = [&](int radial_order) -> DirectionKernel {
    GaussRule rule = gauss_legendre(radial_order);
    return [&spec, &field, &fr, nfields, d, rule](std::span<const double> omega, std::span<double> g,
                                                  Observed& obs) {
      std::vector<double> v;
      fr.apply(omega, v);
      const RadialHit hit = radial_root(spec, v);
      std::vector<double> vals(nfields);
      std::fill(g.begin(), g.end(), 0.0);
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double r = 0.5 * hit.rho * (1.0 + rule.nodes[k]);
        const double w = fr.det * 0.5 * hit.rho * rule.weights[k] * std::pow(r, d - 1);
        const Point x = ray_point(spec, v, r);
        const Jet2 jet = spec.jet(x);
        field(InteriorSample{x, jet}, vals);
        for (std::size_t i = 0; i < nfields; ++i) {
          obs.observe(i, vals[i]);
          g[i] += w * vals[i];
        }
      }
    };
  };
  std::uint64_t radial = 0;
  if (const auto* pg = std::get_if<ProductGauss>(&q.method))
    radial = std::uint64_t(pg->radial_order > 0 ? pg->radial_order : pg->order);
  else
    radial = std::uint64_t(std::get<MonteCarlo>(q.method).radial_order);
  return integrate_sphere(d, nfields, q, method_text(q, fr), radial, make_kernel);
}

IntegralResult bulk_integral(const SurfaceSpec& spec, const std::function<double(const InteriorSample&)>& field,
                             const QuadratureSpec& q) {
  return bulk_integrals(
             spec, 1, [&](const InteriorSample& s, std::span<double> out) { out[0] = field(s); }, q)[0]
      .integral;
}

}  // namespace levilab

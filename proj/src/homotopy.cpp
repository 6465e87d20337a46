#include "fermicert/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include <json.hpp>

namespace fermicert {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> int_pow(std::complex<double> x, int e) {
  std::complex<double> acc = 1.0;
  for (int k = 0; k < e; ++k) acc *= x;
  return acc;
}

double inf_norm(const Eigen::VectorXcd& v) {
  double n = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) n = std::max(n, std::abs(v(i)));
  return n;
}

}  // namespace

std::vector<std::complex<double>> StartSystem::root(const BigInt& path_index) const {
  if (path_index < 0 || path_index >= root_count)
    throw std::invalid_argument("path index out of range");
  std::vector<std::complex<double>> x;
  x.reserve(degrees.size());
  BigInt p = path_index;
  for (int d : degrees) {
    unsigned long r = mpz_fdiv_ui(p.get_mpz_t(), static_cast<unsigned long>(d));
    p /= d;
    x.push_back(std::polar(1.0, kTwoPi * static_cast<double>(r) / d));
  }
  return x;
}

StartSystem start_system(const SquareSystem& sys, std::uint64_t seed) {
  if (static_cast<int>(sys.polynomials.size()) != sys.n_vars)
    throw std::invalid_argument("start_system requires a square system");
  StartSystem s;
  s.root_count = 1;
  for (const auto& p : sys.polynomials) {
    if (p.is_zero() || !p.has_v())
      throw std::invalid_argument("system contains a constant polynomial");
    int d = p.total_degree();
    s.degrees.push_back(d);
    s.root_count *= d;
  }
  // Unit-modulus gamma from the seed, built from raw generator words so the
  // value does not depend on the standard library's distribution internals.
  std::mt19937_64 rng(seed);
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  s.gamma = std::polar(1.0, kTwoPi * u);
  return s;
}

namespace {

/// H, dH/dx, dH/dt at (x, t) for H = gamma*(1-t)*G + t*F.
struct HomotopyEval {
  const CompiledSystem& f;
  const StartSystem& start;

  void operator()(const Eigen::VectorXcd& x, double t, Eigen::VectorXcd& h,
                  Eigen::MatrixXcd& hx, Eigen::VectorXcd* ht) const {
    const int n = start.n_vars();
    Eigen::VectorXcd fv;
    f.eval_jacobian(x, fv, hx);
    h = t * fv;
    hx *= t;
    const std::complex<double> s = start.gamma * (1.0 - t);
    for (int i = 0; i < n; ++i) {
      const int d = start.degrees[i];
      const std::complex<double> pw = int_pow(x(i), d - 1);
      const std::complex<double> g = pw * x(i) - 1.0;
      h(i) += s * g;
      hx(i, i) += s * static_cast<double>(d) * pw;
      if (ht) (*ht)(i) = fv(i) - start.gamma * g;
    }
  }
};

}  // namespace

PathResult track_path(const CompiledSystem& target, const StartSystem& start,
                      const BigInt& path_index, const TrackOptions& opts) {
  PathResult res;
  res.path_index = path_index;
  const int n = start.n_vars();
  if (target.n_vars() != n) throw std::invalid_argument("system/start size mismatch");

  const auto x0 = start.root(path_index);
  Eigen::VectorXcd x(n);
  for (int i = 0; i < n; ++i) x(i) = x0[i];

  const HomotopyEval H{target, start};
  Eigen::VectorXcd h(n), ht(n);
  Eigen::MatrixXcd hx(n, n);

  auto correct = [&](Eigen::VectorXcd& xx, double tt, int iters) -> bool {
    for (int k = 0; k < iters; ++k) {
      H(xx, tt, h, hx, nullptr);
      Eigen::VectorXcd delta = hx.partialPivLu().solve(h);
      xx -= delta;
      if (!xx.allFinite()) return false;
      if (inf_norm(delta) <= opts.corrector_tolerance * std::max(1.0, inf_norm(xx)))
        return true;
    }
    return false;
  };

  double t = 0.0;
  double dt = opts.initial_step;
  int consecutive = 0;
  auto fail = [&](const char* why) {
    res.success = false;
    res.failure_reason = why;
    res.endpoint.assign(x.data(), x.data() + n);
    return res;
  };

  while (t < 1.0) {
    if (++res.steps > opts.max_steps) return fail("max steps exceeded");
    const double dt_eff = std::min(dt, 1.0 - t);

    H(x, t, h, hx, &ht);
    Eigen::VectorXcd xdot = hx.partialPivLu().solve(-ht);
    Eigen::VectorXcd xp = x + dt_eff * xdot;

    bool ok = xp.allFinite() && correct(xp, t + dt_eff, opts.corrector_steps) &&
              inf_norm(xp) <= opts.divergence_bound;
    if (ok) {
      x = xp;
      t += dt_eff;
      if (++consecutive >= 5) {
        dt = std::min(dt * 2.0, opts.max_step);
        consecutive = 0;
      }
    } else {
      consecutive = 0;
      dt *= 0.5;
      if (dt < opts.min_step) return fail("step size underflow");
    }
  }

  // Plain tightening on F itself.
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXcd fv;
    Eigen::MatrixXcd fj;
    target.eval_jacobian(x, fv, fj);
    Eigen::VectorXcd delta = fj.partialPivLu().solve(fv);
    Eigen::VectorXcd xn = x - delta;
    if (!xn.allFinite()) break;
    double step = inf_norm(delta);
    x = xn;
    if (step <= 1e-14 * std::max(1.0, inf_norm(x))) break;
    if (step >= last) break;  // stalled; keep the best iterate
    last = step;
  }
  {
    Eigen::VectorXcd fv;
    Eigen::MatrixXcd fj;
    target.eval_jacobian(x, fv, fj);
    Eigen::VectorXcd delta = fj.partialPivLu().solve(fv);
    if (!delta.allFinite() ||
        inf_norm(delta) > opts.corrector_tolerance * std::max(1.0, inf_norm(x)))
      return fail("endgame did not converge");
  }

  res.success = true;
  res.endpoint.assign(x.data(), x.data() + n);
  double max_im = 0.0;
  for (int i = 0; i < n; ++i) max_im = std::max(max_im, std::abs(x(i).imag()));
  res.real_flag = max_im <= opts.real_tolerance;
  return res;
}

PathResult track_path(const SquareSystem& target, const StartSystem& start,
                      const BigInt& path_index, const TrackOptions& opts) {
  return track_path(CompiledSystem::compile(target), start, path_index, opts);
}

RootIterator::RootIterator(const SquareSystem& sys, std::uint64_t seed,
                           IteratorOptions opts)
    : target_(CompiledSystem::compile(sys)),
      start_(start_system(sys, seed)),
      opts_(std::move(opts)),
      seed_(seed) {
  if (opts_.checkpoint_path.empty()) return;
  std::ifstream in(opts_.checkpoint_path);
  if (!in.good()) return;
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.at("seed").get<std::uint64_t>() != seed_)
    throw std::runtime_error("checkpoint seed does not match this run");
  next_index_ = BigInt(j.at("next_path_index").get<std::string>());
  paths_tracked_ = j.at("paths_tracked").get<std::uint64_t>();
  successes_ = j.at("successes").get<std::uint64_t>();
  real_hits_ = j.at("real_hits").get<std::uint64_t>();
  for (const auto& ep : j.at("found")) {
    std::vector<std::complex<double>> v;
    for (const auto& c : ep) v.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    found_.push_back(std::move(v));
  }
}

void RootIterator::save_checkpoint() const {
  if (opts_.checkpoint_path.empty()) return;
  nlohmann::ordered_json j;
  j["seed"] = seed_;
  j["next_path_index"] = next_index_.get_str();
  j["paths_tracked"] = paths_tracked_;
  j["successes"] = successes_;
  j["real_hits"] = real_hits_;
  auto found = nlohmann::ordered_json::array();
  for (const auto& ep : found_) {
    auto arr = nlohmann::ordered_json::array();
    for (auto c : ep) arr.push_back({c.real(), c.imag()});
    found.push_back(std::move(arr));
  }
  j["found"] = std::move(found);
  std::ofstream out(opts_.checkpoint_path);
  out << j.dump(2) << "\n";
}

void RootIterator::absorb(const PathResult& r) {
  ++paths_tracked_;
  if (r.success) ++successes_;
  if (r.real_flag) {
    ++real_hits_;
    found_.push_back(r.endpoint);
  }
  if (opts_.log) {
    auto& log = *opts_.log;
    log << paths_tracked_ << "  " << (r.real_flag ? "true" : "false") << ","
        << (r.success ? "true" : "false") << "\n";
    if (r.success) {
      double prop = static_cast<double>(successes_) / static_cast<double>(paths_tracked_);
      log << "Total success proportion:" << prop << "\n";
      log << "Expected solution count:"
          << mpz_get_d(start_.root_count.get_mpz_t()) * prop << "\n";
    }
  }
  if (opts_.checkpoint_every > 0 &&
      paths_tracked_ % static_cast<std::uint64_t>(opts_.checkpoint_every) == 0)
    save_checkpoint();
}

std::optional<PathResult> RootIterator::next() {
  auto batch = next_batch(1);
  if (batch.empty()) return std::nullopt;
  return std::move(batch.front());
}

std::vector<PathResult> RootIterator::next_batch(std::uint64_t count) {
  BigInt remaining = start_.root_count - next_index_;
  if (remaining < BigInt(static_cast<unsigned long>(count)))
    count = remaining.get_ui();
  std::vector<PathResult> results(count);
  if (count == 0) return results;

  const int threads = std::max(1, opts_.threads);
  if (threads == 1 || count == 1) {
    for (std::uint64_t k = 0; k < count; ++k)
      results[k] = track_path(target_, start_, next_index_ + static_cast<unsigned long>(k),
                              opts_.track);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t k = w; k < count; k += threads)
          results[k] = track_path(target_, start_,
                                  next_index_ + static_cast<unsigned long>(k),
                                  opts_.track);
      });
    }
    for (auto& th : pool) th.join();
  }
  next_index_ += static_cast<unsigned long>(count);
  for (const auto& r : results) absorb(r);  // merged strictly in index order
  return results;
}

std::optional<SearchOutcome> find_real_solution(const SquareSystem& sys,
                                                std::uint64_t seed,
                                                std::uint64_t budget,
                                                const IteratorOptions& iopts,
                                                const CertifyConfig& cconfig) {
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  RootIterator it(sys, seed, iopts);
  const CompiledSystem cs = CompiledSystem::compile(sys);
  CertifyConfig cfg = cconfig;
  cfg.require_real = true;

  const std::uint64_t chunk =
      iopts.threads > 1 ? static_cast<std::uint64_t>(4 * iopts.threads) : 1;
  std::uint64_t used = 0;
  while (used < budget && !it.exhausted()) {
    auto batch = it.next_batch(std::min(chunk, budget - used));
    used += batch.size();
    for (const auto& r : batch) {
      if (!r.real_flag) continue;
      Certificate cert = certify_root(cs, r.endpoint, cfg);
      if (cert.certified && cert.real_certified) {
        if (iopts.log)
          *iopts.log << "certified real solution on path " << r.path_index.get_str()
                     << "\n";
        it.save_checkpoint();
        return SearchOutcome{r, std::move(cert)};
      }
    }
  }
  it.save_checkpoint();
  return std::nullopt;
}

std::vector<std::vector<std::complex<double>>> dedup_endpoints(
    const std::vector<PathResult>& results, double tol) {
  std::vector<std::vector<std::complex<double>>> reps;
  for (const auto& r : results) {
    if (!r.success) continue;
    bool fresh = true;
    for (const auto& rep : reps) {
      if (rep.size() != r.endpoint.size()) continue;
      double d = 0.0;
      for (size_t i = 0; i < rep.size(); ++i)
        d = std::max(d, std::abs(rep[i] - r.endpoint[i]));
      if (d <= tol) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(r.endpoint);
  }
  return reps;
}

}  // namespace fermicert

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fermicert/certify.hpp"
#include "fermicert/isosys.hpp"
#include "fermicert/polyeval.hpp"

namespace fermicert {

/// Total-degree start system {x_i^{d_i} - 1} scaled by a random unit-modulus
/// gamma.  Its roots are all tuples of roots of unity, indexed mixed-radix
/// by path_index (coordinate 0 least significant).
struct StartSystem {
  std::vector<int> degrees;
  std::complex<double> gamma;
  BigInt root_count;

  int n_vars() const { return static_cast<int>(degrees.size()); }
  std::vector<std::complex<double>> root(const BigInt& path_index) const;
};

/// Degrees read from the system; gamma seeded.  Rejects non-square systems
/// and constant polynomials (no roots to start from).
StartSystem start_system(const SquareSystem& sys, std::uint64_t seed);

struct TrackOptions {
  double initial_step = 0.05;
  double min_step = 1e-10;
  double max_step = 0.1;
  int max_steps = 20000;
  int corrector_steps = 3;
  double corrector_tolerance = 1e-10;
  double divergence_bound = 1e8;
  /// Pre-certification screen: success with max |Im| below this is flagged
  /// real.  Realness claims are only ever made by certify_root.
  double real_tolerance = 1e-6;
};

struct PathResult {
  std::vector<std::complex<double>> endpoint;
  bool success = false;
  bool real_flag = false;
  BigInt path_index = 0;
  int steps = 0;
  std::string failure_reason;
};

/// Tracks H(x,t) = gamma*(1-t)*G(x) + t*F(x) from the start root at t=0 to
/// t=1: explicit Euler predictor on the Davidenko ODE, at most
/// corrector_steps Newton corrections per step, step halving on rejection
/// and doubling after 5 consecutive accepts, then plain Newton tightening
/// at t=1.  Failures (underflow, divergence, step limit) are reported in
/// failure_reason, never thrown.
PathResult track_path(const CompiledSystem& target, const StartSystem& start,
                      const BigInt& path_index, const TrackOptions& opts = {});
PathResult track_path(const SquareSystem& target, const StartSystem& start,
                      const BigInt& path_index, const TrackOptions& opts = {});

struct IteratorOptions {
  TrackOptions track;
  /// When set, progress state is persisted here and restored on construction.
  std::string checkpoint_path;
  int checkpoint_every = 1000;
  /// When set, one line per path plus running statistics after successes.
  std::ostream* log = nullptr;
  int threads = 1;
};

/// Lazy path-result stream in path_index order.  Never materializes the root
/// set; resumable from a checkpoint; batches may fan out to a thread pool
/// but results are merged (and counted, logged, checkpointed) in index order.
class RootIterator {
 public:
  RootIterator(const SquareSystem& sys, std::uint64_t seed,
               IteratorOptions opts = {});

  const StartSystem& start() const { return start_; }
  bool exhausted() const { return next_index_ >= start_.root_count; }
  const BigInt& next_path_index() const { return next_index_; }
  std::uint64_t paths_tracked() const { return paths_tracked_; }
  std::uint64_t successes() const { return successes_; }
  std::uint64_t real_hits() const { return real_hits_; }
  /// Endpoints of the real-flagged successes seen so far.
  const std::vector<std::vector<std::complex<double>>>& found() const {
    return found_;
  }

  std::optional<PathResult> next();
  /// Up to count results (fewer when the root set runs out).
  std::vector<PathResult> next_batch(std::uint64_t count);

  /// No-op unless a checkpoint path is configured.
  void save_checkpoint() const;

 private:
  void absorb(const PathResult& r);

  CompiledSystem target_;
  StartSystem start_;
  IteratorOptions opts_;
  std::uint64_t seed_ = 0;
  BigInt next_index_ = 0;
  std::uint64_t paths_tracked_ = 0;
  std::uint64_t successes_ = 0;
  std::uint64_t real_hits_ = 0;
  std::vector<std::vector<std::complex<double>>> found_;
};

struct SearchOutcome {
  PathResult path;
  Certificate certificate;
};

/// Tracks paths until one endpoint passes the real filter and certifies as a
/// real root (certify_root with require_real).  Returns the first such hit,
/// or nothing once the budget or the root set is exhausted.
std::optional<SearchOutcome> find_real_solution(const SquareSystem& sys,
                                                std::uint64_t seed,
                                                std::uint64_t budget,
                                                const IteratorOptions& iopts = {},
                                                const CertifyConfig& cconfig = {});

/// Distinct successful endpoints under inf-norm tolerance clustering.
std::vector<std::vector<std::complex<double>>> dedup_endpoints(
    const std::vector<PathResult>& results, double tol = 1e-6);

}  // namespace fermicert

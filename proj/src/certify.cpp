#include "fermicert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fermicert {

std::string mpf_to_scientific(const mpf_class& x, int digits) {
  if (x == 0) return "0";
  mp_exp_t exp10 = 0;
  char* raw = mpf_get_str(nullptr, &exp10, 10, digits, x.get_mpf_t());
  std::string s(raw);
  void (*free_func)(void*, size_t) = nullptr;
  mp_get_memory_functions(nullptr, nullptr, &free_func);
  free_func(raw, s.size() + 1);

  std::string sign;
  if (!s.empty() && s[0] == '-') {
    sign = "-";
    s.erase(0, 1);
  }
  // s encodes 0.s * 10^exp10
  std::string mantissa(1, s[0]);
  if (s.size() > 1) mantissa += "." + s.substr(1);
  long e = static_cast<long>(exp10) - 1;
  char ebuf[32];
  std::snprintf(ebuf, sizeof ebuf, "e%+03ld", e);
  return sign + mantissa + ebuf;
}

std::vector<std::complex<double>> RefinedPoint::to_doubles() const {
  std::vector<std::complex<double>> out;
  out.reserve(coords.size());
  for (const auto& c : coords) out.push_back(c.to_double());
  return out;
}

RefinedPoint newton_refine(const CompiledSystem& sys,
                           const std::vector<std::complex<double>>& x0,
                           int steps, int precision_bits) {
  if (steps < 1) throw std::invalid_argument("newton_refine: steps must be >= 1");
  if (precision_bits < 53)
    throw std::invalid_argument("newton_refine: precision_bits must be >= 53");
  if (static_cast<int>(x0.size()) != sys.n_vars())
    throw std::invalid_argument("newton_refine: dimension mismatch");
  const unsigned prec = static_cast<unsigned>(precision_bits);

  MpVector x;
  x.reserve(x0.size());
  for (auto z : x0) x.push_back(MpComplex::from(z, prec));

  mpf_class last_step(0, prec);
  for (int s = 0; s < steps; ++s) {
    MpVector f = sys.eval(x, prec);
    MpMatrix j = sys.jacobian(x, prec);
    MpVector delta;
    try {
      delta = solve_linear(std::move(j), std::move(f));
    } catch (const SingularMatrixError& e) {
      throw NewtonSingularError(
          std::string("singular Jacobian at Newton step ") + std::to_string(s + 1) +
              ": " + e.what(),
          x);
    }
    for (size_t i = 0; i < x.size(); ++i) x[i] = x[i] - delta[i];
    last_step = vector_norm(delta);
  }

  RefinedPoint rp;
  rp.residual_norm = vector_norm(sys.eval(x, prec));
  rp.coords = std::move(x);
  rp.steps_taken = steps;
  rp.last_step_norm = last_step;
  return rp;
}

RefinedPoint newton_refine(const SquareSystem& sys,
                           const std::vector<std::complex<double>>& x0,
                           int steps, int precision_bits) {
  return newton_refine(CompiledSystem::compile(sys), x0, steps, precision_bits);
}

ComplexBox krawczyk_operator(const CompiledSystem& sys, const ComplexBox& box) {
  const int n = sys.n_vars();
  if (box.size() != n)
    throw std::invalid_argument("krawczyk_operator: box dimension mismatch");

  const auto m = box.midpoint();

  Eigen::VectorXcd mx(n);
  for (int i = 0; i < n; ++i) mx(i) = m[i];
  Eigen::MatrixXcd y = midpoint_inverse(sys.jacobian(mx));

  // Midpoint components are exact doubles, so F(m) can be computed in exact
  // rational arithmetic and only the final conversion widens.
  std::vector<ComplexRational> mq;
  mq.reserve(m.size());
  for (auto z : m) mq.push_back(ComplexRational::from(z));
  const auto fm = sys.eval_exact(mq);
  ComplexBox fm_box;
  fm_box.coords.reserve(n);
  for (const auto& f : fm)
    fm_box.coords.push_back({RealInterval::enclose(f.re), RealInterval::enclose(f.im)});

  ComplexIntervalMatrix yi(n, std::vector<ComplexInterval>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) yi[i][j] = ComplexInterval::exact(y(i, j));

  const ComplexBox yf = interval_mat_vec(yi, fm_box);

  const ComplexIntervalMatrix jb = sys.jacobian(box);
  ComplexIntervalMatrix r(n, std::vector<ComplexInterval>(n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      ComplexInterval acc = ComplexInterval::exact(0.0);
      for (int j = 0; j < n; ++j) acc = acc + yi[i][j] * jb[j][k];
      ComplexInterval id = ComplexInterval::exact(i == k ? 1.0 : 0.0);
      r[i][k] = id - acc;
    }
  }

  const ComplexBox bm = box - ComplexBox::degenerate(m);
  const ComplexBox rbm = interval_mat_vec(r, bm);
  return ComplexBox::degenerate(m) - yf + rbm;
}

ComplexBox krawczyk_operator(const SquareSystem& sys, const ComplexBox& box) {
  return krawczyk_operator(CompiledSystem::compile(sys), box);
}

namespace {

std::string radius_str(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", r);
  return buf;
}

/// Shrinks a certified (box, image) pair.  First the root is located tightly
/// by the intersection chain B <- K(B) n B (any root of B stays in the
/// intersection, so no containment test is needed along the way).  The
/// reported pair is then a slightly padded box around the tight center,
/// re-certified by its own contraction test; the padding leaves room for the
/// strict-inequality check, which ulp-width intervals cannot pass.  Falls
/// back to the incoming pair when the padded test fails.
void tighten_enclosure(const CompiledSystem& sys, ComplexBox& box,
                       ComplexBox& image, int max_rounds) {
  const bool symmetric = box.is_conjugate_symmetric();
  ComplexBox chain;
  try {
    chain = intersect(image, box);
    for (int t = 0; t < max_rounds; ++t) {
      const double before = chain.max_radius();
      chain = intersect(krawczyk_operator(sys, chain), chain);
      if (chain.max_radius() > 0.5 * before) break;
    }
  } catch (const std::exception&) {
    return;
  }

  const auto mid = chain.midpoint();
  double pad = std::max(8.0 * chain.max_radius(), 1e-14);
  for (int attempt = 0; attempt < 4; ++attempt, pad *= 8.0) {
    ComplexBox b, k;
    try {
      b = ComplexBox::centered(mid, pad, symmetric);
      k = krawczyk_operator(sys, b);
    } catch (const std::exception&) {
      continue;
    }
    if (k.strictly_inside(b)) {
      box = std::move(b);
      image = std::move(k);
      return;
    }
  }
}

}  // namespace

Certificate certify_root(const CompiledSystem& sys,
                         const std::vector<std::complex<double>>& x_star,
                         const CertifyConfig& config) {
  Certificate cert;
  cert.midpoint = x_star;

  RefinedPoint rp;
  try {
    rp = newton_refine(sys, x_star, config.newton_steps, config.precision_bits);
  } catch (const std::exception& e) {
    cert.notes = std::string("newton refinement failed: ") + e.what();
    cert.inflation_rounds = 0;
    return cert;
  }
  const auto mid = rp.to_doubles();
  cert.midpoint = mid;
  cert.residual_norm = mpf_to_scientific(rp.residual_norm);

  double r0 = config.initial_radius;
  if (!(r0 > 0.0)) r0 = std::max(1e-8, 8.0 * rp.last_step_norm.get_d());

  struct Phase {
    bool symmetric;
    std::vector<std::complex<double>> center;
  };
  std::vector<Phase> phases;
  if (config.require_real) {
    std::vector<std::complex<double>> re_center;
    re_center.reserve(mid.size());
    for (auto z : mid) re_center.emplace_back(z.real(), 0.0);
    phases.push_back({true, std::move(re_center)});
  }
  phases.push_back({false, mid});

  for (const auto& phase : phases) {
    double r = r0;
    for (int round = 0; round < config.max_rounds; ++round, r *= config.inflation_factor) {
      ComplexBox box, image;
      try {
        box = ComplexBox::centered(phase.center, r, phase.symmetric);
        image = krawczyk_operator(sys, box);
      } catch (const std::exception&) {
        continue;  // singular midpoint Jacobian or radius overflow: widen and retry
      }
      if (!image.strictly_inside(box)) continue;

      tighten_enclosure(sys, box, image, 8);
      cert.certified = true;
      cert.unique_in_box = true;
      cert.real_certified = box.is_conjugate_symmetric();
      cert.box = std::move(box);
      cert.image_box = std::move(image);
      cert.inflation_rounds = round;
      cert.notes = std::string("contraction at radius ") + radius_str(r) +
                   (phase.symmetric ? " (conjugate-symmetric box)" : " (plain box)");
      return cert;
    }
  }

  cert.inflation_rounds = config.max_rounds;
  cert.notes = "no contracting box within " + std::to_string(config.max_rounds) +
               " inflation rounds (initial radius " + radius_str(r0) + ")";
  return cert;
}

Certificate certify_root(const SquareSystem& sys,
                         const std::vector<std::complex<double>>& x_star,
                         const CertifyConfig& config) {
  return certify_root(CompiledSystem::compile(sys), x_star, config);
}

std::string certificate_text(const Certificate& c) {
  std::ostringstream out;
  out << "certified:        " << (c.certified ? "yes" : "no") << "\n";
  out << "real:             " << (c.real_certified ? "yes" : "no") << "\n";
  out << "unique in box:    " << (c.unique_in_box ? "yes" : "no") << "\n";
  out << "inflation rounds: " << c.inflation_rounds << "\n";
  if (!c.residual_norm.empty())
    out << "residual norm:    " << c.residual_norm << "\n";
  if (!c.notes.empty()) out << "notes:            " << c.notes << "\n";
  if (c.certified) {
    out << "enclosures:\n";
    for (int i = 0; i < c.box.size(); ++i) {
      const auto& ci = c.box.coords[i];
      out << "  x" << (i + 1) << ": [" << interval_to_string(ci.re) << "] + ["
          << interval_to_string(ci.im) << "]im\n";
    }
  }
  return out.str();
}

nlohmann::ordered_json certificate_json(const Certificate& c) {
  nlohmann::ordered_json j;
  j["certified"] = c.certified;
  j["real"] = c.real_certified;
  j["unique"] = c.unique_in_box;
  auto intervals = nlohmann::ordered_json::array();
  for (const auto& ci : c.box.coords) {
    nlohmann::ordered_json e;
    e["re_mid"] = ci.re.mid();
    e["re_rad"] = ci.re.rad();
    e["im_mid"] = ci.im.mid();
    e["im_rad"] = ci.im.rad();
    intervals.push_back(std::move(e));
  }
  j["intervals"] = std::move(intervals);
  j["inflation_rounds"] = c.inflation_rounds;
  j["residual_norm"] = c.residual_norm;
  // lossless endpoint data so a parsed certificate reproduces every field
  auto endpoints = [](const ComplexBox& b) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& ci : b.coords)
      arr.push_back({ci.re.lo, ci.re.hi, ci.im.lo, ci.im.hi});
    return arr;
  };
  j["box"] = endpoints(c.box);
  j["image_box"] = endpoints(c.image_box);
  auto mid = nlohmann::ordered_json::array();
  for (auto z : c.midpoint) mid.push_back({z.real(), z.imag()});
  j["midpoint"] = std::move(mid);
  j["notes"] = c.notes;
  return j;
}

Certificate certificate_from_json(const nlohmann::json& j) {
  Certificate c;
  c.certified = j.at("certified").get<bool>();
  c.real_certified = j.at("real").get<bool>();
  c.unique_in_box = j.at("unique").get<bool>();
  c.inflation_rounds = j.at("inflation_rounds").get<int>();
  c.residual_norm = j.at("residual_norm").get<std::string>();
  c.notes = j.value("notes", std::string());
  auto read_box = [&](const char* key) {
    ComplexBox b;
    if (!j.contains(key)) return b;
    for (const auto& e : j.at(key)) {
      RealInterval re(e.at(0).get<double>(), e.at(1).get<double>());
      RealInterval im(e.at(2).get<double>(), e.at(3).get<double>());
      b.coords.push_back({re, im});
    }
    return b;
  };
  c.box = read_box("box");
  c.image_box = read_box("image_box");
  if (j.contains("midpoint"))
    for (const auto& e : j.at("midpoint"))
      c.midpoint.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return c;
}

}  // namespace fermicert

// Copyright 2026 The cssim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cssim/mitigation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "cssim/error.hpp"
#include "cssim/random.hpp"
#include "json.hpp"

namespace cssim {

// ---------------------------------------------------------------------- REM

ReadoutCalibration calibrate_readout(const NoiseModel& noise, std::size_t n_qubits, std::size_t shots,
                                     std::uint64_t seed) {
  if (n_qubits == 0 || n_qubits > 20) throw InvalidArgument("calibration register must hold 1 to 20 qubits");
  const std::size_t dim = std::size_t{1} << n_qubits;
  ReadoutCalibration out(n_qubits, Confusion::Zero());
  for (int prepared = 0; prepared < 2; ++prepared) {
    std::vector<double> delta(dim, 0.0);
    delta[prepared ? dim - 1 : 0] = 1.0;
    const Counts c =
        sample_distribution(delta, n_qubits, shots, noise, 1, split_seed(seed, "calibrate", static_cast<std::uint64_t>(prepared)));
    for (std::size_t q = 0; q < n_qubits; ++q) {
      std::uint64_t ones = 0;
      for (const auto& [k, v] : c.data) {
        if (c.bit(k, q)) ones += v;
      }
      const double p1 = static_cast<double>(ones) / static_cast<double>(shots);
      out[q](prepared, 1) = p1;
      out[q](prepared, 0) = 1.0 - p1;
    }
  }
  return out;
}

double QuasiDistribution::total() const {
  double t = 0.0;
  for (const auto& [k, v] : probs) t += v;
  return t;
}

QuasiDistribution empirical_distribution(const Counts& counts) {
  const Counts c = counts.untiled();
  const std::uint64_t shots = c.shots();
  if (shots == 0) throw EstimationError("no shots in counts");
  QuasiDistribution q{c.n_qubits, {}};
  for (const auto& [k, v] : c.data) q.probs[k] = static_cast<double>(v) / static_cast<double>(shots);
  return q;
}

namespace {

Eigen::Matrix2d checked_inverse(const Confusion& a) {
  if (std::abs(a.determinant()) < 1e-6) throw CalibrationError("readout confusion matrix is singular");
  return a.inverse();
}

void check_matrices(const ReadoutCalibration& m, std::size_t n) {
  if (m.size() != n) {
    throw DimensionError("expected " + std::to_string(n) + " readout matrices, got " + std::to_string(m.size()));
  }
}

}  // namespace

QuasiDistribution apply_rem(const QuasiDistribution& observed, const ReadoutCalibration& matrices) {
  const std::size_t n = observed.n_qubits;
  check_matrices(matrices, n);
  if (n > 20) throw CapacityError("readout mitigation is limited to 20 qubits");
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> v(dim, 0.0);
  for (const auto& [k, p] : observed.probs) v[k] = p;
  for (std::size_t q = 0; q < n; ++q) {
    // p_true = (A^T)^{-1} p_obs on this qubit.
    const Eigen::Matrix2d m = checked_inverse(matrices[q]).transpose();
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & bit) continue;
      const double a = v[i];
      const double b = v[i | bit];
      v[i] = m(0, 0) * a + m(0, 1) * b;
      v[i | bit] = m(1, 0) * a + m(1, 1) * b;
    }
  }
  QuasiDistribution out{n, {}};
  for (std::size_t i = 0; i < dim; ++i) {
    if (v[i] != 0.0) out.probs[i] = v[i];
  }
  return out;
}

QuasiDistribution apply_rem(const Counts& counts, const ReadoutCalibration& matrices) {
  return apply_rem(empirical_distribution(counts), matrices);
}

double expectation_from_quasi(const QuasiDistribution& quasi, const PauliSum& group, std::span<const Pauli> basis) {
  if (quasi.n_qubits != group.n_qubits()) throw DimensionError("distribution and group registers differ");
  std::vector<std::uint64_t> masks;
  for (std::size_t m = 0; m < group.size(); ++m) masks.push_back(measured_support(group, m, basis));
  double e = 0.0;
  for (const auto& [b, p] : quasi.probs) {
    double g = 0.0;
    for (std::size_t m = 0; m < masks.size(); ++m) {
      const double c = group.coefficient(m).real();
      g += (std::popcount(b & masks[m]) & 1) ? -c : c;
    }
    e += p * g;
  }
  return e;
}

Estimate mitigated_expectation(const Counts& counts, const PauliSum& group, std::span<const Pauli> basis,
                               const ReadoutCalibration& matrices) {
  const Counts c = counts.untiled();
  const std::size_t n = c.n_qubits;
  if (n != group.n_qubits()) throw DimensionError("counts and group registers differ");
  check_matrices(matrices, n);
  const std::uint64_t shots = c.shots();
  if (shots == 0) throw EstimationError("no shots to estimate from");

  // v[q][bit]: corrected single-qubit parity value for an observed bit.
  std::vector<std::array<double, 2>> v(n);
  for (std::size_t q = 0; q < n; ++q) {
    const Eigen::Vector2d w = checked_inverse(matrices[q]) * Eigen::Vector2d(1.0, -1.0);
    v[q] = {w(0), w(1)};
  }
  std::vector<std::uint64_t> masks;
  for (std::size_t m = 0; m < group.size(); ++m) masks.push_back(measured_support(group, m, basis));

  auto value = [&](std::uint64_t b) {
    double g = 0.0;
    for (std::size_t m = 0; m < masks.size(); ++m) {
      double prod = group.coefficient(m).real();
      for (std::size_t q = 0; q < n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
        if (masks[m] & bit) prod *= v[q][(b & bit) ? 1 : 0];
      }
      g += prod;
    }
    return g;
  };
  std::vector<std::pair<double, std::uint64_t>> samples;
  samples.reserve(c.data.size());
  double mean = 0.0;
  for (const auto& [k, cnt] : c.data) {
    samples.emplace_back(value(k), cnt);
    mean += samples.back().first * static_cast<double>(cnt);
  }
  mean /= static_cast<double>(shots);
  double ss = 0.0;
  for (const auto& [g, cnt] : samples) ss += static_cast<double>(cnt) * (g - mean) * (g - mean);
  Estimate e;
  e.value = mean;
  if (shots > 1) e.sigma = std::sqrt(ss / static_cast<double>(shots - 1) / static_cast<double>(shots));
  return e;
}

Counts symmetry_postselect(const Counts& counts, std::size_t qubit, int eigenvalue) {
  if (eigenvalue != 1 && eigenvalue != -1) throw InvalidArgument("eigenvalue must be +1 or -1");
  const Counts c = counts.untiled();
  if (qubit >= c.n_qubits) throw InvalidArgument("postselection qubit out of range");
  if (c.shots() == 0) throw EstimationError("no shots to postselect");
  const bool want = eigenvalue == -1;
  Counts out{c.n_qubits, 1, {}};
  for (const auto& [k, v] : c.data) {
    if (c.bit(k, qubit) == want) out.data[k] = v;
  }
  if (out.data.empty()) throw EstimationError("postselection discarded every shot");
  return out;
}

// ---------------------------------------------------------------------- ZNE

double FitResult::operator()(double lambda) const {
  return sign * std::exp(alpha * lambda + beta) + gamma;
}

namespace {

struct FitData {
  std::vector<double> lambda;
  std::vector<double> energy;
  std::vector<double> sigma;
};

struct Profile {
  bool ok = false;
  double alpha = 0.0;
  double beta = 0.0;
  double rss = std::numeric_limits<double>::infinity();
};

double residual_sum(const FitData& d, double alpha, double beta, double gamma, int sign) {
  double rss = 0.0;
  for (std::size_t i = 0; i < d.lambda.size(); ++i) {
    const double r = (d.energy[i] - (sign * std::exp(alpha * d.lambda[i] + beta) + gamma)) / d.sigma[i];
    rss += r * r;
  }
  return std::isfinite(rss) ? rss : std::numeric_limits<double>::infinity();
}

// Log-linear weighted regression at fixed gamma.
Profile profile(const FitData& d, double gamma, int sign) {
  double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < d.lambda.size(); ++i) {
    const double y = sign * (d.energy[i] - gamma);
    if (!(y > 0.0)) return {};
    const double w = (y / d.sigma[i]) * (y / d.sigma[i]);
    const double ly = std::log(y);
    s += w;
    sx += w * d.lambda[i];
    sy += w * ly;
    sxx += w * d.lambda[i] * d.lambda[i];
    sxy += w * d.lambda[i] * ly;
  }
  const double det = s * sxx - sx * sx;
  if (!(std::abs(det) > 0.0)) return {};
  Profile p;
  p.alpha = (s * sxy - sx * sy) / det;
  p.beta = (sy - p.alpha * sx) / s;
  p.rss = residual_sum(d, p.alpha, p.beta, gamma, sign);
  p.ok = std::isfinite(p.rss);
  return p;
}

struct SideFit {
  Profile profile;
  double gamma = 0.0;
};

constexpr double kBracketRanges = 1e3;

// gamma = anchor - sign * exp(t), t = log distance from the data, searched
// over distances up to kBracketRanges * range. Nearly linear drift puts the
// optimal gamma far from the data, so the bracket is wide.
SideFit fit_side(const FitData& d, double anchor, double range, int sign) {
  auto eval = [&](double t) {
    const double gamma = anchor - sign * std::exp(t);
    return std::pair{profile(d, gamma, sign), gamma};
  };
  const double lo = std::log(range * 1e-9);
  const double hi = std::log(range * kBracketRanges);
  constexpr int kGrid = 600;
  std::vector<double> ts(kGrid + 1);
  int best = -1;
  double best_rss = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    ts[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / kGrid;
    const auto [p, g] = eval(ts[static_cast<std::size_t>(i)]);
    if (p.ok && p.rss < best_rss) {
      best_rss = p.rss;
      best = i;
    }
  }
  SideFit out;
  if (best < 0) return out;
  double a = ts[static_cast<std::size_t>(std::max(best - 1, 0))];
  double b = ts[static_cast<std::size_t>(std::min(best + 1, kGrid))];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double e = a + invphi * (b - a);
  auto f = [&](double t) { return eval(t).first.rss; };
  double fc = f(c);
  double fe = f(e);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + invphi * (b - a);
      fe = f(e);
    }
  }
  const double t_best = fc < fe ? c : e;
  auto [p, g] = eval(t_best);
  const auto [pg, gg] = eval(ts[static_cast<std::size_t>(best)]);
  if (!p.ok || pg.rss < p.rss) {
    p = pg;
    g = gg;
  }
  out.profile = p;
  out.gamma = g;
  return out;
}

// Levenberg-damped Gauss-Newton on (alpha, beta, gamma), restricted to gamma
// in [lo, hi].
void polish(const FitData& d, FitResult& fit, double lo, double hi) {
  Eigen::Vector3d p(fit.alpha, fit.beta, fit.gamma);
  double rss = residual_sum(d, p(0), p(1), p(2), fit.sign);
  double mu = 1e-3;
  const std::size_t m = d.lambda.size();
  for (int it = 0; it < 200; ++it) {
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(m), 3);
    Eigen::VectorXd r(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      const double ex = fit.sign * std::exp(p(0) * d.lambda[i] + p(1));
      const auto ii = static_cast<Eigen::Index>(i);
      r(ii) = (d.energy[i] - ex - p(2)) / d.sigma[i];
      jac(ii, 0) = -ex * d.lambda[i] / d.sigma[i];
      jac(ii, 1) = -ex / d.sigma[i];
      jac(ii, 2) = -1.0 / d.sigma[i];
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d g = jac.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      Eigen::Matrix3d a = jtj;
      for (int k = 0; k < 3; ++k) a(k, k) += mu * std::max(jtj(k, k), 1e-300);
      const Eigen::Vector3d step = a.ldlt().solve(-g);
      const Eigen::Vector3d q = p + step;
      const double trial = residual_sum(d, q(0), q(1), q(2), fit.sign);
      if (step.allFinite() && q(2) >= lo && q(2) <= hi && trial < rss) {
        const double gain = rss - trial;
        p = q;
        rss = trial;
        mu = std::max(mu * 0.3, 1e-12);
        improved = true;
        if (gain <= 1e-15 * std::max(rss, 1e-300)) it = 1 << 20;
      } else {
        mu *= 10.0;
      }
    }
    if (!improved) break;
  }
  fit.alpha = p(0);
  fit.beta = p(1);
  fit.gamma = p(2);
  fit.rss = rss;
}

}  // namespace

FitResult zne_fit(std::span<const ZnePoint> points, bool weighted) {
  FitData d;
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points[a].lambda < points[b].lambda; });
  for (std::size_t i : order) {
    const auto& pt = points[i];
    if (pt.lambda < 1) throw InvalidArgument("noise scaling factors must be positive");
    if (!std::isfinite(pt.energy) || !std::isfinite(pt.sigma) || pt.sigma < 0.0) {
      throw InvalidArgument("ZNE points need finite energies and nonnegative sigmas");
    }
    if (weighted && pt.sigma == 0.0) throw InvalidArgument("weighted fits need positive sigmas");
    if (!d.lambda.empty() && d.lambda.back() == pt.lambda) throw FitError("noise scaling factors must be distinct");
    d.lambda.push_back(pt.lambda);
    d.energy.push_back(pt.energy);
    d.sigma.push_back(weighted ? pt.sigma : 1.0);
  }
  if (d.lambda.size() < 3) throw FitError("exponential extrapolation needs at least 3 points");
  const auto [emin, emax] = std::minmax_element(d.energy.begin(), d.energy.end());
  const double range = *emax - *emin;
  if (!(range > 0.0)) throw FitError("energies show no drift with the noise scaling factor");

  const SideFit below = fit_side(d, *emin, range, +1);
  const SideFit above = fit_side(d, *emax, range, -1);
  if (!below.profile.ok && !above.profile.ok) {
    std::ostringstream os;
    os << "exponential fit failed for every gamma; energies";
    for (double e : d.energy) os << ' ' << e;
    throw FitError(os.str());
  }
  const bool use_below = below.profile.ok && (!above.profile.ok || below.profile.rss <= above.profile.rss);
  const SideFit& side = use_below ? below : above;

  FitResult fit;
  fit.weighted = weighted;
  fit.sign = use_below ? 1 : -1;
  fit.alpha = side.profile.alpha;
  fit.beta = side.profile.beta;
  fit.gamma = side.gamma;
  fit.rss = side.profile.rss;
  if (use_below) {
    polish(d, fit, *emin - kBracketRanges * range, *emin);
  } else {
    polish(d, fit, *emax, *emax + kBracketRanges * range);
  }
  fit.extrapolated = fit(0.0);
  if (!std::isfinite(fit.extrapolated)) throw FitError("extrapolated energy is not finite");
  for (const auto& pt : points) fit.residuals.push_back(pt.energy - fit(pt.lambda));
  return fit;
}

double error_ratio(double energy, double exact) {
  if (exact == 0.0) throw InvalidArgument("error ratio needs a nonzero reference energy");
  return (energy - exact) / exact * 100.0;
}

namespace {

double parse_number(std::string_view tok, std::size_t line) {
  while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
  while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw ParseError("ZNE CSV line " + std::to_string(line) + ": bad number '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

std::vector<ZnePoint> read_zne_csv(std::string_view text) {
  std::vector<ZnePoint> pts;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      std::string compact;
      for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
      }
      if (compact != "lambda,energy,sigma") {
        throw ParseError("ZNE CSV line " + std::to_string(line_no) + ": expected header 'lambda,energy,sigma'");
      }
      header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1)) {
      fields.push_back(rest.substr(0, pos));
    }
    fields.push_back(rest);
    if (fields.size() != 3) throw ParseError("ZNE CSV line " + std::to_string(line_no) + ": expected 3 fields");
    const double lam = parse_number(fields[0], line_no);
    if (lam != std::floor(lam) || lam < 1) {
      throw ParseError("ZNE CSV line " + std::to_string(line_no) + ": lambda must be a positive integer");
    }
    const double sigma = parse_number(fields[2], line_no);
    if (sigma < 0.0) throw ParseError("ZNE CSV line " + std::to_string(line_no) + ": sigma must be nonnegative");
    pts.push_back({static_cast<int>(lam), parse_number(fields[1], line_no), sigma});
  }
  if (!header) throw ParseError("ZNE CSV is empty");
  return pts;
}

std::string write_zne_csv(std::span<const ZnePoint> points) {
  std::ostringstream os;
  os.precision(17);
  os << "lambda,energy,sigma\n";
  for (const auto& p : points) os << p.lambda << ',' << p.energy << ',' << p.sigma << '\n';
  return os.str();
}

std::string fit_to_json(const FitResult& fit, double exact) {
  nlohmann::ordered_json j;
  j["alpha"] = fit.alpha;
  j["beta"] = fit.beta;
  j["gamma"] = fit.gamma;
  j["sign"] = fit.sign;
  j["extrapolated"] = fit.extrapolated;
  j["rss"] = fit.rss;
  j["weighted"] = fit.weighted;
  j["residuals"] = fit.residuals;
  j["exact"] = exact;
  const double r = error_ratio(fit.extrapolated, exact);
  j["error_ratio_percent"] = r;
  j["abs_error_ratio_percent"] = std::abs(r);
  return j.dump(2);
}

}  // namespace cssim

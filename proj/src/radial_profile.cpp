#include "css_peaks/radial_profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "css_peaks/error.hpp"
#include "json_io.hpp"

namespace css {

namespace {

enum class Outcome { Overshoot, Undershoot, Reached };

struct Trajectory {
  Outcome outcome = Outcome::Reached;
  std::vector<double> u;
  std::vector<double> du;
};

double power_term(double u, double p) {
  return std::copysign(std::pow(std::abs(u), p - 1.0), u);
}

// One shot of  u'' = -u'/r + v0 u - u^{p-1},  u(0) = u0, u'(0) = 0.
Trajectory shoot(double u0, double v0, double p, double dr, std::size_t steps, bool record) {
  auto rhs = [&](double r, double u, double w) {
    const double source = v0 * u - power_term(u, p);
    // At the origin w/r -> w'(0), giving w'(0) = source / 2.
    return r == 0.0 ? 0.5 * source : source - w / r;
  };

  Trajectory tr;
  if (record) {
    tr.u.reserve(steps + 1);
    tr.du.reserve(steps + 1);
    tr.u.push_back(u0);
    tr.du.push_back(0.0);
  }
  const double k = std::sqrt(v0);
  double u = u0;
  double w = 0.0;
  for (std::size_t j = 0; j < steps; ++j) {
    const double r = static_cast<double>(j) * dr;
    const double k1u = w;
    const double k1w = rhs(r, u, w);
    const double k2u = w + 0.5 * dr * k1w;
    const double k2w = rhs(r + 0.5 * dr, u + 0.5 * dr * k1u, k2u);
    const double k3u = w + 0.5 * dr * k2w;
    const double k3w = rhs(r + 0.5 * dr, u + 0.5 * dr * k2u, k3u);
    const double k4u = w + dr * k3w;
    const double k4w = rhs(r + dr, u + dr * k3u, k4u);
    u += dr / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    w += dr / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    if (record) {
      tr.u.push_back(u);
      tr.du.push_back(w);
    }
    if (u < 0.0) {
      tr.outcome = Outcome::Overshoot;
      return tr;
    }
    if (w > 0.0) {
      tr.outcome = Outcome::Undershoot;
      return tr;
    }
  }
  // Survived to r_max: classify by the sign of the growing mode.
  tr.outcome = (w + k * u > 0.0) ? Outcome::Undershoot : Outcome::Overshoot;
  return tr;
}

double smoothstep5(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep5_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

double RadialProfile::decay_rate() const { return std::sqrt(v0); }

RadialProfile solve_ground_state(double v0, double p, const ShootingOptions& opts) {
  if (!(v0 > 0.0)) throw PreconditionError("solve_ground_state: v0 must be positive");
  if (!(p > 2.0)) throw PreconditionError("solve_ground_state: p must exceed 2");
  if (!(opts.dr >= 0.0)) throw PreconditionError("solve_ground_state: dr must be positive (or 0 for the default)");
  const double k = std::sqrt(v0);
  const double dr_target = opts.dr > 0.0 ? opts.dr : 5e-4 / k;
  if (opts.r_max < 20.0 / k * (1.0 - 1e-12)) {
    throw PreconditionError("solve_ground_state: r_max must be at least 20/sqrt(v0)");
  }
  if (!(opts.tol > 0.0)) throw PreconditionError("solve_ground_state: tol must be positive");

  const auto steps = static_cast<std::size_t>(std::llround(opts.r_max / dr_target));
  const double dr = opts.r_max / static_cast<double>(steps);

  // The constant state v0^{1/(p-2)} undershoots; scan upward for an overshoot.
  const double base = std::pow(v0, 1.0 / (p - 2.0));
  double lo = base;
  double hi = 0.0;
  for (double trial = 1.5 * base; trial <= 10.0 * base * (1.0 + 1e-12); trial *= 1.5) {
    if (shoot(trial, v0, p, dr, steps, false).outcome == Outcome::Overshoot) {
      hi = trial;
      break;
    }
    lo = trial;
  }
  if (hi == 0.0) {
    std::ostringstream os;
    os << "solve_ground_state: no overshoot found scanning u(0) in [" << base << ", "
       << 10.0 * base << "]";
    throw SolverError(os.str());
  }

  // Bisect to `tol`, then keep going to machine precision: the tail is
  // trusted only while the two bracketing shots agree.
  int iterations = 0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (++iterations > opts.max_iterations && hi - lo > opts.tol) {
      std::ostringstream os;
      os << std::setprecision(17) << "solve_ground_state: bisection did not converge, last bracket ["
         << lo << ", " << hi << "]";
      throw SolverError(os.str());
    }
    if (shoot(mid, v0, p, dr, steps, false).outcome == Outcome::Overshoot) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  const Trajectory under = shoot(lo, v0, p, dr, steps, true);
  const Trajectory over = shoot(hi, v0, p, dr, steps, true);

  // The two bracketing shots agree until the growing mode separates them.
  const std::size_t common = std::min(under.u.size(), over.u.size());
  std::size_t trusted = common - 1;
  for (std::size_t j = 1; j < common; ++j) {
    const double avg = 0.5 * (under.u[j] + over.u[j]);
    if (std::abs(under.u[j] - over.u[j]) > 1e-4 * avg || avg <= 0.0) {
      trusted = j - 1;
      break;
    }
  }

  const double window = 2.0 / k;
  const auto window_steps = static_cast<std::size_t>(std::ceil(window / dr));
  const auto last_quarter = static_cast<std::size_t>(std::floor(0.75 * static_cast<double>(steps)));
  const std::size_t blend_end = std::min(trusted, last_quarter);
  if (blend_end < window_steps + static_cast<std::size_t>(5.0 / k / dr)) {
    throw SolverError("solve_ground_state: shooting lost accuracy before the decay region");
  }
  const std::size_t blend_begin = blend_end - window_steps;

  // Local fit of log(sqrt(r) U) + k r over the blend window.
  double log_c = 0.0;
  for (std::size_t j = blend_begin; j <= blend_end; ++j) {
    const double r = static_cast<double>(j) * dr;
    const double val = 0.5 * (under.u[j] + over.u[j]);
    log_c += std::log(std::sqrt(r) * val) + k * r;
  }
  log_c /= static_cast<double>(blend_end - blend_begin + 1);
  const double c_fit = std::exp(log_c);

  RadialProfile prof;
  prof.v0 = v0;
  prof.p = p;
  prof.dr = dr;
  prof.r_max = dr * static_cast<double>(steps);
  prof.u.resize(steps + 1);
  prof.du.resize(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) {
    const double r = static_cast<double>(j) * dr;
    double tail = 0.0;
    double dtail = 0.0;
    if (j >= blend_begin) {
      tail = c_fit * std::exp(-k * r) / std::sqrt(r);
      dtail = -tail * (k + 0.5 / r);
    }
    if (j < blend_begin) {
      prof.u[j] = 0.5 * (under.u[j] + over.u[j]);
      prof.du[j] = 0.5 * (under.du[j] + over.du[j]);
    } else if (j <= blend_end) {
      const double t = static_cast<double>(j - blend_begin) / static_cast<double>(window_steps);
      const double s = smoothstep5(t);
      const double ds = smoothstep5_derivative(t) / (static_cast<double>(window_steps) * dr);
      const double shot = 0.5 * (under.u[j] + over.u[j]);
      const double dshot = 0.5 * (under.du[j] + over.du[j]);
      prof.u[j] = (1.0 - s) * shot + s * tail;
      prof.du[j] = (1.0 - s) * dshot + s * dtail + ds * (tail - shot);
    } else {
      prof.u[j] = tail;
      prof.du[j] = dtail;
    }
  }
  prof.u0 = prof.u.front();

  // Least squares for log C over the last quarter of the samples.
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t j = last_quarter; j <= steps; ++j) {
    const double r = static_cast<double>(j) * dr;
    acc += std::log(std::sqrt(r) * prof.u[j]) + k * r;
    ++count;
  }
  prof.tail_amplitude = std::exp(acc / static_cast<double>(count));
  return prof;
}

double evaluate_radial(const RadialProfile& prof, double r) {
  r = std::abs(r);
  if (r >= prof.r_max) {
    const double k = prof.decay_rate();
    return prof.tail_amplitude * std::exp(-k * r) / std::sqrt(r);
  }
  const double x = r / prof.dr;
  auto j = static_cast<std::size_t>(x);
  if (j >= prof.u.size() - 1) j = prof.u.size() - 2;
  const double t = x - static_cast<double>(j);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * prof.u[j] + h10 * prof.dr * prof.du[j] + h01 * prof.u[j + 1] +
         h11 * prof.dr * prof.du[j + 1];
}

double evaluate_radial_derivative(const RadialProfile& prof, double r) {
  r = std::abs(r);
  if (r >= prof.r_max) {
    const double k = prof.decay_rate();
    const double tail = prof.tail_amplitude * std::exp(-k * r) / std::sqrt(r);
    return -tail * (k + 0.5 / r);
  }
  const double x = r / prof.dr;
  auto j = static_cast<std::size_t>(x);
  if (j >= prof.u.size() - 1) j = prof.u.size() - 2;
  const double t = x - static_cast<double>(j);
  const double t2 = t * t;
  const double d00 = 6.0 * t2 - 6.0 * t;
  const double d10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double d01 = -6.0 * t2 + 6.0 * t;
  const double d11 = 3.0 * t2 - 2.0 * t;
  return (d00 * prof.u[j] + d01 * prof.u[j + 1]) / prof.dr + d10 * prof.du[j] +
         d11 * prof.du[j + 1];
}

ProfileIntegrals profile_integrals(const RadialProfile& prof) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  ProfileIntegrals out;
  const std::size_t n = prof.u.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double r = prof.radius(j);
    const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    const double u = prof.u[j];
    out.mass2 += w * r * u * u;
    out.massp += w * r * std::pow(std::abs(u), prof.p);
    out.dirichlet += w * r * prof.du[j] * prof.du[j];
  }
  out.mass2 *= two_pi * prof.dr;
  out.massp *= two_pi * prof.dr;
  out.dirichlet *= two_pi * prof.dr;

  const double k = prof.decay_rate();
  const double big_r = prof.r_max;
  const double c = prof.tail_amplitude;
  const double tail2 = std::numbers::pi * c * c * std::exp(-2.0 * k * big_r) / k;
  const double grad_factor = k * (1.0 + 0.5 / (k * big_r));
  out.mass2 += tail2;
  out.dirichlet += grad_factor * grad_factor * tail2;
  out.massp += two_pi * std::pow(c, prof.p) * std::pow(big_r, 1.0 - 0.5 * prof.p) *
               std::exp(-prof.p * k * big_r) / (prof.p * k);
  return out;
}

double ode_residual(const RadialProfile& prof, int order, double r_min) {
  const auto& u = prof.u;
  const double dr = prof.dr;
  double worst = 0.0;
  const std::size_t n = u.size();
  for (std::size_t j = 5; j + 3 < n; ++j) {
    const double r = prof.radius(j);
    if (r < r_min) continue;
    double d1 = 0.0;
    double d2 = 0.0;
    if (order >= 4) {
      d1 = (-u[j + 2] + 8.0 * u[j + 1] - 8.0 * u[j - 1] + u[j - 2]) / (12.0 * dr);
      d2 = (-u[j + 2] + 16.0 * u[j + 1] - 30.0 * u[j] + 16.0 * u[j - 1] - u[j - 2]) /
           (12.0 * dr * dr);
    } else {
      d1 = (u[j + 1] - u[j - 1]) / (2.0 * dr);
      d2 = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (dr * dr);
    }
    const double res = d2 + d1 / r - prof.v0 * u[j] + power_term(u[j], prof.p);
    worst = std::max(worst, std::abs(res));
  }
  return worst / std::abs(prof.u0);
}

void write_profile(const RadialProfile& prof, const std::filesystem::path& stem) {
  auto csv_path = stem;
  csv_path += ".csv";
  auto json_path = stem;
  json_path += ".json";
  std::ofstream csv(csv_path);
  if (!csv) throw IoError("cannot open " + csv_path.string());
  csv << "r,U\n";
  for (std::size_t j = 0; j < prof.u.size(); ++j) {
    csv << format_double(prof.radius(j)) << ',' << format_double(prof.u[j]) << '\n';
  }
  nlohmann::ordered_json header;
  header["v0"] = prof.v0;
  header["p"] = prof.p;
  header["dr"] = prof.dr;
  header["r_max"] = prof.r_max;
  header["u0"] = prof.u0;
  header["tail_amplitude"] = prof.tail_amplitude;
  std::ofstream js(json_path);
  if (!js) throw IoError("cannot open " + json_path.string());
  js << dump_json(header) << '\n';
}

RadialProfile read_profile(const std::filesystem::path& stem) {
  auto csv_path = stem;
  csv_path += ".csv";
  auto json_path = stem;
  json_path += ".json";
  std::ifstream js(json_path);
  if (!js) throw IoError("cannot open " + json_path.string());
  nlohmann::json header;
  try {
    js >> header;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("bad profile header: ") + e.what());
  }
  RadialProfile prof;
  prof.v0 = header.at("v0").get<double>();
  prof.p = header.at("p").get<double>();
  prof.dr = header.at("dr").get<double>();
  prof.r_max = header.at("r_max").get<double>();
  prof.u0 = header.at("u0").get<double>();
  prof.tail_amplitude = header.at("tail_amplitude").get<double>();

  std::ifstream csv(csv_path);
  if (!csv) throw IoError("cannot open " + csv_path.string());
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    prof.u.push_back(std::stod(line.substr(comma + 1)));
  }
  if (prof.u.size() < 4) throw IoError("profile CSV too short: " + csv_path.string());
  // Derivatives are not stored; rebuild them by fourth-order differences.
  const std::size_t n = prof.u.size();
  const auto& u = prof.u;
  prof.du.assign(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    if (j >= 2 && j + 2 < n) {
      prof.du[j] = (-u[j + 2] + 8.0 * u[j + 1] - 8.0 * u[j - 1] + u[j - 2]) / (12.0 * prof.dr);
    } else if (j + 1 < n) {
      prof.du[j] = (u[j + 1] - u[j - 1]) / (2.0 * prof.dr);
    } else {
      prof.du[j] = -prof.u[j] * (prof.decay_rate() + 0.5 / prof.r_max);
    }
  }
  return prof;
}

}  // namespace css

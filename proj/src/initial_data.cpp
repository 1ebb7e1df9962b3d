#include "hemo/initial_data.hpp"

#include "hemo/interp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace hemo {

namespace {

double gridded_at(const PhiTerm& g, double t, double m, bool derivative) {
  const std::size_t nm = g.maturities.size();
  const std::size_t nt = g.times.size();
  auto row = [&](std::size_t i) {
    return interp::pchip(g.maturities, std::span<const double>(g.values.data() + i * nm, nm), m);
  };
  if (nt == 1) return derivative ? 0.0 : row(0);
  std::size_t i = 0;
  if (t >= g.times.back()) {
    i = nt - 2;
  } else if (t > g.times.front()) {
    i = static_cast<std::size_t>(std::upper_bound(g.times.begin(), g.times.end(), t) - g.times.begin()) - 1;
  }
  const double span = g.times[i + 1] - g.times[i];
  const double f0 = row(i), f1 = row(i + 1);
  if (derivative) return (t < g.times.front() || t > g.times.back()) ? 0.0 : (f1 - f0) / span;
  const double s = std::clamp((t - g.times[i]) / span, 0.0, 1.0);
  return f0 + s * (f1 - f0);
}

}  // namespace

double PhiTerm::operator()(double t, double m) const {
  switch (family) {
    case Family::constant: return value;
    case Family::product: return (c0 + c1 * t) * (d0 + d1 * m);
    case Family::bump: {
      if (m <= lo || m >= hi) return 0.0;
      const double s = std::sin(std::numbers::pi * (m - lo) / (hi - lo));
      return amplitude * s * s;
    }
    case Family::gridded: return gridded_at(*this, t, m, false);
  }
  return 0.0;
}

double PhiTerm::dt(double t, double m) const {
  switch (family) {
    case Family::product: return c1 * (d0 + d1 * m);
    case Family::gridded: return gridded_at(*this, t, m, true);
    default: return 0.0;
  }
}

InitialData InitialData::constant(double v) {
  PhiTerm p;
  p.family = PhiTerm::Family::constant;
  p.value = v;
  return InitialData({p});
}

InitialData InitialData::product(double c0, double c1, double d0, double d1) {
  PhiTerm p;
  p.family = PhiTerm::Family::product;
  p.c0 = c0;
  p.c1 = c1;
  p.d0 = d0;
  p.d1 = d1;
  return InitialData({p});
}

InitialData InitialData::bump(double amplitude, double lo, double hi) {
  if (!(lo < hi)) throw InitialDataError("bump needs lo < hi");
  PhiTerm p;
  p.family = PhiTerm::Family::bump;
  p.amplitude = amplitude;
  p.lo = lo;
  p.hi = hi;
  return InitialData({p});
}

InitialData InitialData::gridded(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InitialDataError("gridded initial data: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,m,phi") throw InitialDataError("gridded initial data: expected header 't,m,phi', got '" + line + "'");

  std::map<double, std::map<double, double>> table;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double t, m, v;
    if (!(row >> t >> m >> v) || !std::isfinite(t) || !std::isfinite(m) || !std::isfinite(v)) {
      throw InitialDataError("gridded initial data: bad row at line " + std::to_string(lineno));
    }
    table[t][m] = v;
  }
  if (table.empty()) throw InitialDataError("gridded initial data: no rows");

  PhiTerm p;
  p.family = PhiTerm::Family::gridded;
  for (const auto& [m, v] : table.begin()->second) p.maturities.push_back(m);
  if (p.maturities.size() < 2) throw InitialDataError("gridded initial data: need at least two maturities");
  for (const auto& [t, row] : table) {
    if (row.size() != p.maturities.size()) throw InitialDataError("gridded initial data: rows do not form a tensor grid");
    p.times.push_back(t);
    std::size_t j = 0;
    for (const auto& [m, v] : row) {
      if (m != p.maturities[j++]) throw InitialDataError("gridded initial data: maturity sets differ between times");
      p.values.push_back(v);
    }
  }
  return InitialData({p});
}

double InitialData::operator()(double t, double m) const {
  double s = 0.0;
  for (const auto& term : terms_) s += term(t, std::min(m, term.cap));
  return s;
}

double InitialData::dt(double t, double m) const {
  double s = 0.0;
  for (const auto& term : terms_) s += term.dt(t, std::min(m, term.cap));
  return s;
}

InitialData InitialData::plus(const InitialData& other) const {
  InitialData out = *this;
  out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
  return out;
}

InitialData InitialData::truncated(double b) const {
  if (!(b > 0.0 && b <= 1.0)) throw InitialDataError("truncation maturity must lie in (0, 1]");
  InitialData out = *this;
  for (auto& term : out.terms_) term.cap = std::min(term.cap, b);
  return out;
}

double InitialData::sup_norm(double tau_max) const {
  std::vector<double> ms;
  const int nm = 2048;
  for (int j = 0; j <= nm; ++j) ms.push_back(static_cast<double>(j) / nm);
  for (const auto& term : terms_) {
    if (term.family == PhiTerm::Family::bump) ms.push_back(0.5 * (term.lo + term.hi));
    if (term.family == PhiTerm::Family::gridded) ms.insert(ms.end(), term.maturities.begin(), term.maturities.end());
  }
  double sup = 0.0;
  const int nt = 64;
  for (int i = 0; i <= nt; ++i) {
    const double t = tau_max * i / nt;
    for (double m : ms) sup = std::max(sup, std::abs((*this)(t, std::clamp(m, 0.0, 1.0))));
  }
  return sup;
}

InitialData truncate_phi_b(const InitialData& phi, double b) { return phi.truncated(b); }

}  // namespace hemo

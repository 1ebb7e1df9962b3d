#pragma once

#include "hemo/dde.hpp"
#include "hemo/model.hpp"

#include <span>
#include <vector>

// Per-node delayed source terms of the field scheme. Nodes are independent, so the
// gain over a slice is computed either serially or with OpenMP; each node's sum runs
// in a fixed order, which keeps the two paths bitwise identical.

namespace hemo {

/// Log-maturity grid y_j = (j - J) dt, j = 0..J, with y_J = 0.
struct MaturityGrid {
  double dt = 0.0;
  int J = 0;
  std::vector<double> y;
  std::vector<double> m;

  std::size_t size() const noexcept { return y.size(); }
  double y_floor() const noexcept { return y.front(); }
};

MaturityGrid make_grid(const ValidatedModel& model, double dt, double y_min);

/// Read access to stored slices at arbitrary (t, y): monotone cubic in y within a
/// slice, monotone cubic across four slices in t, and the boundary trace below the grid.
class SliceLookup {
public:
  /// Slice k sits at time t0 + k dt; only the first `available` slices are read.
  SliceLookup(const MaturityGrid& grid, const std::vector<std::vector<double>>& slices, std::size_t available,
              double t0, const DdeSolution* trace, const std::vector<double>* floor_values);

  double operator()(double t, double y) const;
  double in_slice(std::size_t k, double y) const;
  double floor(double t) const;

private:
  const MaturityGrid& grid_;
  const std::vector<std::vector<double>>& slices_;
  std::size_t available_;
  double t0_;
  const DdeSolution* trace_;
  const std::vector<double>* floor_values_;
};

/// Source of the form pre_j \sum_q w_{jq} lambda(m_{jq}, N(t - a_q, y_j^src - a_q)).
struct GainTables {
  std::size_t nodes = 0;
  std::size_t order = 0;
  std::vector<double> ages;
  std::vector<double> prefactor;
  std::vector<double> y_source;
  std::vector<double> weight;    // [j * order + q]
  std::vector<double> m_source;  // maturity at which beta is evaluated, [j * order + q]
};

/// Division gain into node j: 2 (g^-1)'(m_j) \int k(a) xi(a, g^-1 m_j) lambda(N(t-a, Delta(a, m_j))) da.
GainTables make_gain_tables(const ValidatedModel& model, const MaturityGrid& grid, int order);
/// Division efflux from the proliferating phase at node j: \int k(a) xi(a, m_j) lambda(N(t-a, pi_{-a} m_j)) da.
GainTables make_efflux_tables(const ValidatedModel& model, const MaturityGrid& grid, int order);

double source_node(const GainTables& tables, const ValidatedModel& model, const SliceLookup& lookup, double t,
                   std::size_t j);

void source_serial(const GainTables& tables, const ValidatedModel& model, const SliceLookup& lookup, double t,
                   std::span<double> out);
/// workers <= 0 uses every available thread.
void source_parallel(const GainTables& tables, const ValidatedModel& model, const SliceLookup& lookup, double t,
                     std::span<double> out, int workers);

bool parallel_available();

}  // namespace hemo

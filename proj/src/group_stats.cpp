#include "actimetry/group_stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "actimetry/errors.hpp"

namespace actimetry {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::IS: return "IS";
    case Metric::IV: return "IV";
    case Metric::AlphaOverall: return "alpha";
    case Metric::AlphaDay: return "alpha_day";
    case Metric::AlphaNight: return "alpha_night";
    case Metric::PovF: return "PoV_F";
    case Metric::PovH: return "PoV_H";
    case Metric::CosinorR2: return "cosinor_R2";
  }
  return "?";
}

std::string_view metric_unit(Metric) { return "dimensionless"; }

Metric parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  throw InvalidParameter("unknown metric '" + std::string(name) + "'");
}

void MetricTable::add(MetricRow row) {
  for (const auto& r : rows_) {
    if (r.subject_id == row.subject_id) {
      throw InvalidParameter("MetricTable: duplicate subject id '" + row.subject_id + "'");
    }
  }
  rows_.push_back(std::move(row));
}

std::string_view alternative_name(Alternative a) {
  switch (a) {
    case Alternative::TwoSided: return "two-sided";
    case Alternative::Greater: return "greater";
    case Alternative::Less: return "less";
  }
  return "?";
}

std::string_view method_name(UTestMethod m) { return m == UTestMethod::Exact ? "exact" : "normal-approx"; }

// ---------------------------------------------------------------------------
// Mann-Whitney

std::vector<double> mann_whitney_null_distribution(std::size_t n1, std::size_t n2) {
  // p[m][n] holds P(U = u) for sizes (m, n). Recurrence on whether the largest
  // observation belongs to the first sample:
  //   P_{m,n}(u) = m/(m+n) P_{m-1,n}(u - n) + n/(m+n) P_{m,n-1}(u).
  const std::size_t umax = n1 * n2;
  std::vector<std::vector<std::vector<double>>> p(n1 + 1, std::vector<std::vector<double>>(n2 + 1));
  for (std::size_t m = 0; m <= n1; ++m) {
    for (std::size_t n = 0; n <= n2; ++n) {
      auto& cur = p[m][n];
      cur.assign(m * n + 1, 0.0);
      if (m == 0 || n == 0) {
        cur[0] = 1.0;
        continue;
      }
      const double wm = static_cast<double>(m) / static_cast<double>(m + n);
      const double wn = 1.0 - wm;
      const auto& left = p[m - 1][n];
      const auto& down = p[m][n - 1];
      for (std::size_t u = 0; u < cur.size(); ++u) {
        double v = 0.0;
        if (u >= n && u - n < left.size()) v += wm * left[u - n];
        if (u < down.size()) v += wn * down[u];
        cur[u] = v;
      }
    }
  }
  auto out = std::move(p[n1][n2]);
  out.resize(umax + 1, 0.0);
  return out;
}

UTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, Alternative alternative) {
  if (a.empty() || b.empty()) throw EmptyData("mann_whitney_u: both samples must be nonempty");
  for (double v : a) if (!std::isfinite(v)) throw InputError("mann_whitney_u: non-finite value");
  for (double v : b) if (!std::isfinite(v)) throw InputError("mann_whitney_u: non-finite value");

  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t n = n1 + n2;
  std::vector<std::pair<double, int>> pooled;
  pooled.reserve(n);
  for (double v : a) pooled.emplace_back(v, 0);
  for (double v : b) pooled.emplace_back(v, 1);
  std::sort(pooled.begin(), pooled.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
  bool ties = false;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    if (j - i > 1) {
      ties = true;
      tie_term += t * t * t - t;
    }
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].second == 0) rank_sum_a += midrank;
    }
    i = j;
  }

  UTestResult r;
  r.n1 = n1;
  r.n2 = n2;
  r.alternative = alternative;
  const double d1 = static_cast<double>(n1);
  const double d2 = static_cast<double>(n2);
  r.u_statistic = rank_sum_a - d1 * (d1 + 1.0) / 2.0;

  if (!ties && n1 * n2 <= 400) {
    r.method = UTestMethod::Exact;
    const auto dist = mann_whitney_null_distribution(n1, n2);
    const auto u = static_cast<std::size_t>(std::llround(r.u_statistic));
    double lower = 0.0;  // P(U <= u)
    for (std::size_t k = 0; k <= u; ++k) lower += dist[k];
    double upper = 0.0;  // P(U >= u)
    for (std::size_t k = u; k < dist.size(); ++k) upper += dist[k];
    switch (alternative) {
      case Alternative::TwoSided: r.p_value = std::min(1.0, 2.0 * std::min(lower, upper)); break;
      case Alternative::Greater: r.p_value = std::min(1.0, upper); break;
      case Alternative::Less: r.p_value = std::min(1.0, lower); break;
    }
    return r;
  }

  r.method = UTestMethod::NormalApprox;
  const double dn = static_cast<double>(n);
  const double mu = d1 * d2 / 2.0;
  const double var = d1 * d2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (!(var > 0)) {
    r.p_value = 1.0;
    return r;
  }
  const double sd = std::sqrt(var);
  const double diff = r.u_statistic - mu;
  switch (alternative) {
    case Alternative::TwoSided: {
      const double z = std::max(0.0, std::abs(diff) - 0.5) / sd;
      r.p_value = std::erfc(z / std::sqrt(2.0));
      break;
    }
    case Alternative::Greater: {
      const double z = (diff - 0.5) / sd;
      r.p_value = 0.5 * std::erfc(z / std::sqrt(2.0));
      break;
    }
    case Alternative::Less: {
      const double z = (diff + 0.5) / sd;
      r.p_value = 0.5 * std::erfc(-z / std::sqrt(2.0));
      break;
    }
  }
  r.p_value = std::clamp(r.p_value, 0.0, 1.0);
  return r;
}

// ---------------------------------------------------------------------------

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidParameter("pearson: inputs differ in length");
  if (x.size() < 3) throw InvalidParameter("pearson: need at least 3 pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0) || !(syy > 0)) throw DegenerateSeries("pearson: constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ---------------------------------------------------------------------------

namespace {

int group_rank(const std::string& name) {
  if (name == "non-intervention") return 0;
  if (name == "intervention") return 1;
  if (name == "dementia") return 2;
  if (name == "without-dementia") return 3;
  return 4;
}

bool group_less(const std::string& a, const std::string& b) {
  const int ra = group_rank(a), rb = group_rank(b);
  return ra != rb ? ra < rb : a < b;
}

}  // namespace

bool group_name_less(const std::string& a, const std::string& b) { return group_less(a, b); }

std::vector<MetricSummary> summarize(const MetricTable& table) {
  if (table.empty()) throw EmptyData("summarize: empty table");
  std::map<std::string, std::vector<const MetricRow*>, decltype(&group_less)> groups(&group_less);
  for (const auto& row : table.rows()) {
    groups[row.group.name()].push_back(&row);
    if (row.group.has_dementia()) groups["dementia"].push_back(&row);
  }
  std::vector<MetricSummary> out;
  for (const auto& [name, rows] : groups) {
    for (Metric m : kAllMetrics) {
      std::vector<double> v;
      for (const auto* r : rows) {
        if (auto x = r->get(m)) v.push_back(*x);
      }
      if (v.empty()) continue;
      MetricSummary s;
      s.group = name;
      s.metric = m;
      s.n = v.size();
      s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      s.min = *std::min_element(v.begin(), v.end());
      s.max = *std::max_element(v.begin(), v.end());
      if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

bool RowFilter::accepts(const Group& g) const {
  switch (kind) {
    case Kind::All: return true;
    case Kind::Dementia: return g.has_dementia();
    case Kind::Exact: return g == group;
  }
  return false;
}

std::string RowFilter::name() const {
  switch (kind) {
    case Kind::All: return "all";
    case Kind::Dementia: return "dementia";
    case Kind::Exact: return group.name();
  }
  return "?";
}

CorrelationMatrix metric_correlations(const MetricTable& table, std::span<const Metric> metrics,
                                      const RowFilter& filter) {
  if (metrics.empty()) throw InvalidParameter("metric_correlations: no metrics selected");
  std::vector<std::vector<double>> columns(metrics.size());
  for (const auto& row : table.rows()) {
    if (!filter.accepts(row.group)) continue;
    const bool complete = std::all_of(metrics.begin(), metrics.end(), [&](Metric m) { return row.get(m).has_value(); });
    if (!complete) continue;
    for (std::size_t i = 0; i < metrics.size(); ++i) columns[i].push_back(*row.get(metrics[i]));
  }
  const std::size_t n = columns.front().size();
  if (n < 3) {
    throw EmptyData("metric_correlations: filter '" + filter.name() + "' leaves " + std::to_string(n) +
                    " complete row(s); need at least 3");
  }
  CorrelationMatrix cm;
  cm.n_rows = n;
  cm.filter = filter.name();
  for (Metric m : metrics) cm.labels.emplace_back(metric_name(m));
  cm.values.assign(metrics.size(), std::vector<double>(metrics.size(), 1.0));
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    for (std::size_t j = i + 1; j < metrics.size(); ++j) {
      const double r = pearson(columns[i], columns[j]);
      cm.values[i][j] = r;
      cm.values[j][i] = r;
    }
  }
  return cm;
}

SweepCorrelations iv_sweep_correlations(std::span<const DeltaTable> tables) {
  SweepCorrelations out;
  if (tables.empty()) return out;

  std::set<std::string> keys;
  for (const auto& row : tables.front().table.rows()) keys.insert(row.subject_id);
  std::vector<RowFilter> filters{RowFilter::all()};
  std::set<std::string, decltype(&group_less)> seen(&group_less);
  for (const auto& row : tables.front().table.rows()) {
    if (seen.insert(row.group.name()).second) filters.push_back(RowFilter::exact(row.group));
  }
  std::sort(filters.begin() + 1, filters.end(),
            [](const RowFilter& a, const RowFilter& b) { return group_less(a.name(), b.name()); });

  constexpr std::array<Metric, 3> targets{Metric::IS, Metric::AlphaOverall, Metric::PovH};
  for (const auto& dt : tables) {
    std::set<std::string> these;
    for (const auto& row : dt.table.rows()) these.insert(row.subject_id);
    if (these != keys) {
      throw InvalidParameter("iv_sweep_correlations: table for delta " + std::to_string(dt.delta) +
                             " has different recording keys");
    }
    for (const auto& filter : filters) {
      for (Metric m : targets) {
        std::vector<double> iv, other;
        for (const auto& row : dt.table.rows()) {
          if (!filter.accepts(row.group)) continue;
          auto a = row.get(Metric::IV);
          auto b = row.get(m);
          if (a && b) {
            iv.push_back(*a);
            other.push_back(*b);
          }
        }
        try {
          out.points.push_back({dt.delta, filter.name(), m, pearson(iv, other)});
        } catch (const Error& e) {
          out.omitted.push_back({dt.delta, filter.name(), m, e.what()});
        }
      }
    }
  }
  return out;
}

}  // namespace actimetry

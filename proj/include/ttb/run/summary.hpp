#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ttb/run/records.hpp"

namespace ttb {

namespace stats_detail {

/// Continued fraction for the regularized incomplete beta function,
/// evaluated with the modified Lentz algorithm.
inline double beta_cf(double a, double b, double x) {
  const double eps = 3e-16;
  const double fpmin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

inline double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                    b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace stats_detail

inline double student_t_cdf(double t, int df) {
  double v = static_cast<double>(df);
  double x = v / (v + t * t);
  double tail = 0.5 * stats_detail::reg_inc_beta(v / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

/// Inverse CDF of the Student-t distribution, by bisection on the CDF.
inline double student_t_quantile(double p, int df) {
  if (df < 1) throw std::invalid_argument("student_t_quantile: df must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("student_t_quantile: p must be in (0,1)");
  double lo = -1e9, hi = 1e9;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, df) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Quantile with linear interpolation between order statistics (the R type-7
/// convention). `sorted` must be ascending and non-empty; q in [0,1].
inline double quantile_linear(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (sorted.size() == 1) return sorted.front();
  double pos = q * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct SummaryRow {
  TaskId task = TaskId::T1;
  std::string model_id;
  std::optional<long long> byte_limit;
  std::string metric;
  int count = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double ci95_halfwidth = 0.0;
};

inline const std::set<std::string>& known_metric_names() {
  static const std::set<std::string> names{
      "precision",      "recall",        "f1",
      "raw_parsable",   "output_compliance", "persons_relative_error",
      "type_coverage",  "degree_compliance"};
  return names;
}

/// Descriptive statistics for one sample (already the values of one group).
inline SummaryRow summarize_sample(std::vector<double> values) {
  SummaryRow row;
  std::sort(values.begin(), values.end());
  row.count = static_cast<int>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  row.mean = sum / static_cast<double>(values.size());
  row.median = quantile_linear(values, 0.5);
  row.q1 = quantile_linear(values, 0.25);
  row.q3 = quantile_linear(values, 0.75);
  row.min = values.front();
  row.max = values.back();
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - row.mean) * (v - row.mean);
    double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    if (sd > 0.0) {
      double t = student_t_quantile(0.975, static_cast<int>(values.size()) - 1);
      row.ci95_halfwidth = t * sd / std::sqrt(static_cast<double>(values.size()));
    }
  }
  return row;
}

/// Groups records by (task, model, byte limit, metric) and summarizes each
/// group. When `metric` is set, only that metric is reported; a name outside
/// the metric vocabulary is rejected. Row order is deterministic and
/// independent of the input record order.
inline std::vector<SummaryRow> summarize_records(const std::vector<ResultRecord>& records,
                                                 const std::optional<std::string>& metric = {}) {
  if (metric && known_metric_names().count(*metric) == 0) {
    throw std::invalid_argument("unknown metric '" + *metric + "'");
  }
  using Key = std::tuple<std::string, std::string, std::optional<long long>, std::string>;
  std::map<Key, std::vector<double>> groups;
  for (const auto& rec : records) {
    for (const auto& [name, value] : rec.metrics) {
      if (metric && name != *metric) continue;
      groups[{to_string(rec.task), rec.model_id, rec.byte_limit, name}].push_back(value);
    }
  }
  std::vector<SummaryRow> rows;
  for (auto& [key, values] : groups) {
    SummaryRow row = summarize_sample(std::move(values));
    row.task = *task_from_string(std::get<0>(key));
    row.model_id = std::get<1>(key);
    row.byte_limit = std::get<2>(key);
    row.metric = std::get<3>(key);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace summary_detail {

inline std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string fmt_limit(const std::optional<long long>& b) {
  return b ? std::to_string(*b) : std::string("-");
}

}  // namespace summary_detail

inline std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "task,model,byte_limit,metric,count,mean,median,q1,q3,min,max,ci95_halfwidth\n";
  for (const auto& r : rows) {
    out += to_string(r.task);
    out += ',';
    out += r.model_id;
    out += ',';
    out += r.byte_limit ? std::to_string(*r.byte_limit) : "";
    out += ',';
    out += r.metric;
    out += ',';
    out += std::to_string(r.count);
    for (double v : {r.mean, r.median, r.q1, r.q3, r.min, r.max, r.ci95_halfwidth}) {
      out += ',';
      out += summary_detail::fmt_num(v);
    }
    out += '\n';
  }
  return out;
}

/// Plain-text table with aligned columns and a footer stating how the
/// confidence interval is computed.
inline std::string summary_to_table(const std::vector<SummaryRow>& rows) {
  const std::vector<std::string> header{"task", "model",  "bytes", "metric", "n",
                                        "mean", "median", "q1",    "q3",     "min",
                                        "max",  "ci95"};
  std::vector<std::vector<std::string>> cells;
  cells.push_back(header);
  for (const auto& r : rows) {
    cells.push_back({to_string(r.task), r.model_id, summary_detail::fmt_limit(r.byte_limit),
                     r.metric, std::to_string(r.count), summary_detail::fmt_num(r.mean),
                     summary_detail::fmt_num(r.median), summary_detail::fmt_num(r.q1),
                     summary_detail::fmt_num(r.q3), summary_detail::fmt_num(r.min),
                     summary_detail::fmt_num(r.max), summary_detail::fmt_num(r.ci95_halfwidth)});
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t i = 0; i < cells[r].size(); ++i) {
      if (i) out += "  ";
      out += cells[r][i];
      out.append(widths[i] - cells[r][i].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < widths.size(); ++i) total += widths[i] + (i ? 2 : 0);
      out.append(total, '-');
      out += '\n';
    }
  }
  out +=
      "ci95 is the 95% confidence half-width from the Student-t distribution "
      "(0.975 quantile, n-1 degrees of freedom); 0 when n = 1 or the sample "
      "has no variance.\n";
  return out;
}

}  // namespace ttb

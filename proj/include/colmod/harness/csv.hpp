#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "colmod/analytic/bloch.hpp"
#include "colmod/ledger/entropy_ledger.hpp"

namespace colmod::harness {

inline constexpr std::array<const char*, 21> kLedgerColumns = {
    "run_id",         "theta",         "beta",          "r1_0",          "r2_0",        "r3_0",
    "step",           "dS_A",          "beta_dQ_A",     "neg_dS_B",      "neg_dS_B_loc", "mutual_info",
    "clausius_gap",   "extrinsic_gap", "wolf_residual", "incr_dS_A",     "incr_beta_dQ_A", "incr_neg_dS_b",
    "t_trace_norm",   "t_bound",       "product_distance"};

/// Extra columns in `both` mode: |exact - analytic| per quantity.
inline constexpr std::array<const char*, 4> kDeviationColumns = {"dev_r", "dev_dS_A", "dev_beta_dQ_A",
                                                                 "dev_neg_dS_B_loc"};

struct Deviations {
  double r = 0.0;
  double dS_A = 0.0;
  double beta_dQ_A = 0.0;
  double neg_dS_B_loc = 0.0;

  double max() const { return std::max({r, dS_A, beta_dQ_A, neg_dS_B_loc}); }
};

struct CsvRow {
  std::size_t run_id = 0;
  double theta = 0.0;
  double beta = 0.0;
  std::optional<BlochVector> r0;
  std::size_t step = 0;
  StepLedger ledger;
  bool analytic = false;  ///< only the closed-form quantities are meaningful
  std::optional<double> t_trace_norm;
  std::optional<double> t_bound;
  std::optional<double> product_distance;
  std::optional<Deviations> deviations;
};

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

class LedgerCsv {
 public:
  explicit LedgerCsv(bool deviation_columns = false) : deviation_columns_(deviation_columns) {}

  bool deviation_columns() const noexcept { return deviation_columns_; }
  const std::vector<CsvRow>& rows() const noexcept { return rows_; }
  void add(CsvRow row) { rows_.push_back(std::move(row)); }

  std::vector<std::string> header() const {
    std::vector<std::string> out(kLedgerColumns.begin(), kLedgerColumns.end());
    if (deviation_columns_) out.insert(out.end(), kDeviationColumns.begin(), kDeviationColumns.end());
    return out;
  }

  std::vector<std::string> cells(const CsvRow& row) const {
    auto num = [](std::optional<double> v) { return v ? format_double(*v) : std::string(); };
    const StepLedger& l = row.ledger;
    const bool exact = !row.analytic;
    std::vector<std::string> out = {
        std::to_string(row.run_id),
        format_double(row.theta),
        format_double(row.beta),
        row.r0 ? format_double(row.r0->x) : "",
        row.r0 ? format_double(row.r0->y) : "",
        row.r0 ? format_double(row.r0->z) : "",
        std::to_string(row.step),
        format_double(l.dS_A),
        format_double(l.beta_dQ_A),
        exact ? num(l.neg_dS_B) : "",
        format_double(l.neg_dS_B_loc),
        exact ? num(l.mutual_info) : "",
        format_double(l.clausius_gap),
        exact ? num(l.extrinsic_gap) : "",
        exact ? num(l.wolf_residual) : "",
        format_double(l.incr_dS_A),
        format_double(l.incr_beta_dQ_A),
        format_double(l.incr_neg_dS_b),
        num(row.t_trace_norm),
        num(row.t_bound),
        num(row.product_distance),
    };
    if (deviation_columns_) {
      if (row.deviations) {
        for (double v : {row.deviations->r, row.deviations->dS_A, row.deviations->beta_dQ_A,
                         row.deviations->neg_dS_B_loc}) {
          out.push_back(format_double(v));
        }
      } else {
        out.insert(out.end(), kDeviationColumns.size(), std::string());
      }
    }
    return out;
  }

  void write(std::ostream& os) const {
    auto line = [&](const std::vector<std::string>& cols) {
      for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
      os << '\n';
    };
    line(header());
    for (const auto& row : rows_) line(cells(row));
  }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

 private:
  bool deviation_columns_;
  std::vector<CsvRow> rows_;
};

}  // namespace colmod::harness

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "xyquench/correlators.hpp"
#include "xyquench/ensemble.hpp"
#include "xyquench/entanglement.hpp"
#include "xyquench/scan.hpp"

namespace xyq {

/// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_real(double x);
std::string format_temperature(const Temperature& t);
/// Accepts everything format_real and format_temperature emit.
double parse_real(std::string_view s);

/// Ordered key/value record printed by the single-point commands.
class OutputRecord {
 public:
  using Value = std::variant<double, long long, std::string>;

  OutputRecord& add(std::string key, double v);
  OutputRecord& add(std::string key, long long v);
  OutputRecord& add(std::string key, int v) { return add(std::move(key), static_cast<long long>(v)); }
  OutputRecord& add(std::string key, std::string v);
  OutputRecord& add(std::string key, const char* v) { return add(std::move(key), std::string(v)); }

  const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }

  /// Single-line JSON object. Non-finite reals become strings.
  std::string json() const;
  std::string csv_header() const;
  std::string csv_row() const;

 private:
  std::vector<std::pair<std::string, Value>> fields_;
};

OutputRecord correlator_record(const CorrelatorSet& c);
OutputRecord witness_record(const WitnessReport& r);
OutputRecord thermalization_record(const ThermalizationResult& r);

/// One scan CSV line. Reals of failed cells are NaN.
struct ScanCsvRow {
  double h0 = 0.0;
  double h = 0.0;
  double t_th = 0.0;
  double pre_mu1 = 0.0;
  double pre_mu2 = 0.0;
  double pre_neg = 0.0;
  double th_mu1 = 0.0;
  double th_mu2 = 0.0;
  double th_neg = 0.0;
  Region class_mu1 = Region::Neither;
  Region class_mu2 = Region::Neither;
  std::string status = "ok";
};

std::string_view scan_csv_header();
std::vector<ScanCsvRow> scan_rows(const ScanResult& result);
void write_scan_csv(std::ostream& out, std::span<const ScanCsvRow> rows);
void write_scan_csv(std::ostream& out, const ScanResult& result);
/// Throws std::runtime_error on a malformed file.
std::vector<ScanCsvRow> read_scan_csv(std::istream& in);

/// Both region maps side by side, h on the horizontal axis, h0 upward.
void write_region_svg(std::ostream& out, const ScanResult& result);

struct RegionStyle {
  Region region;
  std::string_view color;
  std::string_view label;
};
std::span<const RegionStyle> region_styles();

}  // namespace xyq

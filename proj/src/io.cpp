#include "xyquench/io.hpp"

#include <array>
#include <charconv>
#include <limits>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace xyq {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x + 0.0);  // -0 prints as 0
}

std::string format_temperature(const Temperature& t) {
  switch (t.kind()) {
    case Temperature::Kind::Zero: return "0";
    case Temperature::Kind::Infinite: return "inf";
    case Temperature::Kind::Finite: break;
  }
  return format_real(t.value());
}

double parse_real(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::runtime_error(fmt::format("not a number: '{}'", s));
  return v;
}

OutputRecord& OutputRecord::add(std::string key, double v) {
  fields_.emplace_back(std::move(key), v);
  return *this;
}

OutputRecord& OutputRecord::add(std::string key, long long v) {
  fields_.emplace_back(std::move(key), v);
  return *this;
}

OutputRecord& OutputRecord::add(std::string key, std::string v) {
  fields_.emplace_back(std::move(key), std::move(v));
  return *this;
}

namespace {

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20)
          out += fmt::format("\\u{:04x}", static_cast<unsigned>(ch));
        else
          out += ch;
    }
  }
  return out + "\"";
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string OutputRecord::json() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, value] : fields_) {
    if (!first) out += ", ";
    first = false;
    out += json_string(key) + ": ";
    if (const double* d = std::get_if<double>(&value))
      out += std::isfinite(*d) ? format_real(*d) : json_string(format_real(*d));
    else if (const long long* i = std::get_if<long long>(&value))
      out += std::to_string(*i);
    else
      out += json_string(std::get<std::string>(value));
  }
  return out + "}";
}

std::string OutputRecord::csv_header() const {
  std::string out;
  for (const auto& f : fields_) {
    if (!out.empty()) out += ',';
    out += csv_field(f.first);
  }
  return out;
}

std::string OutputRecord::csv_row() const {
  std::string out;
  bool first = true;
  for (const auto& [key, value] : fields_) {
    if (!first) out += ',';
    first = false;
    if (const double* d = std::get_if<double>(&value))
      out += format_real(*d);
    else if (const long long* i = std::get_if<long long>(&value))
      out += std::to_string(*i);
    else
      out += csv_field(std::get<std::string>(value));
  }
  return out;
}

OutputRecord correlator_record(const CorrelatorSet& c) {
  OutputRecord r;
  r.add("g_c", c.g_c).add("g_s", c.g_s).add("g_0", c.g_0);
  r.add("sxsx", c.sxsx).add("sysy", c.sysy).add("szsz", c.szsz).add("sz", c.sz);
  return r;
}

OutputRecord witness_record(const WitnessReport& w) {
  OutputRecord r;
  r.add("mu1", w.mu1).add("mu2", w.mu2).add("negativity", w.negativity);
  r.add("detection", std::string(to_string(w.detection)));
  return r;
}

OutputRecord thermalization_record(const ThermalizationResult& t) {
  OutputRecord r;
  r.add("t_th", format_temperature(t.t_th));
  r.add("lhs", t.lhs).add("rhs", t.rhs).add("residual", t.residual);
  r.add("iterations", t.iterations);
  r.add("matched_energy_density", t.matched_energy_density());
  r.add("postquench_energy_density", t.postquench_energy_density());
  return r;
}

std::string_view scan_csv_header() {
  return "h0,h,t_th,pre_mu1,pre_mu2,pre_neg,th_mu1,th_mu2,th_neg,class_mu1,class_mu2,status";
}

std::vector<ScanCsvRow> scan_rows(const ScanResult& result) {
  std::vector<ScanCsvRow> rows;
  rows.reserve(result.cells.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < result.cells.size(); ++k) {
    const CellResult& c = result.cells[k];
    ScanCsvRow r;
    r.h0 = c.h0;
    r.h = c.h;
    r.class_mu1 = result.mu1_map.cells[k];
    r.class_mu2 = result.mu2_map.cells[k];
    if (c.ok()) {
      r.t_th = c.t_th.kind() == Temperature::Kind::Zero       ? 0.0
               : c.t_th.kind() == Temperature::Kind::Infinite ? std::numeric_limits<double>::infinity()
                                                              : c.t_th.value();
      r.pre_mu1 = c.prethermal.mu1;
      r.pre_mu2 = c.prethermal.mu2;
      r.pre_neg = c.prethermal.negativity;
      r.th_mu1 = c.thermal.mu1;
      r.th_mu2 = c.thermal.mu2;
      r.th_neg = c.thermal.negativity;
    } else {
      r.t_th = r.pre_mu1 = r.pre_mu2 = r.pre_neg = r.th_mu1 = r.th_mu2 = r.th_neg = nan;
      r.status = "error: " + c.error;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_scan_csv(std::ostream& out, std::span<const ScanCsvRow> rows) {
  out << scan_csv_header() << '\n';
  for (const auto& r : rows) {
    out << format_real(r.h0) << ',' << format_real(r.h) << ',' << format_real(r.t_th) << ','
        << format_real(r.pre_mu1) << ',' << format_real(r.pre_mu2) << ',' << format_real(r.pre_neg) << ','
        << format_real(r.th_mu1) << ',' << format_real(r.th_mu2) << ',' << format_real(r.th_neg) << ','
        << to_string(r.class_mu1) << ',' << to_string(r.class_mu2) << ',' << csv_field(r.status) << '\n';
  }
}

void write_scan_csv(std::ostream& out, const ScanResult& result) {
  const auto rows = scan_rows(result);
  write_scan_csv(out, rows);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"' && cur.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw std::runtime_error(fmt::format("line {}: unterminated quote", lineno));
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

std::vector<ScanCsvRow> read_scan_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != scan_csv_header()) throw std::runtime_error("missing or unexpected CSV header");
  std::vector<ScanCsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line, lineno);
    if (f.size() != 12) throw std::runtime_error(fmt::format("line {}: expected 12 fields, got {}", lineno, f.size()));
    ScanCsvRow r;
    try {
      double* reals[] = {&r.h0, &r.h, &r.t_th, &r.pre_mu1, &r.pre_mu2, &r.pre_neg, &r.th_mu1, &r.th_mu2, &r.th_neg};
      for (std::size_t i = 0; i < 9; ++i) *reals[i] = parse_real(f[i]);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(fmt::format("line {}: {}", lineno, e.what()));
    }
    const auto c1 = parse_region(f[9]);
    const auto c2 = parse_region(f[10]);
    if (!c1 || !c2) throw std::runtime_error(fmt::format("line {}: unknown region class", lineno));
    r.class_mu1 = *c1;
    r.class_mu2 = *c2;
    r.status = f[11];
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

constexpr std::array<RegionStyle, 5> kStyles{{
    {Region::Neither, "#ffffff", "not detected"},
    {Region::PrethermalOnly, "#8e44ad", "prethermal only"},
    {Region::ThermalOnly, "#27ae60", "thermal only"},
    {Region::Both, "#2c3e50", "prethermal and thermal"},
    {Region::Invalid, "#bdbdbd", "evaluation failed"},
}};

std::string_view color_of(Region r) {
  for (const auto& s : kStyles)
    if (s.region == r) return s.color;
  return "#000000";
}

}  // namespace

std::span<const RegionStyle> region_styles() { return kStyles; }

void write_region_svg(std::ostream& out, const ScanResult& result) {
  const std::size_t rows = result.h0_values.size();
  const std::size_t cols = result.h_values.size();
  const double panel = 360.0;
  const double margin = 60.0;
  const double gap = 50.0;
  const double cw = panel / static_cast<double>(cols);
  const double ch = panel / static_cast<double>(rows);
  const double legend_h = 30.0 + 20.0 * kStyles.size();
  const double width = 2 * margin + 2 * panel + gap;
  const double height = 2 * margin + panel + legend_h;
  const auto& cfg = result.config;

  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:g}\" height=\"{:g}\" viewBox=\"0 0 {:g} {:g}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height, width, height);
  out << fmt::format("<text x=\"{:g}\" y=\"24\" font-size=\"14\">gamma = {}, gamma0 = {}</text>\n", margin,
                     format_real(cfg.gamma), format_real(cfg.pre_gamma()));

  const RegionMap* maps[] = {&result.mu1_map, &result.mu2_map};
  for (int m = 0; m < 2; ++m) {
    const RegionMap& map = *maps[m];
    const double x0 = margin + m * (panel + gap);
    const double y0 = margin;
    out << fmt::format("<g id=\"{}\">\n", to_string(map.detector));
    out << fmt::format("<text x=\"{:g}\" y=\"{:g}\">{} &lt; threshold</text>\n", x0, y0 - 8,
                       to_string(map.detector));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        const double x = x0 + cw * static_cast<double>(j);
        const double y = y0 + panel - ch * static_cast<double>(i + 1);
        out << fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"{}\"/>\n", x, y,
                           cw, ch, color_of(map.at(i, j)));
      }
    out << fmt::format("<rect x=\"{:g}\" y=\"{:g}\" width=\"{:g}\" height=\"{:g}\" fill=\"none\" stroke=\"#000\"/>\n",
                       x0, y0, panel, panel);
    out << fmt::format("<text x=\"{:g}\" y=\"{:g}\">{}</text>\n", x0, y0 + panel + 16,
                       format_real(result.h_values.front()));
    out << fmt::format("<text x=\"{:g}\" y=\"{:g}\" text-anchor=\"end\">{}</text>\n", x0 + panel, y0 + panel + 16,
                       format_real(result.h_values.back()));
    out << fmt::format("<text x=\"{:g}\" y=\"{:g}\" text-anchor=\"middle\">h</text>\n", x0 + panel / 2,
                       y0 + panel + 16);
    out << fmt::format("<text x=\"{:g}\" y=\"{:g}\" text-anchor=\"end\">{}</text>\n", x0 - 4, y0 + panel,
                       format_real(result.h0_values.front()));
    out << fmt::format("<text x=\"{:g}\" y=\"{:g}\" text-anchor=\"end\">{}</text>\n", x0 - 4, y0 + 10,
                       format_real(result.h0_values.back()));
    out << fmt::format("<text x=\"{:g}\" y=\"{:g}\" text-anchor=\"end\">h0</text>\n", x0 - 4, y0 + panel / 2);
    out << "</g>\n";
  }

  double ly = margin + panel + 40;
  out << "<g id=\"legend\">\n";
  for (const auto& s : kStyles) {
    out << fmt::format(
        "<rect x=\"{:g}\" y=\"{:g}\" width=\"14\" height=\"14\" fill=\"{}\" stroke=\"#000\"/>"
        "<text x=\"{:g}\" y=\"{:g}\">{}</text>\n",
        margin, ly, s.color, margin + 20, ly + 11, s.label);
    ly += 20;
  }
  out << "</g>\n</svg>\n";
}

}  // namespace xyq

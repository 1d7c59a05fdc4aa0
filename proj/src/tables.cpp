#include "lungkit/tables.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace lungkit {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string sig6(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::MalformedInput, "CSV lacks column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);  // UTF-8 BOM
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (first) {
      t.header = std::move(fields);
      first = false;
      continue;
    }
    if (fields.size() != t.header.size())
      throw Error(ErrorCode::MalformedInput, path.string() + ": row has " + std::to_string(fields.size()) +
                                                 " fields, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(fields));
  }
  if (first) throw Error(ErrorCode::MalformedInput, path.string() + ": missing header row");
  return t;
}

std::optional<double> parse_optional_number(const std::string& field) {
  if (field.empty() || field == "NA" || field == "nan") return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v))
    throw Error(ErrorCode::MalformedInput, "not a number: '" + field + "'");
  return v;
}

std::vector<SubjectRecord> join_scores_and_labs(const CsvTable& scores, const CsvTable& labs) {
  const std::size_t s_id = scores.column("id"), s_dl = scores.column("dl"), s_ds = scores.column("ds");
  const std::size_t l_id = labs.column("id"), l_wbc = labs.column("wbc"), l_lym = labs.column("lym_pct");

  std::map<std::string, const std::vector<std::string>*> lab_rows;
  for (const auto& row : labs.rows)
    if (!lab_rows.emplace(row[l_id], &row).second)
      throw Error(ErrorCode::MalformedInput, "duplicate lab id '" + row[l_id] + "'");

  std::vector<SubjectRecord> out;
  std::size_t unmatched = 0;
  for (const auto& row : scores.rows) {
    const auto it = lab_rows.find(row[s_id]);
    if (it == lab_rows.end()) {
      ++unmatched;
      continue;
    }
    SubjectRecord rec;
    rec.id = row[s_id];
    rec.dl = parse_optional_number(row[s_dl]);
    rec.ds = parse_optional_number(row[s_ds]);
    rec.wbc = parse_optional_number((*it->second)[l_wbc]);
    rec.lym_pct = parse_optional_number((*it->second)[l_lym]);
    if (rec.wbc && !(*rec.wbc > 0.0))
      throw Error(ErrorCode::MalformedInput, rec.id + ": wbc must be > 0");
    if (rec.lym_pct && (*rec.lym_pct < 0.0 || *rec.lym_pct > 100.0))
      throw Error(ErrorCode::MalformedInput, rec.id + ": lym_pct must lie in [0, 100]");
    out.push_back(std::move(rec));
    lab_rows.erase(it);
  }
  unmatched += lab_rows.size();
  if (unmatched > 0) warn(std::to_string(unmatched) + " subjects lack either scores or labs and were dropped");
  return out;
}

void write_correlation_report(std::ostream& out, std::span<const CorrelationResult> results) {
  out << "score,lab,n,r,p,significant\n";
  for (const auto& r : results) {
    out << r.score << ',' << r.lab << ',' << r.n << ',';
    if (r.failure) out << "NA,NA,false\n";
    else out << sig6(r.r) << ',' << sig6(r.p) << ',' << (r.significant ? "true" : "false") << '\n';
  }
}

void write_metrics_header(std::ostream& out) { out << "id,dsc,ji,asd_mm,n_a,n_b\n"; }

void write_metrics_row(std::ostream& out, const std::string& id, const SegMetrics& m) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f", m.dsc, m.ji, m.asd_mm);
  out << id << ',' << buf << ',' << m.n_a << ',' << m.n_b << '\n';
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace lungkit

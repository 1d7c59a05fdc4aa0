#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lungkit/seg_metrics.hpp"
#include "lungkit/severity.hpp"

namespace lungkit {

/// Minimal comma-separated reader: no quoting, first row is the header,
/// blank lines skipped, surrounding whitespace trimmed.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; throws MalformedInput if absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Empty field (or "NA") is missing; anything else must parse fully.
std::optional<double> parse_optional_number(const std::string& field);

/// Lab file `id,wbc,lym_pct` joined with score file `id,dl,ds` on id, in
/// score-file order. Subjects present in only one file are dropped with a warning.
std::vector<SubjectRecord> join_scores_and_labs(const CsvTable& scores, const CsvTable& labs);

/// `score,lab,n,r,p,significant`; r and p with 6 significant digits, NA for
/// failed pairs.
void write_correlation_report(std::ostream& out, std::span<const CorrelationResult> results);

/// `id,dsc,ji,asd_mm,n_a,n_b` header line.
void write_metrics_header(std::ostream& out);
/// One metrics row with 6 decimals.
void write_metrics_row(std::ostream& out, const std::string& id, const SegMetrics& m);

/// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> values);

}  // namespace lungkit

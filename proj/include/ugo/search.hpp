#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ugo/forms.hpp"
#include "ugo/intarith.hpp"

namespace ugo {

/// plus: n^2 - 4, minus: n^2 + 4, chowla: 4n^2 + 1 (squarefree only).
enum class ScanFamily { plus, minus, chowla };
enum class ScanFilter { all, class_number_one, two_torsion_wide, two_torsion_narrow, maximal_only };
enum class OutputFormat { csv, jsonl };

std::string_view to_string(ScanFamily f);
std::string_view to_string(ScanFilter f);
ScanFamily parse_scan_family(std::string_view s);
ScanFilter parse_scan_filter(std::string_view s);
OutputFormat parse_output_format(std::string_view s);
/// "both" expands to plus and minus.
std::vector<ScanFamily> parse_family_list(std::string_view s);

struct ScanConfig {
  std::vector<ScanFamily> families{ScanFamily::plus, ScanFamily::minus};
  std::int64_t n_min = 0;
  std::int64_t n_max = 0;
  ScanFilter filter = ScanFilter::all;
  int jobs = 1;
  std::optional<std::string> checkpoint_path;
  std::string out_path;
  OutputFormat format = OutputFormat::csv;

  /// Throws RangeError / DomainError on an unusable configuration.
  void validate() const;
  /// Identifies the output a configuration produces (jobs and paths excluded).
  std::string fingerprint() const;
};

struct ScanItem {
  ScanFamily family = ScanFamily::plus;
  std::int64_t n = 0;
  friend bool operator==(const ScanItem&, const ScanItem&) = default;
};

/// Every valid (family, n) of the configuration, family-major then by n.
std::vector<ScanItem> scan_items(const ScanConfig& config);
/// Discriminant of a scan item; RangeError past 2^62.
std::int64_t item_discriminant(const ScanItem& item);

struct TableRow {
  std::string family;  ///< plus, minus, chowla; "none" for inspected discriminants
  std::int64_t n = 0;
  std::int64_t delta = 0;
  std::int64_t f = 1;
  std::int64_t delta0 = 0;
  std::int64_t h = 0;
  std::int64_t h_plus = 0;
  ClassGroupStructure cl;
  ClassGroupStructure cl_plus;
  int unit_norm = 1;
  long double regulator = 0;
  int mu = 1;
  std::int64_t genus_order = 1;
  bool maximal = true;
  std::optional<int> rd_row;
  bool one_class_per_genus = false;
  bool two_torsion_wide = false;
};

/// All invariants of one discriminant. Throws ConsistencyError when the
/// internal cross-checks disagree.
TableRow compute_row(std::int64_t delta, std::string family, std::int64_t n,
                     const intarith::FactorSieve* sieve = nullptr);

bool passes_filter(const TableRow& row, ScanFilter filter);

/// Deterministic 1% audit selection for pruned items.
bool is_audited(const ScanItem& item);

struct ItemResult {
  std::optional<TableRow> row;   ///< present iff the item passes the filter
  std::optional<std::string> overflow;  ///< row-level error record
  bool pruned = false;           ///< rejected by a parity or genus bound
  bool audited = false;          ///< pruned by parity, then recomputed
};

/// Evaluates one item under a filter, using parity and genus-order bounds
/// before any class group work.
ItemResult evaluate_item(const ScanItem& item, ScanFilter filter, const intarith::FactorSieve* sieve);

/// Shared sieve large enough for every item of the configuration (nullptr
/// when that exceeds the table cap).
std::shared_ptr<const intarith::FactorSieve> sieve_for_config(const ScanConfig& config);

/// Reference implementation: one item at a time on the calling thread.
std::vector<TableRow> scan_serial(const ScanConfig& config);
/// OpenMP implementation with config.jobs threads; same rows in the same order.
std::vector<TableRow> scan_parallel(const ScanConfig& config);

std::string csv_header();
std::string to_csv(const TableRow& row);
std::string to_jsonl(const TableRow& row);
std::string format_row(const TableRow& row, OutputFormat fmt);

struct ScanStats {
  std::int64_t items = 0;
  std::int64_t rows = 0;
  std::int64_t pruned = 0;
  std::int64_t audited = 0;
  std::int64_t overflows = 0;
  bool interrupted = false;
  bool resumed = false;
};

struct ScanControl {
  std::size_t chunk_size = 512;
  /// Stop after this many chunks (testing aid); 0 means no limit.
  std::size_t halt_after_chunks = 0;
  /// Checked between chunks.
  const std::atomic<bool>* stop = nullptr;
};

/// Writes the scan to config.out_path. With a checkpoint the file is resumed
/// from the last completed chunk. Overflow records go to `log`.
ScanStats scan_to_file(const ScanConfig& config, std::ostream& log, const ScanControl& control = {});

/// Maximal orders (f = 1) of class number one among the configured families.
std::vector<TableRow> classify_maximal(ScanConfig config);

struct InspectReport {
  TableRow row;
  std::vector<std::vector<BQF>> cycles;  ///< one per narrow class, starting at the representative
  int principal = 0;
  int negative_principal = 0;
  std::optional<std::string> fundamental_unit;  ///< absent when it exceeds 128 bits
  std::optional<std::string> unit_cf;           ///< regular expansion of the fundamental unit
  std::optional<std::int64_t> unit_index;       ///< over the maximal order
  std::optional<std::string> conductor_report;
  std::vector<std::string> unit_generated;      ///< family:n entries
  std::optional<std::int64_t> period_length;

  std::string to_text() const;
  std::string to_json() const;
};

InspectReport inspect(std::int64_t delta);

}  // namespace ugo

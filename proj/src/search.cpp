#include "ugo/search.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ugo/cfrac.hpp"
#include "ugo/errors.hpp"
#include "ugo/genus.hpp"
#include "ugo/orders.hpp"
#include "ugo/relations.hpp"

namespace ugo {

using intarith::i128;
using json = nlohmann::ordered_json;

namespace {

constexpr ScanFamily kAllFamilies[] = {ScanFamily::plus, ScanFamily::minus, ScanFamily::chowla};

std::string format_regulator(long double r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", static_cast<double>(r));
  return buf;
}

i128 raw_discriminant(ScanFamily fam, std::int64_t n) {
  const i128 sq = static_cast<i128>(n) * n;
  switch (fam) {
    case ScanFamily::plus: return sq - 4;
    case ScanFamily::minus: return sq + 4;
    case ScanFamily::chowla: return 4 * sq + 1;
  }
  return 0;
}

bool item_is_valid(ScanFamily fam, std::int64_t n) {
  switch (fam) {
    case ScanFamily::plus: return n >= 0 && n != 2;
    case ScanFamily::minus: return n >= 1;
    case ScanFamily::chowla: {
      if (n < 1) return false;
      const i128 d = raw_discriminant(fam, n);
      // Out-of-range values stay in the list and surface as overflow records.
      if (d > intarith::kMaxInput) return true;
      return intarith::is_squarefree(static_cast<std::int64_t>(d));
    }
  }
  return false;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

TableRow row_from_group(std::int64_t delta, std::string family, std::int64_t n, const OrderDescriptor& od,
                        const intarith::Factorization& fac, const FormClassGroup& g) {
  TableRow row;
  row.family = std::move(family);
  row.n = n;
  row.delta = delta;
  row.f = od.conductor;
  row.delta0 = od.delta0;
  row.maximal = od.conductor == 1;
  row.h_plus = g.narrow_class_number();
  row.h = g.class_number();
  if (delta > 0) {
    const UnitSummary us = unit_summary(delta);
    if ((us.norm == -1) != g.has_unit_of_norm_minus_one()) {
      throw ConsistencyError("delta " + std::to_string(delta) + ": unit norm " + std::to_string(us.norm) +
                             " disagrees with the negative principal class");
    }
    row.unit_norm = us.norm;
    row.regulator = us.regulator;
    if (auto rd = richaud_degert_classify(od.delta0)) row.rd_row = rd->row;
  }
  row.cl_plus = g.narrow_structure();
  row.cl = g.wide_structure();
  if (row.cl.order != row.h || row.cl_plus.order != row.h_plus) {
    throw ConsistencyError("delta " + std::to_string(delta) + ": group structure order mismatch");
  }
  row.mu = mu(delta, fac);
  row.genus_order = std::int64_t{1} << (row.mu - 1);
  row.one_class_per_genus = is_two_torsion(row.cl_plus);
  if (row.one_class_per_genus != (row.h_plus == row.genus_order)) {
    throw ConsistencyError("delta " + std::to_string(delta) + ": Cl+ = " + row.cl_plus.to_string() +
                           " disagrees with genus order " + std::to_string(row.genus_order));
  }
  row.two_torsion_wide = is_two_torsion(row.cl);
  return row;
}

intarith::Factorization factor_abs(std::int64_t delta, const intarith::FactorSieve* sieve) {
  return intarith::factor_with(sieve, delta < 0 ? -delta : delta);
}

std::vector<ItemResult> run_items(const std::vector<ScanItem>& items, std::size_t begin, std::size_t end,
                                  ScanFilter filter, const intarith::FactorSieve* sieve, int jobs, bool parallel) {
  const auto count = static_cast<std::int64_t>(end - begin);
  std::vector<ItemResult> results(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  auto body = [&](std::int64_t i) {
    try {
      results[static_cast<std::size_t>(i)] = evaluate_item(items[begin + static_cast<std::size_t>(i)], filter, sieve);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
    for (std::int64_t i = 0; i < count; ++i) body(i);
  } else {
    for (std::int64_t i = 0; i < count; ++i) body(i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::vector<TableRow> collect_rows(const ScanConfig& config, bool parallel) {
  config.validate();
  const auto items = scan_items(config);
  const auto sieve = sieve_for_config(config);
  std::vector<TableRow> rows;
  constexpr std::size_t kChunk = 512;
  for (std::size_t b = 0; b < items.size(); b += kChunk) {
    const std::size_t e = std::min(items.size(), b + kChunk);
    for (auto& r : run_items(items, b, e, config.filter, sieve.get(), config.jobs, parallel)) {
      if (r.row) rows.push_back(std::move(*r.row));
    }
  }
  return rows;
}

struct Checkpoint {
  std::string config;
  std::uintmax_t output_bytes = 0;
  std::map<std::string, std::int64_t> done;
};

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read checkpoint " + path);
  Checkpoint cp;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "config") {
      cp.config = val;
    } else if (key == "output_bytes") {
      cp.output_bytes = std::stoull(val);
    } else if (key.rfind("done.", 0) == 0) {
      cp.done[key.substr(5)] = std::stoll(val);
    }
  }
  if (cp.config.empty()) throw Error("malformed checkpoint " + path);
  return cp;
}

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint " + tmp);
    out << "version=1\n";
    out << "config=" << cp.config << "\n";
    out << "output_bytes=" << cp.output_bytes << "\n";
    for (const auto& [fam, n] : cp.done) out << "done." << fam << "=" << n << "\n";
    out.flush();
    if (!out) throw Error("cannot write checkpoint " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

json row_json(const TableRow& r) {
  json j;
  j["family"] = r.family;
  j["n"] = r.n;
  j["delta"] = r.delta;
  j["f"] = r.f;
  j["delta0"] = r.delta0;
  j["h"] = r.h;
  j["h_plus"] = r.h_plus;
  j["cl"] = r.cl.to_string();
  j["cl_plus"] = r.cl_plus.to_string();
  j["unit_norm"] = r.unit_norm;
  j["regulator"] = std::stod(format_regulator(r.regulator));
  j["mu"] = r.mu;
  j["genus_order"] = r.genus_order;
  j["maximal"] = r.maximal;
  j["rd_row"] = r.rd_row ? json(*r.rd_row) : json(nullptr);
  j["one_class_per_genus"] = r.one_class_per_genus;
  j["two_torsion_wide"] = r.two_torsion_wide;
  return j;
}

}  // namespace

std::string_view to_string(ScanFamily f) {
  switch (f) {
    case ScanFamily::plus: return "plus";
    case ScanFamily::minus: return "minus";
    case ScanFamily::chowla: return "chowla";
  }
  return "?";
}

std::string_view to_string(ScanFilter f) {
  switch (f) {
    case ScanFilter::all: return "all";
    case ScanFilter::class_number_one: return "class-number-one";
    case ScanFilter::two_torsion_wide: return "two-torsion-wide";
    case ScanFilter::two_torsion_narrow: return "two-torsion-narrow";
    case ScanFilter::maximal_only: return "maximal-only";
  }
  return "?";
}

ScanFamily parse_scan_family(std::string_view s) {
  for (ScanFamily f : kAllFamilies) {
    if (to_string(f) == s) return f;
  }
  throw Error("unknown family: " + std::string(s));
}

ScanFilter parse_scan_filter(std::string_view s) {
  for (ScanFilter f : {ScanFilter::all, ScanFilter::class_number_one, ScanFilter::two_torsion_wide,
                       ScanFilter::two_torsion_narrow, ScanFilter::maximal_only}) {
    if (to_string(f) == s) return f;
  }
  throw Error("unknown filter: " + std::string(s));
}

OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "jsonl") return OutputFormat::jsonl;
  throw Error("unknown format: " + std::string(s));
}

std::vector<ScanFamily> parse_family_list(std::string_view s) {
  if (s == "both") return {ScanFamily::plus, ScanFamily::minus};
  return {parse_scan_family(s)};
}

void ScanConfig::validate() const {
  if (families.empty()) throw Error("no family selected");
  if (n_min < 0) throw Error("n-min must be non-negative");
  if (n_min > n_max) throw Error("n-min exceeds n-max");
  if (jobs < 1) throw Error("jobs must be at least 1");
}

std::string ScanConfig::fingerprint() const {
  std::vector<ScanFamily> fams = families;
  std::sort(fams.begin(), fams.end());
  fams.erase(std::unique(fams.begin(), fams.end()), fams.end());
  std::string s = "families=";
  for (std::size_t i = 0; i < fams.size(); ++i) {
    if (i) s += "+";
    s += to_string(fams[i]);
  }
  s += ";n=" + std::to_string(n_min) + ".." + std::to_string(n_max);
  s += ";filter=" + std::string(to_string(filter));
  s += ";format=" + std::string(format == OutputFormat::csv ? "csv" : "jsonl");
  return s;
}

std::vector<ScanItem> scan_items(const ScanConfig& config) {
  config.validate();
  std::vector<ScanItem> items;
  for (ScanFamily fam : kAllFamilies) {
    if (std::find(config.families.begin(), config.families.end(), fam) == config.families.end()) continue;
    for (std::int64_t n = config.n_min; n <= config.n_max; ++n) {
      if (item_is_valid(fam, n)) items.push_back({fam, n});
    }
  }
  return items;
}

std::int64_t item_discriminant(const ScanItem& item) {
  const i128 d = raw_discriminant(item.family, item.n);
  if (d > intarith::kMaxInput) {
    throw RangeError(std::string(to_string(item.family)) + " n=" + std::to_string(item.n) + " exceeds 2^62");
  }
  return static_cast<std::int64_t>(d);
}

TableRow compute_row(std::int64_t delta, std::string family, std::int64_t n, const intarith::FactorSieve* sieve) {
  const OrderDescriptor od = decompose(delta);
  const FormClassGroup g(delta, sieve);
  return row_from_group(delta, std::move(family), n, od, factor_abs(delta, sieve), g);
}

bool passes_filter(const TableRow& row, ScanFilter filter) {
  switch (filter) {
    case ScanFilter::all: return true;
    case ScanFilter::class_number_one: return row.h == 1;
    case ScanFilter::two_torsion_wide: return row.two_torsion_wide;
    case ScanFilter::two_torsion_narrow: return row.one_class_per_genus;
    case ScanFilter::maximal_only: return row.maximal;
  }
  return false;
}

bool is_audited(const ScanItem& item) {
  const std::uint64_t key = (static_cast<std::uint64_t>(item.family) << 56) ^ static_cast<std::uint64_t>(item.n);
  return splitmix64(key) % 100 == 0;
}

ItemResult evaluate_item(const ScanItem& item, ScanFilter filter, const intarith::FactorSieve* sieve) {
  ItemResult res;
  std::int64_t delta = 0;
  try {
    delta = item_discriminant(item);
  } catch (const RangeError& e) {
    res.overflow = e.what();
    return res;
  }
  const std::string family(to_string(item.family));
  try {
    const OrderDescriptor od = decompose(delta);
    if (filter == ScanFilter::maximal_only && !od.is_maximal()) {
      res.pruned = true;
      return res;
    }
    const auto fac = factor_abs(delta, sieve);
    if (filter == ScanFilter::class_number_one && delta > 0 && wide_parity_predicate(delta, fac) == Parity::even) {
      res.pruned = true;
      if (!is_audited(item)) return res;
      res.audited = true;
      const FormClassGroup g(delta, sieve);
      if (g.class_number() % 2 != 0) {
        throw ConsistencyError("parity audit: delta " + std::to_string(delta) + " predicted even, h = " +
                               std::to_string(g.class_number()));
      }
      return res;
    }
    const FormClassGroup g(delta, sieve);
    switch (filter) {
      case ScanFilter::class_number_one:
        if (g.class_number() != 1) return res;
        break;
      case ScanFilter::two_torsion_wide:
        // |Cl| <= |Cl / Cl^2| <= genus order for a 2-torsion group
        if (g.class_number() > (std::int64_t{1} << (mu(delta, fac) - 1))) {
          res.pruned = true;
          return res;
        }
        break;
      case ScanFilter::two_torsion_narrow:
        if (g.narrow_class_number() != (std::int64_t{1} << (mu(delta, fac) - 1))) {
          res.pruned = true;
          return res;
        }
        break;
      default: break;
    }
    TableRow row = row_from_group(delta, family, item.n, od, fac, g);
    if (passes_filter(row, filter)) res.row = std::move(row);
  } catch (const OverflowError& e) {
    res.overflow = family + " n=" + std::to_string(item.n) + " delta=" + std::to_string(delta) + ": " + e.what();
  }
  return res;
}

std::shared_ptr<const intarith::FactorSieve> sieve_for_config(const ScanConfig& config) {
  i128 max_delta = 0;
  for (ScanFamily fam : config.families) max_delta = std::max(max_delta, raw_discriminant(fam, config.n_max));
  const i128 limit = max_delta / 4 + 1;
  if (limit > static_cast<i128>(intarith::FactorSieve::kMaxLimit)) return nullptr;
  return intarith::FactorSieve::shared(static_cast<std::uint64_t>(limit));
}

std::vector<TableRow> scan_serial(const ScanConfig& config) { return collect_rows(config, false); }

std::vector<TableRow> scan_parallel(const ScanConfig& config) { return collect_rows(config, true); }

std::string csv_header() {
  return "family,n,delta,f,delta0,h,h_plus,cl,cl_plus,unit_norm,regulator,mu,genus_order,maximal,rd_row,"
         "one_class_per_genus,two_torsion_wide";
}

std::string to_csv(const TableRow& r) {
  std::ostringstream os;
  os << r.family << ',' << r.n << ',' << r.delta << ',' << r.f << ',' << r.delta0 << ',' << r.h << ',' << r.h_plus
     << ',' << r.cl.to_string() << ',' << r.cl_plus.to_string() << ',' << r.unit_norm << ','
     << format_regulator(r.regulator) << ',' << r.mu << ',' << r.genus_order << ',' << (r.maximal ? 1 : 0) << ','
     << (r.rd_row ? std::to_string(*r.rd_row) : "") << ',' << (r.one_class_per_genus ? 1 : 0) << ','
     << (r.two_torsion_wide ? 1 : 0);
  return os.str();
}

std::string to_jsonl(const TableRow& row) { return row_json(row).dump(); }

std::string format_row(const TableRow& row, OutputFormat fmt) {
  return fmt == OutputFormat::csv ? to_csv(row) : to_jsonl(row);
}

ScanStats scan_to_file(const ScanConfig& config, std::ostream& log, const ScanControl& control) {
  config.validate();
  if (config.out_path.empty()) throw Error("scan needs an output path");
  const auto items = scan_items(config);
  const std::string fp = config.fingerprint();
  ScanStats stats;
  stats.items = static_cast<std::int64_t>(items.size());

  Checkpoint cp;
  cp.config = fp;
  for (ScanFamily fam : config.families) cp.done[std::string(to_string(fam))] = config.n_min - 1;

  std::size_t start = 0;
  std::ofstream out;
  const bool resuming = config.checkpoint_path && std::filesystem::exists(*config.checkpoint_path);
  if (resuming) {
    cp = load_checkpoint(*config.checkpoint_path);
    if (cp.config != fp) {
      throw Error("checkpoint " + *config.checkpoint_path + " belongs to a different scan (" + cp.config + ")");
    }
    if (!std::filesystem::exists(config.out_path) || std::filesystem::file_size(config.out_path) < cp.output_bytes) {
      throw Error("output " + config.out_path + " is shorter than its checkpoint");
    }
    std::filesystem::resize_file(config.out_path, cp.output_bytes);
    out.open(config.out_path, std::ios::app | std::ios::binary);
    while (start < items.size()) {
      const auto it = cp.done.find(std::string(to_string(items[start].family)));
      if (it == cp.done.end() || items[start].n > it->second) break;
      ++start;
    }
    stats.resumed = true;
  } else {
    out.open(config.out_path, std::ios::trunc | std::ios::binary);
    if (out && config.format == OutputFormat::csv) out << csv_header() << '\n';
  }
  if (!out) throw Error("cannot open output " + config.out_path);
  out.flush();
  auto checkpoint_now = [&]() {
    if (!config.checkpoint_path) return;
    cp.output_bytes = std::filesystem::file_size(config.out_path);
    save_checkpoint(*config.checkpoint_path, cp);
  };
  if (!resuming) checkpoint_now();

  const auto sieve = sieve_for_config(config);
  const std::size_t chunk = std::max<std::size_t>(1, control.chunk_size);
  std::size_t chunks_done = 0;
  for (std::size_t b = start; b < items.size(); b += chunk) {
    const std::size_t e = std::min(items.size(), b + chunk);
    auto results = run_items(items, b, e, config.filter, sieve.get(), config.jobs, true);
    for (std::size_t i = 0; i < results.size(); ++i) {
      auto& r = results[i];
      if (r.overflow) {
        log << "overflow: " << *r.overflow << '\n';
        ++stats.overflows;
      }
      if (r.pruned) ++stats.pruned;
      if (r.audited) ++stats.audited;
      if (r.row) {
        out << format_row(*r.row, config.format) << '\n';
        ++stats.rows;
      }
      const ScanItem& it = items[b + i];
      cp.done[std::string(to_string(it.family))] = it.n;
    }
    out.flush();
    if (!out) throw Error("write to " + config.out_path + " failed");
    checkpoint_now();
    ++chunks_done;
    const bool more = e < items.size();
    if (more && ((control.halt_after_chunks && chunks_done >= control.halt_after_chunks) ||
                 (control.stop && control.stop->load()))) {
      stats.interrupted = true;
      break;
    }
  }
  return stats;
}

std::vector<TableRow> classify_maximal(ScanConfig config) {
  config.filter = ScanFilter::class_number_one;
  std::vector<TableRow> rows = scan_parallel(config);
  std::erase_if(rows, [](const TableRow& r) { return !r.maximal; });
  return rows;
}

InspectReport inspect(std::int64_t delta) {
  const OrderDescriptor od = decompose(delta);
  InspectReport rep;
  const auto ug = classify_unit_generated(delta);
  for (const auto& p : ug) rep.unit_generated.push_back(std::string(to_string(p.family)) + ":" + std::to_string(p.n));
  const std::string family = ug.empty() ? "none" : std::string(to_string(ug.front().family));
  const std::int64_t n = ug.empty() ? 0 : ug.front().n;
  const std::int64_t mag = delta < 0 ? -delta : delta;
  const auto sieve = mag / 4 + 1 <= (std::int64_t{1} << 27)
                         ? intarith::FactorSieve::shared(static_cast<std::uint64_t>(mag / 4 + 1))
                         : nullptr;
  const FormClassGroup g(delta, sieve.get());
  rep.row = row_from_group(delta, family, n, od, factor_abs(delta, sieve.get()), g);
  for (int id = 0; id < static_cast<int>(g.narrow_class_number()); ++id) rep.cycles.push_back(g.cycle(id));
  rep.principal = g.principal();
  rep.negative_principal = g.negative_principal();
  if (delta > 0) {
    try {
      rep.fundamental_unit = fundamental_unit(delta).to_string();
    } catch (const OverflowError&) {
    }
    rep.period_length = unit_period_length(delta);
    if (*rep.period_length <= 2000) {
      const std::int64_t s = intarith::isqrt(delta);
      const std::int64_t b = (s - delta) % 2 == 0 ? s : s - 1;
      rep.unit_cf = cf_expand(QuadIrrational::make(b, 2, delta)).to_string();
    }
    rep.unit_index = unit_index(od.delta0, delta);
    rep.conductor_report = class_number_via_conductor(od.delta0, od.conductor).to_string();
  }
  return rep;
}

std::string InspectReport::to_text() const {
  std::ostringstream os;
  const TableRow& r = row;
  os << "delta: " << r.delta << '\n';
  os << "conductor: " << r.f << '\n';
  os << "delta0: " << r.delta0 << '\n';
  os << "maximal: " << (r.maximal ? "yes" : "no") << '\n';
  os << "unit-generated: ";
  if (unit_generated.empty()) os << "no";
  for (std::size_t i = 0; i < unit_generated.size(); ++i) os << (i ? ", " : "") << unit_generated[i];
  os << '\n';
  os << "rd_row: " << (r.rd_row ? std::to_string(*r.rd_row) : "none") << '\n';
  os << "h: " << r.h << "  Cl = " << r.cl.to_pretty() << '\n';
  os << "h_plus: " << r.h_plus << "  Cl+ = " << r.cl_plus.to_pretty() << '\n';
  os << "unit_norm: " << r.unit_norm << '\n';
  os << "regulator: " << format_regulator(r.regulator) << '\n';
  if (period_length) os << "period_length: " << *period_length << '\n';
  if (r.delta > 0) os << "fundamental_unit: " << (fundamental_unit ? *fundamental_unit : "exceeds 128 bits") << '\n';
  if (unit_cf) os << "cf: " << *unit_cf << '\n';
  if (unit_index) os << "unit_index: " << *unit_index << '\n';
  if (conductor_report) os << "conductor formula: " << *conductor_report << '\n';
  os << "mu: " << r.mu << "  genus_order: " << r.genus_order << '\n';
  os << "one_class_per_genus: " << (r.one_class_per_genus ? "yes" : "no") << '\n';
  os << "two_torsion_wide: " << (r.two_torsion_wide ? "yes" : "no") << '\n';
  os << "classes:\n";
  for (std::size_t id = 0; id < cycles.size(); ++id) {
    os << "  [" << id << "]";
    if (static_cast<int>(id) == principal) os << " principal";
    if (static_cast<int>(id) == negative_principal) os << " negative-principal";
    os << ':';
    for (const auto& f : cycles[id]) os << ' ' << f.to_string();
    os << '\n';
  }
  return os.str();
}

std::string InspectReport::to_json() const {
  json j = row_json(row);
  j["unit_generated"] = unit_generated;
  j["cl_pretty"] = row.cl.to_pretty();
  j["cl_plus_pretty"] = row.cl_plus.to_pretty();
  j["period_length"] = period_length ? json(*period_length) : json(nullptr);
  j["fundamental_unit"] = fundamental_unit ? json(*fundamental_unit) : json(nullptr);
  j["cf"] = unit_cf ? json(*unit_cf) : json(nullptr);
  j["unit_index"] = unit_index ? json(*unit_index) : json(nullptr);
  j["conductor_formula"] = conductor_report ? json(*conductor_report) : json(nullptr);
  j["principal_class"] = principal;
  j["negative_principal_class"] = negative_principal;
  json classes = json::array();
  for (const auto& cyc : cycles) {
    json c = json::array();
    for (const auto& f : cyc) c.push_back({f.a, f.b, f.c});
    classes.push_back(c);
  }
  j["classes"] = classes;
  return j.dump(2);
}

}  // namespace ugo

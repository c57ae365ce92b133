// ugo: invariants of quadratic orders and scans over unit-generated families.

#include <atomic>
#include <charconv>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ugo/errors.hpp"
#include "ugo/relations.hpp"
#include "ugo/search.hpp"
#include "ugo/verify.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_sigint(int) { g_stop.store(true); }

constexpr int kInterrupted = 130;

std::int64_t parse_delta(const std::string& s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ugo::ValidationError("not an integer: " + s);
  return v;
}

void print_rows(const std::vector<ugo::TableRow>& rows, ugo::OutputFormat fmt, std::ostream& os) {
  if (fmt == ugo::OutputFormat::csv) os << ugo::csv_header() << '\n';
  for (const auto& r : rows) os << ugo::format_row(r, fmt) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariants of quadratic orders and unit-generated order scans"};
  app.require_subcommand(1);

  // scan
  auto* scan = app.add_subcommand("scan", "Tabulate a family of unit-generated orders");
  std::string family = "both", filter = "all", format = "csv", out_path, checkpoint;
  std::int64_t n_min = 0, n_max = 0;
  int jobs = 1;
  std::size_t halt_after = 0;
  scan->add_option("--family", family, "plus|minus|both|chowla")
      ->check(CLI::IsMember({"plus", "minus", "both", "chowla"}));
  scan->add_option("--n-min", n_min)->required();
  scan->add_option("--n-max", n_max)->required();
  scan->add_option("--filter", filter, "all|class-number-one|two-torsion-wide|two-torsion-narrow|maximal-only")
      ->check(CLI::IsMember({"all", "class-number-one", "two-torsion-wide", "two-torsion-narrow", "maximal-only"}));
  scan->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  scan->add_option("--checkpoint", checkpoint);
  scan->add_option("--out", out_path)->required();
  scan->add_option("--format", format)->check(CLI::IsMember({"csv", "jsonl"}));
  scan->add_option("--halt-after", halt_after)->group("");

  // inspect
  auto* insp = app.add_subcommand("inspect", "Every invariant of one discriminant");
  std::string delta_text;
  bool as_json = false;
  insp->add_option("DELTA", delta_text)->required();
  insp->add_flag("--json", as_json);

  // verify
  auto* ver = app.add_subcommand("verify", "Run an exhaustive cross-check suite");
  std::string suite;
  ugo::VerifyBounds bounds;
  ver->add_option("SUITE", suite)->required()->check(CLI::IsMember({"parity", "genus", "conductor", "cf", "group-axioms"}));
  ver->add_option("--max-delta", bounds.max_delta);
  ver->add_option("--max-n", bounds.max_n);
  ver->add_option("--samples", bounds.samples);
  ver->add_option("--seed", bounds.seed);
  ver->add_option("--jobs", bounds.jobs)->check(CLI::PositiveNumber);

  // stats
  auto* stats = app.add_subcommand("stats", "Trend statistics over the families");
  stats->require_subcommand(1);
  auto* hua = stats->add_subcommand("hua", "log h / log n over both families");
  std::int64_t hua_min = 0, hua_max = 0;
  bool hua_summary = false;
  int stat_jobs = 1;
  hua->add_option("--n-min", hua_min)->required();
  hua->add_option("--n-max", hua_max)->required();
  hua->add_option("--jobs", stat_jobs)->check(CLI::PositiveNumber);
  hua->add_flag("--summary-only", hua_summary);
  auto* bounded = stats->add_subcommand("bounded", "|log h - log n| / log log (n + 20) over small delta0");
  std::int64_t d0_max = 5, b_min = 1, b_max = 10000;
  bounded->add_option("--delta0-max", d0_max)->required();
  bounded->add_option("--n-min", b_min);
  bounded->add_option("--n-max", b_max);
  bounded->add_option("--jobs", stat_jobs)->check(CLI::PositiveNumber);

  // classify-maximal
  auto* cmax = app.add_subcommand("classify-maximal", "Maximal unit-generated orders of class number one");
  std::int64_t cm_min = 0, cm_max = 10000;
  std::string cm_format = "csv", cm_out;
  int cm_jobs = 1;
  cmax->add_option("--n-min", cm_min);
  cmax->add_option("--n-max", cm_max);
  cmax->add_option("--jobs", cm_jobs)->check(CLI::PositiveNumber);
  cmax->add_option("--format", cm_format)->check(CLI::IsMember({"csv", "jsonl"}));
  cmax->add_option("--out", cm_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ugo::ExitCode::usage);
  }

  try {
    if (*scan) {
      ugo::ScanConfig cfg;
      cfg.families = ugo::parse_family_list(family);
      cfg.n_min = n_min;
      cfg.n_max = n_max;
      cfg.filter = ugo::parse_scan_filter(filter);
      cfg.jobs = jobs;
      if (!checkpoint.empty()) cfg.checkpoint_path = checkpoint;
      cfg.out_path = out_path;
      cfg.format = ugo::parse_output_format(format);
      ugo::ScanControl control;
      control.halt_after_chunks = halt_after;
      control.stop = &g_stop;
      std::signal(SIGINT, on_sigint);
      const ugo::ScanStats st = ugo::scan_to_file(cfg, std::cerr, control);
      std::cerr << "scan: " << st.rows << " rows from " << st.items << " parameters (" << st.pruned << " pruned, "
                << st.audited << " audited, " << st.overflows << " overflow)" << (st.resumed ? ", resumed" : "")
                << '\n';
      if (st.interrupted) {
        std::cerr << "scan interrupted; rerun with the same --checkpoint to resume\n";
        return kInterrupted;
      }
      return st.overflows ? static_cast<int>(ugo::ExitCode::overflow) : 0;
    }
    if (*insp) {
      const ugo::InspectReport rep = ugo::inspect(parse_delta(delta_text));
      std::cout << (as_json ? rep.to_json() + "\n" : rep.to_text());
      return 0;
    }
    if (*ver) {
      const ugo::VerifyReport rep = ugo::run_verify(ugo::parse_verify_suite(suite), bounds);
      std::cout << rep.summary() << '\n';
      return rep.passed() ? 0 : static_cast<int>(ugo::ExitCode::verification_failure);
    }
    if (*hua) {
      std::vector<ugo::UnitGeneratedParam> params;
      for (auto fam : {ugo::Family::plus, ugo::Family::minus}) {
        for (std::int64_t n = std::max<std::int64_t>(hua_min, 3); n <= hua_max; ++n) params.push_back({fam, n});
      }
      const auto res = ugo::hua_trend(params, stat_jobs);
      if (!hua_summary) {
        std::cout << "family,n,h,log_h_over_log_n\n";
        for (const auto& s : res.samples) {
          std::printf("%s,%lld,%lld,%.6f\n", std::string(ugo::to_string(s.family)).c_str(),
                      static_cast<long long>(s.n), static_cast<long long>(s.h), s.log_h_over_log_n);
        }
      }
      std::printf("samples=%zu mean=%.6f min=%.6f max=%.6f\n", res.samples.size(), res.mean, res.min, res.max);
      return 0;
    }
    if (*bounded) {
      const auto res = ugo::bounded_family_statistic(d0_max, b_min, b_max, stat_jobs);
      std::cout << "family,n,delta0,h,ratio\n";
      for (const auto& s : res.samples) {
        std::printf("%s,%lld,%lld,%lld,%.6f\n", std::string(ugo::to_string(s.family)).c_str(),
                    static_cast<long long>(s.n), static_cast<long long>(s.delta0), static_cast<long long>(s.h),
                    s.ratio);
      }
      std::printf("samples=%zu mean=%.6f max=%.6f\n", res.samples.size(), res.mean, res.max);
      return 0;
    }
    if (*cmax) {
      ugo::ScanConfig cfg;
      cfg.n_min = cm_min;
      cfg.n_max = cm_max;
      cfg.jobs = cm_jobs;
      const auto rows = ugo::classify_maximal(cfg);
      const auto fmt = ugo::parse_output_format(cm_format);
      if (cm_out.empty()) {
        print_rows(rows, fmt, std::cout);
      } else {
        std::ofstream os(cm_out);
        if (!os) throw ugo::Error("cannot open " + cm_out);
        print_rows(rows, fmt, os);
      }
      return 0;
    }
  } catch (const ugo::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ugo::ExitCode::usage);
  }
  return 0;
}

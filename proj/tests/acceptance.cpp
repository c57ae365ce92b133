// End-to-end acceptance run: one PASS/FAIL line per criterion.
#include <omp.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ugo/cfrac.hpp"
#include "ugo/forms.hpp"
#include "ugo/genus.hpp"
#include "ugo/relations.hpp"
#include "ugo/search.hpp"
#include "ugo/verify.hpp"

#ifndef UGO_EXE
#error "UGO_EXE must name the ugo executable"
#endif

namespace fs = std::filesystem;
using namespace ugo;

namespace {

struct CsvRow {
  std::string family;
  std::int64_t n = 0, delta = 0, f = 0, h = 0, h_plus = 0;
  std::string cl, cl_plus;
};

std::vector<CsvRow> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::vector<CsvRow> rows;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> col;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) col.push_back(cell);
    if (col.size() < 9) throw std::runtime_error("short CSV line: " + line);
    rows.push_back({col[0], std::stoll(col[1]), std::stoll(col[2]), std::stoll(col[3]), std::stoll(col[5]),
                    std::stoll(col[6]), col[7], col[8]});
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(UGO_EXE) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("ugo_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int jobs() { return std::max(1, omp_get_num_procs()); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Unit-generated orders of class number one: (family, delta, f).
const std::set<std::tuple<std::string, std::int64_t, std::int64_t>> kClassNumberOne = {
    {"plus", -4, 1},  {"plus", -3, 1},   {"plus", 5, 1},     {"plus", 12, 1},    {"plus", 21, 1},
    {"plus", 32, 2},  {"plus", 45, 3},   {"plus", 77, 1},    {"plus", 117, 3},   {"plus", 437, 1},
    {"minus", 5, 1},  {"minus", 8, 1},   {"minus", 13, 1},   {"minus", 20, 2},   {"minus", 29, 1},
    {"minus", 53, 1}, {"minus", 68, 2},  {"minus", 125, 5},  {"minus", 173, 1},  {"minus", 293, 1},
};

// Unit-generated orders with 2-torsion wide class group: family, wide
// structure, narrow structure, conductor, discriminants. Delta = 5 occurs in
// both families.
struct TwoTorsionBlock {
  std::string family, cl, cl_plus;
  std::int64_t f;
  std::vector<std::int64_t> deltas;
};
const std::vector<TwoTorsionBlock> kTwoTorsionWide = {
    {"plus", "1", "1", 1, {-4, -3, 5}},
    {"plus", "1", "2", 1, {12, 21, 77, 437}},
    {"plus", "1", "2", 2, {32}},
    {"plus", "1", "2", 3, {45, 117}},
    {"plus", "2", "2x2", 1, {60, 140, 165, 285, 357, 572, 957, 1085, 2397}},
    {"plus", "2", "2x2", 2, {96}},
    {"plus", "2", "2x2", 3, {252}},
    {"plus", "2", "2x2", 4, {192}},
    {"plus", "2", "2x2", 5, {525}},
    {"plus", "2", "2x2", 8, {320}},
    {"plus", "2", "4", 1, {221, 1517}},
    {"plus", "2", "4", 5, {725}},
    {"plus", "2x2", "2x2x2", 1, {780, 1020, 1365, 1932, 2805, 4485, 5180, 7917, 8645}},
    {"plus", "2x2", "2x2x2", 2, {480, 672, 1760, 2912}},
    {"plus", "2x2", "2x2x2", 6, {1440}},
    {"plus", "2x2", "2x2x2", 8, {2112}},
    {"plus", "2x2", "2x4", 1, {3965, 7565}},
    {"plus", "2x2x2", "2x2x2x2", 1, {4620, 12540, 26565}},
    {"plus", "2x2x2", "2x2x2x2", 2, {3360, 7392, 14880, 19040, 23712, 27552}},
    {"plus", "2x2x2", "2x2x2x2", 8, {6720}},
    {"plus", "2x2x2x2", "2x2x2x2x2", 2, {68640}},
    {"minus", "1", "1", 1, {5, 8, 13, 29, 53, 173, 293}},
    {"minus", "1", "1", 2, {20, 68}},
    {"minus", "1", "1", 5, {125}},
    {"minus", "2", "2", 1, {40, 85, 104, 365, 488, 533, 629, 965, 1448, 1685, 1853, 2813}},
    {"minus", "2", "2", 2, {260}},
    {"minus", "2", "2", 5, {200}},
    {"minus", "2", "2", 13, {845}},
    {"minus", "2x2", "2x2", 1, {680, 1160, 2120, 2405, 3485, 3848, 5480, 10205, 16133}},
    {"minus", "2x2x2", "2x2x2", 1, {8840, 21320, 32045}},
};

Outcome criterion1() {
  const fs::path out = workdir() / "c1.csv";
  const int code = run("scan --family both --n-min 0 --n-max 10000 --filter class-number-one --out " + out.string() +
                       " --jobs " + std::to_string(jobs()));
  if (code != 0) return {false, "ugo exited with " + std::to_string(code)};
  std::set<std::tuple<std::string, std::int64_t, std::int64_t>> got;
  std::set<std::int64_t> distinct;
  std::size_t rows = 0;
  for (const auto& r : read_csv(out)) {
    got.insert({r.family, r.delta, r.f});
    distinct.insert(r.delta);
    ++rows;
    if (r.h != 1) return {false, "row with h != 1: " + std::to_string(r.delta)};
  }
  const bool ok = got == kClassNumberOne && rows == kClassNumberOne.size() && distinct.size() == 19;
  return {ok, std::to_string(rows) + " rows, " + std::to_string(distinct.size()) + " distinct discriminants"};
}

Outcome criterion2_from(const fs::path& out) {
  std::set<std::tuple<std::string, std::int64_t, std::int64_t, std::string, std::string>> expected, got;
  for (const auto& b : kTwoTorsionWide) {
    for (std::int64_t d : b.deltas) expected.insert({b.family, d, b.f, b.cl, b.cl_plus});
  }
  std::size_t rows = 0;
  for (const auto& r : read_csv(out)) {
    got.insert({r.family, r.delta, r.f, r.cl, r.cl_plus});
    ++rows;
  }
  std::string diff;
  for (const auto& e : expected) {
    if (!got.count(e)) diff += " missing " + std::to_string(std::get<1>(e));
  }
  for (const auto& g : got) {
    if (!expected.count(g)) diff += " extra " + std::to_string(std::get<1>(g));
  }
  const bool ok = diff.empty() && rows == expected.size();
  return {ok, std::to_string(rows) + " rows vs " + std::to_string(expected.size()) +
                  " expected entries" + diff};
}

Outcome criterion2() {
  const fs::path out = workdir() / "c2.csv";
  const int code = run("scan --family both --n-min 0 --n-max 3163 --filter two-torsion-wide --out " + out.string() +
                       " --jobs " + std::to_string(jobs()));
  if (code != 0) return {false, "ugo exited with " + std::to_string(code)};
  return criterion2_from(out);
}

Outcome criterion3() {
  ScanConfig c;
  c.n_min = 0;
  c.n_max = 10000;
  c.jobs = jobs();
  std::vector<std::int64_t> plus, minus;
  for (const auto& r : classify_maximal(c)) (r.family == "plus" ? plus : minus).push_back(r.delta);
  const bool ok = plus == std::vector<std::int64_t>{-4, -3, 5, 12, 21, 77, 437} &&
                  minus == std::vector<std::int64_t>{5, 8, 13, 29, 53, 173, 293};
  return {ok, std::to_string(plus.size()) + " + " + std::to_string(minus.size()) + " maximal orders"};
}

Outcome criterion4() {
  const fs::path out = workdir() / "c4.csv";
  const int code = run("scan --family chowla --n-min 0 --n-max 1000 --filter class-number-one --out " + out.string());
  if (code != 0) return {false, "ugo exited with " + std::to_string(code)};
  std::vector<std::int64_t> got;
  for (const auto& r : read_csv(out)) got.push_back(r.delta);
  const bool ok = got == std::vector<std::int64_t>{5, 17, 37, 101, 197, 677};
  std::string s;
  for (auto d : got) s += " " + std::to_string(d);
  return {ok, "delta =" + s};
}

Outcome from_report(const VerifyReport& r) {
  std::string d = r.summary();
  for (const auto& c : r.counterexamples) d += "; " + c;
  return {r.passed(), d};
}

Outcome criterion5() {
  VerifyBounds b;
  b.max_delta = 1000000;
  b.jobs = jobs();
  return from_report(run_verify(VerifySuite::conductor, b));
}

Outcome criterion6() {
  VerifyBounds b;
  b.max_delta = 100000;
  b.jobs = jobs();
  const auto parity = run_verify(VerifySuite::parity, b);
  if (!parity.passed()) return from_report(parity);
  // genus order against |Cl+[2]| on the same range
  std::int64_t checked = 0, failures = 0;
  std::string first;
  const auto sieve = intarith::FactorSieve::shared(100000 / 4 + 1);
#pragma omp parallel for schedule(dynamic, 256) num_threads(jobs()) reduction(+ : checked, failures)
  for (std::int64_t d = 5; d <= 100000; ++d) {
    if (!is_discriminant(d)) continue;
    const FormClassGroup g(d, sieve.get());
    ++checked;
    if (genus_group_order(d) != g.narrow_two_torsion()) {
      ++failures;
#pragma omp critical
      if (first.empty()) first = std::to_string(d);
    }
  }
  return {failures == 0, parity.summary() + "; genus order = |Cl+[2]| for " + std::to_string(checked) +
                             " discriminants, " + std::to_string(failures) + " failures" +
                             (first.empty() ? "" : " (e.g. " + first + ")")};
}

Outcome criterion7() {
  std::vector<UnitGeneratedParam> params;
  for (std::int64_t n = 4; n <= 2000; ++n) params.push_back({Family::plus, n});
  for (std::int64_t n = 1; n <= 2000; ++n) params.push_back({Family::minus, n});
  const auto sieve = intarith::FactorSieve::shared(2000 * 2000 / 4 + 2);
  std::int64_t failures = 0;
  std::string first;
#pragma omp parallel for schedule(dynamic, 16) num_threads(jobs()) reduction(+ : failures)
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& p = params[i];
    const FormClassGroup g(unit_generated_discriminant(p), sieve.get());
    const std::int64_t want = p.family == Family::plus ? 2 * g.class_number() : g.class_number();
    if (g.narrow_class_number() != want) {
      ++failures;
#pragma omp critical
      if (first.empty()) first = std::string(to_string(p.family)) + " " + std::to_string(p.n);
    }
  }
  return {failures == 0, std::to_string(params.size()) + " parameters, " + std::to_string(failures) + " failures" +
                             (first.empty() ? "" : " (e.g. " + first + ")")};
}

Outcome criterion8() {
  std::int64_t checked = 0, failures = 0;
  for (std::int64_t n = 3; n <= 500; ++n, ++checked) failures += !verify_parametric_cf({Family::plus, n});
  for (std::int64_t n = 1; n <= 500; ++n, ++checked) failures += !verify_parametric_cf({Family::minus, n});
  return {failures == 0, std::to_string(checked) + " parameters, " + std::to_string(failures) + " failures"};
}

Outcome criterion9() {
  std::vector<UnitGeneratedParam> params;
  for (Family fam : {Family::plus, Family::minus}) {
    for (std::int64_t n = 5000; n <= 5100; ++n) params.push_back({fam, n});
  }
  const auto t = hua_trend(params, jobs());
  char buf[128];
  std::snprintf(buf, sizeof buf, "mean log h / log n = %.4f over %zu samples (min %.4f, max %.4f)", t.mean,
                t.samples.size(), t.min, t.max);
  return {t.mean >= 0.55 && t.mean <= 0.95, buf};
}

Outcome criterion10() {
  const std::string base = "scan --family both --n-min 0 --n-max 3163 --filter two-torsion-wide";
  const fs::path a = workdir() / "c10_jobs1.csv", b = workdir() / "c10_jobs8.csv", c = workdir() / "c10_resumed.csv";
  const fs::path ckpt = workdir() / "c10.ckpt";
  if (run(base + " --jobs 1 --out " + a.string()) != 0) return {false, "jobs 1 scan failed"};
  if (run(base + " --jobs 8 --out " + b.string()) != 0) return {false, "jobs 8 scan failed"};
  fs::remove(ckpt);
  const int halted = run(base + " --jobs 8 --checkpoint " + ckpt.string() + " --halt-after 4 --out " + c.string());
  if (halted != 130) return {false, "interrupted scan exited with " + std::to_string(halted)};
  const std::size_t partial = fs::file_size(c);
  if (run(base + " --jobs 1 --checkpoint " + ckpt.string() + " --out " + c.string()) != 0) {
    return {false, "resumed scan failed"};
  }
  const std::string sa = slurp(a), sb = slurp(b), sc = slurp(c);
  const bool ok = sa == sb && sa == sc && partial < sc.size();
  const auto table = criterion2_from(c);
  return {ok && table.pass, std::to_string(sa.size()) + " bytes; jobs 1 vs 8 " + (sa == sb ? "identical" : "DIFFER") +
                                "; interrupted at " + std::to_string(partial) + " bytes and resumed: " +
                                (sa == sc ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10},
  };
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d: %s  (%.1fs) %s\n", id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  fs::remove_all(workdir());
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

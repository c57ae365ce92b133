#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include <json.hpp>
#include "ugo/errors.hpp"
#include "ugo/genus.hpp"
#include "ugo/search.hpp"

using namespace ugo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string render(const std::vector<TableRow>& rows) {
  std::string s;
  for (const auto& r : rows) s += to_csv(r) + "\n";
  return s;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ugo_test_search_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("scan items are family-major and skip invalid parameters") {
  ScanConfig c;
  c.families = {ScanFamily::chowla, ScanFamily::minus, ScanFamily::plus};
  c.n_min = 0;
  c.n_max = 12;
  const auto items = scan_items(c);
  std::vector<ScanItem> plus, minus, chowla;
  for (const auto& it : items) {
    (it.family == ScanFamily::plus ? plus : it.family == ScanFamily::minus ? minus : chowla).push_back(it);
  }
  REQUIRE(plus.size() == 12);  // n = 2 is not a discriminant
  REQUIRE(minus.size() == 12);  // n = 0 is not a discriminant
  REQUIRE(items.front() == ScanItem{ScanFamily::plus, 0});
  REQUIRE(items.back().family == ScanFamily::chowla);
  for (const auto& it : chowla) REQUIRE(intarith::is_squarefree(item_discriminant(it)));
  CHECK(chowla.size() == 11);  // n = 0 gives 1 and n = 9 gives 325 = 5^2 * 13
  CHECK(item_discriminant({ScanFamily::plus, 0}) == -4);
  CHECK(item_discriminant({ScanFamily::chowla, 7}) == 197);
}

TEST_CASE("configuration validation") {
  ScanConfig c;
  c.n_min = 5;
  c.n_max = 3;
  CHECK_THROWS_AS(c.validate(), Error);
  c.n_max = 10;
  c.jobs = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.jobs = 1;
  c.families.clear();
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK(parse_family_list("both").size() == 2);
  CHECK_THROWS_AS(parse_scan_filter("bogus"), Error);
  CHECK(parse_scan_filter("two-torsion-wide") == ScanFilter::two_torsion_wide);
  ScanConfig a, b;
  a.n_max = b.n_max = 10;
  a.jobs = 1;
  b.jobs = 8;
  CHECK(a.fingerprint() == b.fingerprint());
  b.filter = ScanFilter::maximal_only;
  CHECK(a.fingerprint() != b.fingerprint());
}

TEST_CASE("CSV row format") {
  CHECK(csv_header() ==
        "family,n,delta,f,delta0,h,h_plus,cl,cl_plus,unit_norm,regulator,mu,genus_order,maximal,rd_row,"
        "one_class_per_genus,two_torsion_wide");
  const auto row = compute_row(221, "plus", 15);
  const std::string line = to_csv(row);
  CHECK(line.rfind("plus,15,221,1,221,2,4,2,4,1,2.70357583", 0) == 0);
  const auto j = nlohmann::json::parse(to_jsonl(row));
  CHECK(j["delta"] == 221);
  CHECK(j["cl_plus"] == "4");
  CHECK(j["two_torsion_wide"] == true);
  const auto im = compute_row(-4, "plus", 0);
  CHECK(im.h == 1);
  CHECK(im.regulator == 0);
}

TEST_CASE("pruning never drops a row the filter accepts") {
  const auto sv = intarith::FactorSieve::shared(2000000);
  for (ScanFamily fam : {ScanFamily::plus, ScanFamily::minus, ScanFamily::chowla}) {
    for (std::int64_t n = 0; n <= 700; ++n) {
      const ScanItem it{fam, n};
      std::int64_t d;
      try {
        d = item_discriminant(it);
      } catch (const Error&) {
        continue;
      }
      if (!is_discriminant(d) || (fam == ScanFamily::chowla && !intarith::is_squarefree(d))) continue;
      const auto full = compute_row(d, std::string(to_string(fam)), n, sv.get());
      for (ScanFilter f : {ScanFilter::class_number_one, ScanFilter::two_torsion_wide, ScanFilter::two_torsion_narrow,
                           ScanFilter::maximal_only, ScanFilter::all}) {
        const auto r = evaluate_item(it, f, sv.get());
        REQUIRE_MESSAGE(r.row.has_value() == passes_filter(full, f), to_string(fam) << " " << n);
        if (r.row) REQUIRE(to_csv(*r.row) == to_csv(full));
      }
    }
  }
}

TEST_CASE("audit sample is about one percent") {
  int audited = 0;
  for (std::int64_t n = 0; n < 100000; ++n) audited += is_audited({ScanFamily::plus, n});
  CHECK(audited > 800);
  CHECK(audited < 1200);
}

TEST_CASE("serial and parallel scans agree") {
  for (ScanFilter f : {ScanFilter::all, ScanFilter::class_number_one, ScanFilter::two_torsion_wide}) {
    ScanConfig c;
    c.families = {ScanFamily::plus, ScanFamily::minus, ScanFamily::chowla};
    c.n_min = 0;
    c.n_max = f == ScanFilter::all ? 400 : 1500;
    c.filter = f;
    const std::string serial = render(scan_serial(c));
    for (int jobs : {1, 2, 5}) {
      c.jobs = jobs;
      REQUIRE(render(scan_parallel(c)) == serial);
    }
  }
}

TEST_CASE("scan_to_file resumes to identical output") {
  ScanConfig c;
  c.families = {ScanFamily::plus, ScanFamily::minus};
  c.n_min = 0;
  c.n_max = 1600;
  c.filter = ScanFilter::all;
  c.out_path = scratch("ref.csv").string();
  std::ostringstream log;
  ScanControl small;
  small.chunk_size = 64;
  const auto ref_stats = scan_to_file(c, log, small);
  CHECK_FALSE(ref_stats.interrupted);
  const std::string ref = slurp(c.out_path);
  CHECK(ref.rfind(csv_header() + "\n", 0) == 0);

  for (OutputFormat fmt : {OutputFormat::csv, OutputFormat::jsonl}) {
    ScanConfig r = c;
    r.format = fmt;
    r.jobs = 3;
    r.out_path = scratch(fmt == OutputFormat::csv ? "resume.csv" : "resume.jsonl").string();
    r.checkpoint_path = scratch(fmt == OutputFormat::csv ? "resume.ckpt" : "resume_j.ckpt").string();
    fs::remove(r.out_path);
    fs::remove(*r.checkpoint_path);
    ScanControl halt = small;
    halt.halt_after_chunks = 7;
    const auto first = scan_to_file(r, log, halt);
    REQUIRE(first.interrupted);
    // Simulate a partial write after the last checkpoint.
    { std::ofstream(r.out_path, std::ios::app) << "garbage,partial"; }
    const auto second = scan_to_file(r, log, small);
    REQUIRE(second.resumed);
    REQUIRE_FALSE(second.interrupted);
    if (fmt == OutputFormat::csv) {
      REQUIRE(slurp(r.out_path) == ref);
    } else {
      ScanConfig plain = r;
      plain.checkpoint_path.reset();
      plain.out_path = scratch("plain.jsonl").string();
      scan_to_file(plain, log, small);
      REQUIRE(slurp(r.out_path) == slurp(plain.out_path));
    }
  }

  // A checkpoint from another configuration is refused.
  ScanConfig other = c;
  other.checkpoint_path = scratch("resume.ckpt").string();
  other.n_max = 1500;
  other.out_path = scratch("other.csv").string();
  CHECK_THROWS_AS(scan_to_file(other, log, small), Error);
}

TEST_CASE("classify_maximal") {
  ScanConfig c;
  c.n_min = 0;
  c.n_max = 2000;
  const auto rows = classify_maximal(c);
  std::vector<std::int64_t> plus, minus;
  for (const auto& r : rows) (r.family == "plus" ? plus : minus).push_back(r.delta);
  CHECK(plus == std::vector<std::int64_t>{-4, -3, 5, 12, 21, 77, 437});
  CHECK(minus == std::vector<std::int64_t>{5, 8, 13, 29, 53, 173, 293});
}

TEST_CASE("inspect report") {
  const auto rep = inspect(221);
  CHECK(rep.row.h == 2);
  CHECK(rep.row.h_plus == 4);
  CHECK(rep.cycles.size() == 4);
  CHECK(rep.principal != rep.negative_principal);
  CHECK(rep.unit_generated == std::vector<std::string>{"plus:15"});
  const auto j = nlohmann::json::parse(rep.to_json());
  CHECK(j["h_plus"] == 4);
  CHECK(rep.to_text().find("Cl+ = Z/4Z") != std::string::npos);
  CHECK_THROWS_AS(inspect(0), ValidationError);
  CHECK(inspect(-23).row.h == 3);
}

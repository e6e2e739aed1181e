// weilsurf: classification queries, square-order tables, curve census and
// self-verification from the command line.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error,
// 3 census internal assertion.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "weilsurf/census.hpp"
#include "weilsurf/format.hpp"
#include "weilsurf/verify.hpp"

namespace {

using namespace weilsurf;

constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCensus = 3;

std::string pair_text(const CoeffPair& ab) {
  return "(" + std::to_string(ab.first) + "," + std::to_string(ab.second) + ")";
}

int cmd_classify(Int q, Int a, Int b, const std::string& format) {
  const auto rec = classify_record(q, a, b);
  std::cout << render({rec}, parse_output_format(format)) << std::flush;
  return 0;
}

int cmd_enumerate(Int q, unsigned k, const std::string& format) {
  if (k == 0) throw std::invalid_argument("--k must be >= 1");
  const auto recs = enumerate_order_divisible(q, k);
  std::cout << render(recs, parse_output_format(format)) << std::flush;
  return 0;
}

int cmd_census(Int q, unsigned jobs, bool force, bool extended, const std::string& cache_flag) {
  CensusOptions opts;
  opts.jobs = jobs;
  opts.force = force;
  opts.allow_extended = extended;
  std::string dir = cache_flag;
  if (const char* env = std::getenv("WEIL_CACHE_DIR"); env != nullptr && *env != '\0') dir = env;
  opts.cache_dir = dir;

  const PrimePower pq = check_census_q(q, extended);
  const auto t0 = std::chrono::steady_clock::now();
  const CensusResult census = census_weil_set(q, opts);
  const CurveFields fields(pq);
  const CensusReport rep = check_census(fields, census);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::cout << "census q=" << q << ": models=" << census.models << " distinct=" << census.counts.size() << "\n";
  std::string realized, absent;
  for (const auto& ab : square_order_classes(pq)) {
    (census.realizes(ab.first, ab.second) ? realized : absent) += " " + pair_text(ab);
  }
  std::cout << "square-order classes realized:" << (realized.empty() ? " none" : realized) << "\n";
  std::cout << "square-order classes absent:" << (absent.empty() ? " none" : absent) << "\n";
  std::cout << "classification match: " << (rep.sets_equal() ? "yes" : "no") << "\n";
  std::cout << "zeta check: " << rep.zeta.size() - rep.zeta_failures.size() << "/" << rep.zeta.size() << " curves\n";
  std::cerr << (census.from_cache ? "read " : "wrote ") << cache_path(dir, q).string() << "\n";
  std::cerr << "wall time: " << secs << " s\n";

  if (!rep.zeta_failures.empty() || rep.zeta.empty()) {
    std::cerr << "census internal check failed: zeta mismatch\n";
    return kExitCensus;
  }
  return 0;
}

int cmd_verify(Int qmax, bool deep, unsigned jobs) {
  VerifyOptions opts;
  opts.qmax = qmax;
  opts.deep = deep;
  opts.jobs = jobs;
  const auto results = run_verification(opts, [](const CheckResult& r) { std::cout << r.line() << std::endl; });
  for (const auto& r : results) {
    if (!r.ok) {
      std::cerr << "verification failed: " << r.name << "\n";
      return kExitVerify;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weil polynomials of abelian surfaces over finite fields"};
  app.require_subcommand(1);

  Int q = 0, a = 0, b = 0;
  unsigned k = 2;
  std::string format = "table";
  unsigned jobs = 1;
  bool force = false;
  bool extended = false;
  bool deep = false;
  Int qmax = 200;
  std::string cache_dir = "weilsurf-cache";
  const std::vector<std::string> formats{"table", "json", "csv"};

  auto* classify = app.add_subcommand("classify", "Classify one (q, a, b)");
  classify->add_option("--q", q, "Field size")->required();
  classify->add_option("--a", a, "Coefficient a")->required();
  classify->add_option("--b", b, "Coefficient b")->required();
  classify->add_option("--format", format, "table | json | csv")->check(CLI::IsMember(formats));

  auto* enumerate = app.add_subcommand("enumerate", "List classes with q^k dividing the group order");
  enumerate->add_option("--q", q, "Field size")->required();
  enumerate->add_option("--k", k, "Exponent of q")->capture_default_str();
  enumerate->add_option("--format", format, "table | json | csv")->check(CLI::IsMember(formats));

  auto* census = app.add_subcommand("census", "Exhaustive genus-2 curve census");
  census->add_option("--q", q, "Field size (2, 3, 5, 7, 9; 4 and 13 with --extended)")->required();
  census->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  census->add_flag("--force", force, "Recompute even when a valid cache exists");
  census->add_flag("--extended", extended, "Allow the larger fields q = 4 and q = 13");
  census->add_option("--cache", cache_dir, "Cache directory (WEIL_CACHE_DIR overrides)")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_flag("--deep", deep, "Also verify the curve census for q in {2,3,5,7,9}");
  verify->add_option("--qmax", qmax, "Largest q for the closed-form check")->capture_default_str();
  verify->add_option("--jobs", jobs, "Worker threads for --deep")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*classify) return cmd_classify(q, a, b, format);
    if (*enumerate) return cmd_enumerate(q, k, format);
    if (*census) return cmd_census(q, jobs, force, extended, cache_dir);
    if (*verify) return cmd_verify(qmax, deep, jobs);
  } catch (const NotAPrimePower& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedQ& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const ParityViolation& e) {
    std::cerr << e.what() << "\n";
    return kExitCensus;
  } catch (const InadmissibleCount& e) {
    std::cerr << e.what() << "\n";
    return kExitCensus;
  } catch (const VerificationFailure& e) {
    std::cerr << e.what() << "\n";
    return kExitVerify;
  }
  return kExitUsage;
}

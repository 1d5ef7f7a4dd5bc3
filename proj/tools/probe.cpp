// probe: scatter data, boundary curves, single-state measurements and the
// invariant suites from the command line.
//
// Exit codes: 0 success, 1 invariant failure, 2 invalid config, 3 I/O error.

#include <omp.h>

#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"
#include "probe/errors.hpp"
#include "probe/scatter.hpp"
#include "probe/verify.hpp"

namespace {

using namespace probe;
using nlohmann::json;

constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::pair<std::size_t, std::size_t> parse_dims(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string a = text.substr(0, x);
    const std::string b = text.substr(x + 1);
    const unsigned long na = std::stoul(a, &used_a);
    const unsigned long nb = std::stoul(b, &used_b);
    if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument(text);
    return {na, nb};
  } catch (const std::logic_error&) {
    throw InvalidConfig("dims must look like 2x2, got '" + text + "'");
  }
}

FamilyTag family_from(const std::string& name) {
  try {
    return parse_family(name);
  } catch (const Error& e) {
    throw InvalidConfig(e.what());
  }
}

// Writes through `emit` to the file at `path`, or to stdout when path is empty.
template <class Emit>
void write_output(const std::string& path, Emit&& emit) {
  if (path.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  emit(out);
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

json range_json(const ColumnRange& r) { return {{"min", r.min}, {"max", r.max}}; }

json row_json(const ScatterRow& r) {
  json j = {{"state_id", r.stateId},  {"family", r.familyTag},   {"lqu", r.lqu},
            {"avsk", r.avsk},         {"purity_a", r.purityA},   {"purity_b", r.purityB},
            {"witness", r.witnessEntangled}};
  j["variance"] = r.variance ? json(*r.variance) : json(nullptr);
  return j;
}

struct Options {
  std::string dims = "2x2";
  std::size_t count = 1000;
  std::uint64_t seed = 42;
  std::string spectrum = "sigma-z";
  bool withVariance = false;
  std::string out;
  std::string format = "csv";
  std::string mode = "ginibre";
  std::size_t rank = 0;
  std::size_t terms = 0;
  std::string family;
  std::optional<double> param;
  std::size_t steps = 200;
  std::size_t restarts = kDefaultRestarts;
  bool serial = false;
  std::string measure = "all";
  std::string suite = "all";
  bool injectFault = false;
  std::string in;
};

RunConfig config_from(const Options& o) {
  RunConfig cfg;
  std::tie(cfg.dimA, cfg.dimB) = parse_dims(o.dims);
  cfg.count = o.count;
  cfg.seed = RandomSeed{o.seed, 0};
  cfg.spectrum = o.spectrum;
  cfg.withVariance = o.withVariance;
  cfg.output = o.out;
  cfg.format = o.format;
  static const std::map<std::string, SampleMode> modes = {
      {"ginibre", SampleMode::ginibre}, {"separable", SampleMode::separable}, {"pure", SampleMode::pure}};
  const auto m = modes.find(o.mode);
  if (m == modes.end()) throw InvalidConfig("mode must be ginibre, separable or pure");
  cfg.mode = m->second;
  cfg.rank = o.rank;
  cfg.terms = o.terms;
  if (!o.family.empty()) cfg.family = family_from(o.family);
  cfg.param = o.param;
  cfg.steps = o.steps;
  cfg.restarts = o.restarts;
  cfg.execution = o.serial ? Execution::serial : Execution::parallel;
  cfg.validate();
  return cfg;
}

int run_scatter(const Options& o) {
  const RunConfig cfg = config_from(o);
  const auto rows = generate_scatter(cfg);
  const CsvMeta meta{"scatter", cfg.dimA, cfg.dimB, cfg.spectrum};
  write_output(cfg.output, [&](std::ostream& out) {
    if (cfg.format == "csv") {
      write_scatter_csv(out, rows, meta);
    } else {
      json doc = json::array();
      for (const auto& r : rows) doc.push_back(row_json(r));
      out << doc.dump(1) << '\n';
    }
  });
  const ScatterSummary s = summarize(rows, cfg);
  json summary = {{"rows", s.rows},
                  {"lqu", range_json(s.lqu)},
                  {"avsk", range_json(s.avsk)},
                  {"purity_a", range_json(s.purityA)},
                  {"purity_b", range_json(s.purityB)},
                  {"entangled", s.entangled},
                  {"ordering_violations", s.orderingViolations},
                  {"upper_violations", s.upperViolations},
                  {"separable_violations", s.separableViolations}};
  if (cfg.withVariance) summary["variance"] = range_json(s.variance);
  std::cerr << summary.dump() << '\n';
  return s.total_violations() == 0 ? 0 : kExitInvariant;
}

int run_boundary_cmd(const Options& o) {
  if (o.family.empty()) throw InvalidConfig("--family is required");
  const auto rows = run_boundary(family_from(o.family), o.steps,
                                 o.serial ? Execution::serial : Execution::parallel);
  write_output(o.out, [&](std::ostream& out) { write_boundary_csv(out, rows); });
  return 0;
}

int run_state(const Options& o) {
  if (o.family.empty()) throw InvalidConfig("--family is required");
  if (o.measure != "all" && o.measure != "basic") throw InvalidConfig("--measure must be all or basic");
  if (o.format != "csv" && o.format != "json") throw InvalidConfig("format must be csv or json");
  const FamilyTag tag = family_from(o.family);
  StateFamily f{tag, {}, RandomSeed{o.seed, 0}};
  if (o.param) f.params.push_back(*o.param);
  std::optional<DensityMatrix> rho;
  try {
    rho.emplace(make_state(f));
  } catch (const InvalidParameter& e) {
    throw InvalidConfig(e.what());
  }
  const Spectrum spec = parse_spectrum(o.spectrum, rho->dimA());
  MeasureOptions opts{o.measure == "all", o.restarts, RandomSeed{o.seed, 1}};
  const MeasureReport r = measure_state(*rho, spec, opts, std::string(to_string(tag)));
  if (auto problem = check_report(r, spec, rho->dimA())) throw InvariantViolation(*problem);

  write_output(o.out, [&](std::ostream& out) {
    if (o.format == "json") {
      json j = {{"family", *r.familyTag},
                {"dims", std::to_string(rho->dimA()) + "x" + std::to_string(rho->dimB())},
                {"spectrum", o.spectrum},
                {"avsk", r.avsk},
                {"lqu", r.lqu},
                {"purity_a", r.purityA},
                {"purity_b", r.purityB},
                {"witness", r.witnessEntangled}};
      if (o.param) j["param"] = *o.param;
      j["variance"] = r.variance ? json(*r.variance) : json(nullptr);
      j["concurrence"] = r.concurrence ? json(*r.concurrence) : json(nullptr);
      out << j.dump(2) << '\n';
    } else {
      out << "family,avsk,lqu,variance,purity_a,purity_b,concurrence,witness\n"
          << *r.familyTag << ',' << format_number(r.avsk) << ',' << format_number(r.lqu) << ','
          << (r.variance ? format_number(*r.variance) : "") << ',' << format_number(r.purityA) << ','
          << format_number(r.purityB) << ',' << (r.concurrence ? format_number(*r.concurrence) : "")
          << ',' << (r.witnessEntangled ? 1 : 0) << '\n';
    }
  });
  return 0;
}

int run_verify_cmd(const Options& o) {
  VerifyOptions v;
  v.suite = o.suite;
  v.seed = o.seed;
  v.negatePrefactor = o.injectFault;
  const auto results = run_verify(v);
  write_output(o.out, [&](std::ostream& out) { write_verify_json(out, results); });
  for (const auto& r : results) {
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.suite << '/' << r.name << " n=" << r.count
              << " worst=" << r.worstResidual << '\n';
  }
  return all_passed(results) ? 0 : kExitInvariant;
}

int run_bounds_cmd(const Options& o) {
  if (o.in.empty()) throw InvalidConfig("--in is required");
  std::ifstream in(o.in, std::ios::binary);
  if (!in) throw IoError(o.in, "cannot open for reading");
  CsvMeta meta;
  std::vector<ScatterRow> rows;
  try {
    rows = read_scatter_csv(in, &meta);
  } catch (const ParseError& e) {
    throw IoError(o.in, e.what());
  }
  if (meta.dimA != 2 || meta.dimB != 2 || meta.spectrum != "sigma-z")
    throw InvalidConfig("bounds apply to 2x2 scatter files with the sigma-z spectrum");
  const auto bounds = apply_bounds(rows);
  write_output(o.out, [&](std::ostream& out) { write_bounds_csv(out, bounds); });
  std::size_t outside = 0;
  for (const auto& b : bounds) outside += b.within ? 0 : 1;
  std::cerr << json{{"rows", bounds.size()}, {"outside", outside}}.dump() << '\n';
  return outside == 0 ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Average skew information and local quantum uncertainty toolkit"};
  app.require_subcommand(1);
  Options o;
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);

  auto* scatter = app.add_subcommand("scatter", "Measure a batch of random states");
  scatter->add_option("--dims", o.dims, "N_AxN_B")->capture_default_str();
  scatter->add_option("--n,--count", o.count, "number of states")->capture_default_str();
  scatter->add_option("--seed", o.seed)->capture_default_str();
  scatter->add_option("--spectrum", o.spectrum, "sigma-z | optimal | harmonic | comma list")->capture_default_str();
  scatter->add_flag("--with-variance", o.withVariance, "add the variance column");
  scatter->add_option("--out", o.out, "output file (default stdout)");
  scatter->add_option("--format", o.format, "csv | json")->capture_default_str();
  scatter->add_option("--mode", o.mode, "ginibre | separable | pure")->capture_default_str();
  scatter->add_option("--rank", o.rank, "Ginibre rank (0: full)");
  scatter->add_option("--terms", o.terms, "separable mixture terms (0: random)");
  scatter->add_option("--family", o.family, "restrict to a named family");
  scatter->add_option("--param", o.param, "fixed family parameter (default: uniform)");
  scatter->add_option("--restarts", o.restarts, "LQU minimizer restarts")->capture_default_str();
  scatter->add_flag("--serial", o.serial, "run the serial reference path");

  auto* boundary = app.add_subcommand("boundary", "Sweep a state family");
  boundary->add_option("--family", o.family)->required();
  boundary->add_option("--steps", o.steps)->capture_default_str();
  boundary->add_option("--out", o.out);
  boundary->add_flag("--serial", o.serial);

  auto* state = app.add_subcommand("state", "Measure one named state");
  state->add_option("--family", o.family)->required();
  state->add_option("--param", o.param);
  state->add_option("--spectrum", o.spectrum)->capture_default_str();
  state->add_option("--measure", o.measure, "all | basic (basic skips the variance)")->capture_default_str();
  state->add_option("--format", o.format, "csv | json")->capture_default_str();
  state->add_option("--seed", o.seed)->capture_default_str();
  state->add_option("--restarts", o.restarts)->capture_default_str();
  state->add_option("--out", o.out);

  auto* verify = app.add_subcommand("verify", "Run the invariant suites");
  verify->add_option("--suite", o.suite, "all | linalg | states | measures | moments")->capture_default_str();
  verify->add_option("--seed", o.seed)->capture_default_str();
  verify->add_flag("--inject-fault", o.injectFault, "negate the averaging prefactor (harness self-test)");
  verify->add_option("--out", o.out, "JSON report file (default stdout)");

  auto* bounds = app.add_subcommand("bounds", "Apply the variance-based LQU bounds to a scatter file");
  bounds->add_option("--in", o.in)->required();
  bounds->add_option("--out", o.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (scatter->parsed()) return run_scatter(o);
    if (boundary->parsed()) return run_boundary_cmd(o);
    if (state->parsed()) return run_state(o);
    if (verify->parsed()) return run_verify_cmd(o);
    if (bounds->parsed()) return run_bounds_cmd(o);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InvalidConfig& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

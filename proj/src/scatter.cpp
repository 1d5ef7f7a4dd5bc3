#include "probe/scatter.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace probe {

namespace {

constexpr const char* kScatterColumns = "state_id,family,lqu,avsk,variance,purity_a,purity_b,witness";
constexpr const char* kBoundaryColumns = "family,param,lqu,avsk,variance";
constexpr const char* kBoundsColumns = "state_id,lqu,avsk,variance,lower,upper,within";

bool takes_single_param(FamilyTag t) {
  switch (t) {
    case FamilyTag::bell:
    case FamilyTag::max_discordant:
    case FamilyTag::random_ginibre:
    case FamilyTag::random_pure:
      return false;
    default:
      return true;
  }
}

double parse_double(const std::string& field, std::size_t line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError(line, "not a number: '" + field + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

void update(ColumnRange& r, double v, bool first) {
  if (first) {
    r.min = r.max = v;
    return;
  }
  r.min = std::min(r.min, v);
  r.max = std::max(r.max, v);
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Spectrum parse_spectrum(const std::string& text, std::size_t dimA) {
  if (text == "sigma-z") {
    if (dimA != 2) throw InvalidConfig("sigma-z spectrum needs N_A = 2");
    return Spectrum::sigma_z();
  }
  if (text == "optimal") return optimal_spectrum(dimA);
  if (text == "harmonic") return harmonic_spectrum(dimA);
  std::vector<double> values;
  for (const auto& tok : split(text, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InvalidConfig("cannot parse spectrum '" + text + "'");
    }
  }
  if (values.size() != dimA) {
    std::ostringstream msg;
    msg << "spectrum has " << values.size() << " values, N_A = " << dimA;
    throw InvalidConfig(msg.str());
  }
  return Spectrum(std::move(values));
}

void RunConfig::validate() const {
  if (dimA < 2 || dimB < 1) throw InvalidConfig("dims must be at least 2x1");
  if (dimA * dimB > 64) throw InvalidConfig("total dimension above 64 is not supported");
  if (count < 1) throw InvalidConfig("count must be at least 1");
  if (rank > dimA * dimB) throw InvalidConfig("rank exceeds N_A * N_B");
  if (format != "csv" && format != "json") throw InvalidConfig("format must be csv or json");
  if (restarts < 1) throw InvalidConfig("restarts must be at least 1");
  const Spectrum spec = parse_spectrum(spectrum, dimA);
  if (spec.degenerate()) throw InvalidConfig("LQU needs a non-degenerate spectrum");
  if (family) {
    const bool random = *family == FamilyTag::random_ginibre || *family == FamilyTag::random_pure;
    if (!random && (dimA != 2 || dimB != 2))
      throw InvalidConfig("named families are two-qubit states; use --dims 2x2");
    if (param && !takes_single_param(*family))
      throw InvalidConfig(std::string(to_string(*family)) + " takes no parameter");
    if (param && !(*param >= 0.0 && *param <= 1.0))
      throw InvalidConfig("family parameter must lie in [0, 1]");
  }
}

MeasureReport measure_state(const DensityMatrix& rho, const Spectrum& spec,
                            const MeasureOptions& options, std::optional<std::string> family_tag) {
  MeasureReport r;
  r.avsk = avsk(rho, spec);
  r.lqu = lqu(rho, spec, options.restarts, options.seed);
  if (options.with_variance) r.variance = variance(rho, spec);
  r.purityA = rho.marginal(Subsystem::A).squaredNorm();
  r.purityB = rho.marginal(Subsystem::B).squaredNorm();
  if (rho.purity() > 1.0 - 1e-10) {
    const auto& vecs = rho.eigenvectors();
    const ComplexVector psi = vecs.col(vecs.cols() - 1).normalized();
    r.concurrence = concurrence_pure(psi, rho.dimA(), rho.dimB());
  }
  r.witnessEntangled = entanglement_witness(rho, spec);
  r.familyTag = std::move(family_tag);
  return r;
}

std::vector<ScatterRow> generate_scatter(const RunConfig& cfg) {
  cfg.validate();
  const Spectrum spec = parse_spectrum(cfg.spectrum, cfg.dimA);
  const std::size_t full = cfg.dimA * cfg.dimB;
  std::vector<ScatterRow> rows(cfg.count);

  for_each_indexed(
      cfg.count, cfg.seed,
      [&](std::size_t i, Rng& rng) {
        std::string tag;
        std::optional<DensityMatrix> rho;
        if (cfg.family) {
          StateFamily f{*cfg.family, {}, RandomSeed{cfg.seed.seed, rng()}};
          if (*cfg.family == FamilyTag::random_ginibre || *cfg.family == FamilyTag::random_pure) {
            f.params = {static_cast<double>(cfg.dimA), static_cast<double>(cfg.dimB)};
          } else if (takes_single_param(*cfg.family)) {
            f.params = {cfg.param ? *cfg.param : std::uniform_real_distribution<double>(0.0, 1.0)(rng)};
          }
          rho.emplace(make_state(f));
          tag = std::string(to_string(*cfg.family));
        } else {
          switch (cfg.mode) {
            case SampleMode::ginibre:
              rho.emplace(random_density(cfg.dimA, cfg.dimB, cfg.rank ? cfg.rank : full, rng));
              tag = "random_ginibre";
              break;
            case SampleMode::separable: {
              std::size_t terms = cfg.terms;
              if (terms == 0) terms = std::uniform_int_distribution<std::size_t>(1, 2 * full)(rng);
              rho.emplace(random_separable(cfg.dimA, cfg.dimB, terms, rng));
              tag = "random_separable";
              break;
            }
            case SampleMode::pure:
              rho.emplace(DensityMatrix::pure(random_pure(full, rng), cfg.dimA, cfg.dimB));
              tag = "random_pure";
              break;
          }
        }
        MeasureOptions opts{cfg.withVariance, cfg.restarts, RandomSeed{cfg.seed.seed, rng()}};
        const MeasureReport rep = measure_state(*rho, spec, opts);
        ScatterRow& row = rows[i];
        row.stateId = i;
        row.familyTag = tag;
        row.lqu = rep.lqu;
        row.avsk = rep.avsk;
        row.variance = rep.variance;
        row.purityA = rep.purityA;
        row.purityB = rep.purityB;
        row.witnessEntangled = rep.witnessEntangled;
      },
      cfg.execution);
  return rows;
}

ScatterSummary summarize(const std::vector<ScatterRow>& rows, const RunConfig& cfg) {
  const Spectrum spec = parse_spectrum(cfg.spectrum, cfg.dimA);
  const bool two_qubit = cfg.dimA == 2 && cfg.dimB == 2;
  const double half_gap = two_qubit ? 0.5 * (spec.values()[0] - spec.values()[1]) : 0.0;
  ScatterSummary s;
  s.rows = rows.size();
  bool first = true;
  bool first_var = true;
  for (const auto& r : rows) {
    update(s.lqu, r.lqu, first);
    update(s.avsk, r.avsk, first);
    update(s.purityA, r.purityA, first);
    update(s.purityB, r.purityB, first);
    first = false;
    if (r.variance) {
      update(s.variance, *r.variance, first_var);
      first_var = false;
    }
    if (r.witnessEntangled) ++s.entangled;
    if (r.avsk < r.lqu - 1e-9) ++s.orderingViolations;
    // Two-qubit maximum of the average: prefactor * (2 - 1/2).
    if (two_qubit && r.avsk > spec.prefactor() * 1.5 + 1e-9) ++s.upperViolations;
    if (!cfg.family && cfg.mode == SampleMode::separable) {
      const bool avsk_cap = r.avsk > spec.prefactor() * (static_cast<double>(cfg.dimA) - 1.0) + 1e-9;
      const bool lqu_cap = two_qubit && r.lqu > half_gap * half_gap * 0.5 + 1e-6;
      if (avsk_cap || lqu_cap) ++s.separableViolations;
    }
  }
  return s;
}

void write_scatter_csv(std::ostream& out, const std::vector<ScatterRow>& rows, const CsvMeta& meta) {
  out << kCsvMagic << '\n';
  out << "# kind=" << meta.kind << " dims=" << meta.dimA << 'x' << meta.dimB
      << " spectrum=" << meta.spectrum << '\n';
  out << kScatterColumns << '\n';
  for (const auto& r : rows) {
    out << r.stateId << ',' << r.familyTag << ',' << format_number(r.lqu) << ','
        << format_number(r.avsk) << ',' << (r.variance ? format_number(*r.variance) : "") << ','
        << format_number(r.purityA) << ',' << format_number(r.purityB) << ','
        << (r.witnessEntangled ? 1 : 0) << '\n';
  }
}

std::vector<ScatterRow> read_scatter_csv(std::istream& in, CsvMeta* meta) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || strip_cr(line) != kCsvMagic)
    throw ParseError(1, std::string("missing '") + kCsvMagic + "' header");
  ++lineno;
  CsvMeta parsed;
  parsed.kind = "scatter";
  std::vector<ScatterRow> rows;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream tokens(line.substr(1));
      std::string tok;
      while (tokens >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string value = tok.substr(eq + 1);
        if (key == "kind") parsed.kind = value;
        if (key == "spectrum") parsed.spectrum = value;
        if (key == "dims") {
          const auto x = value.find('x');
          if (x == std::string::npos) throw ParseError(lineno, "bad dims '" + value + "'");
          parsed.dimA = static_cast<std::size_t>(parse_double(value.substr(0, x), lineno));
          parsed.dimB = static_cast<std::size_t>(parse_double(value.substr(x + 1), lineno));
        }
      }
      continue;
    }
    if (!saw_columns) {
      if (line != kScatterColumns) throw ParseError(lineno, "unexpected column header '" + line + "'");
      saw_columns = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) throw ParseError(lineno, "expected 8 fields");
    ScatterRow r;
    r.stateId = static_cast<std::size_t>(parse_double(f[0], lineno));
    r.familyTag = f[1];
    r.lqu = parse_double(f[2], lineno);
    r.avsk = parse_double(f[3], lineno);
    if (!f[4].empty()) r.variance = parse_double(f[4], lineno);
    r.purityA = parse_double(f[5], lineno);
    r.purityB = parse_double(f[6], lineno);
    if (f[7] != "0" && f[7] != "1") throw ParseError(lineno, "witness must be 0 or 1");
    r.witnessEntangled = f[7] == "1";

    MeasureReport rep;
    rep.avsk = r.avsk;
    rep.lqu = r.lqu;
    rep.variance = r.variance;
    rep.purityA = r.purityA;
    rep.purityB = r.purityB;
    rep.witnessEntangled = r.witnessEntangled;
    const Spectrum spec = parse_spectrum(parsed.spectrum, parsed.dimA);
    if (auto problem = check_report(rep, spec, parsed.dimA)) {
      std::ostringstream msg;
      msg << "line " << lineno << ": " << *problem;
      throw InvariantViolation(msg.str());
    }
    rows.push_back(std::move(r));
  }
  if (!saw_columns) throw ParseError(lineno, "no column header");
  if (meta) *meta = parsed;
  return rows;
}

std::pair<double, double> boundary_range(FamilyTag family) {
  switch (family) {
    case FamilyTag::pure_schmidt: return {0.0, 0.5};
    case FamilyTag::cq_line: return {0.0, 0.5};
    case FamilyTag::isotropic:
    case FamilyTag::werner:
    case FamilyTag::family_product:
    case FamilyTag::family_pqc:
    case FamilyTag::family_sep:
      return {0.0, 1.0};
    default:
      throw InvalidConfig("no boundary curve for family " + std::string(to_string(family)));
  }
}

std::vector<BoundaryRow> run_boundary(FamilyTag family, std::size_t steps, Execution exec) {
  const auto [lo, hi] = boundary_range(family);
  if (steps < 2) throw InvalidConfig("steps must be at least 2");
  const Spectrum spec = Spectrum::sigma_z();
  std::vector<BoundaryRow> rows(steps);
  for_each_indexed(
      steps, RandomSeed{},
      [&, lo = lo, hi = hi](std::size_t i, Rng&) {
        const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
        const double p = i + 1 == steps ? hi : lo + (hi - lo) * t;
        const DensityMatrix rho = make_state({family, {p}});
        rows[i] = {std::string(to_string(family)), p, lqu_two_qubit(rho), avsk(rho, spec),
                   variance(rho, spec)};
      },
      exec);
  return rows;
}

void write_boundary_csv(std::ostream& out, const std::vector<BoundaryRow>& rows) {
  out << kCsvMagic << '\n' << "# kind=boundary dims=2x2 spectrum=sigma-z\n" << kBoundaryColumns << '\n';
  for (const auto& r : rows)
    out << r.family << ',' << format_number(r.param) << ',' << format_number(r.lqu) << ','
        << format_number(r.avsk) << ',' << format_number(r.variance) << '\n';
}

std::vector<BoundsRow> apply_bounds(const std::vector<ScatterRow>& rows) {
  std::vector<BoundsRow> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (!r.variance) throw InvalidConfig("bounds need a variance column (scatter --with-variance)");
    BoundsRow b;
    b.stateId = r.stateId;
    b.lqu = r.lqu;
    b.avsk = r.avsk;
    b.variance = *r.variance;
    const auto bounds = lqu_bounds(r.avsk, *r.variance);
    b.lower = bounds.lower;
    b.upper = bounds.upper;
    b.within = b.lower <= b.lqu + 1e-9 && b.lqu <= b.upper + 1e-6;
    out.push_back(b);
  }
  return out;
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows) {
  out << kCsvMagic << '\n' << "# kind=bounds dims=2x2 spectrum=sigma-z\n" << kBoundsColumns << '\n';
  for (const auto& r : rows)
    out << r.stateId << ',' << format_number(r.lqu) << ',' << format_number(r.avsk) << ','
        << format_number(r.variance) << ',' << format_number(r.lower) << ','
        << format_number(r.upper) << ',' << (r.within ? 1 : 0) << '\n';
}

}  // namespace probe

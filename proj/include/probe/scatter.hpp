#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "probe/measures.hpp"
#include "probe/moments.hpp"
#include "probe/sampling.hpp"
#include "probe/states.hpp"

namespace probe {

inline constexpr const char* kCsvMagic = "# probe-metrics v1";

struct MeasureOptions {
  bool with_variance = false;
  std::size_t restarts = kDefaultRestarts;
  RandomSeed seed{};
};

MeasureReport measure_state(const DensityMatrix& rho, const Spectrum& spec,
                            const MeasureOptions& options = {},
                            std::optional<std::string> family_tag = std::nullopt);

/// Parses "sigma-z", "optimal", "harmonic" or a comma list "1,0,-1".
Spectrum parse_spectrum(const std::string& text, std::size_t dimA);

enum class SampleMode { ginibre, separable, pure };

struct RunConfig {
  std::size_t dimA = 2;
  std::size_t dimB = 2;
  std::size_t count = 1;
  RandomSeed seed{};
  std::string spectrum = "sigma-z";
  bool withVariance = false;
  std::string output;  // empty: stdout
  std::string format = "csv";
  SampleMode mode = SampleMode::ginibre;
  std::size_t rank = 0;   // 0: full rank
  std::size_t terms = 0;  // 0: drawn per state in [1, 2 N_A N_B]
  std::optional<FamilyTag> family;
  std::optional<double> param;
  std::size_t steps = 200;
  std::size_t restarts = kDefaultRestarts;
  Execution execution = Execution::parallel;

  /// Throws InvalidConfig on out-of-range fields.
  void validate() const;
};

struct ScatterRow {
  std::size_t stateId = 0;
  std::string familyTag;
  double lqu = 0;
  double avsk = 0;
  std::optional<double> variance;
  double purityA = 0;
  double purityB = 0;
  bool witnessEntangled = false;
};

struct ColumnRange {
  double min = 0;
  double max = 0;
};

struct ScatterSummary {
  std::size_t rows = 0;
  ColumnRange lqu, avsk, variance, purityA, purityB;
  std::size_t entangled = 0;
  std::size_t orderingViolations = 0;  // avsk < lqu - 1e-9
  std::size_t upperViolations = 0;     // avsk above the two-qubit maximum
  std::size_t separableViolations = 0; // separable mode: avsk or lqu above the separable caps
  std::size_t total_violations() const {
    return orderingViolations + upperViolations + separableViolations;
  }
};

std::vector<ScatterRow> generate_scatter(const RunConfig& cfg);
ScatterSummary summarize(const std::vector<ScatterRow>& rows, const RunConfig& cfg);

struct CsvMeta {
  std::string kind;  // scatter | boundary | bounds
  std::size_t dimA = 2;
  std::size_t dimB = 2;
  std::string spectrum = "sigma-z";
};

void write_scatter_csv(std::ostream& out, const std::vector<ScatterRow>& rows, const CsvMeta& meta);
std::vector<ScatterRow> read_scatter_csv(std::istream& in, CsvMeta* meta = nullptr);

struct BoundaryRow {
  std::string family;
  double param = 0;
  double lqu = 0;
  double avsk = 0;
  double variance = 0;
};

/// Range of the family parameter swept by the boundary command.
std::pair<double, double> boundary_range(FamilyTag family);
std::vector<BoundaryRow> run_boundary(FamilyTag family, std::size_t steps,
                                      Execution exec = Execution::parallel);
void write_boundary_csv(std::ostream& out, const std::vector<BoundaryRow>& rows);

struct BoundsRow {
  std::size_t stateId = 0;
  double lqu = 0;
  double avsk = 0;
  double variance = 0;
  double lower = 0;
  double upper = 0;
  bool within = false;  // lower <= lqu <= upper + 1e-6
};

std::vector<BoundsRow> apply_bounds(const std::vector<ScatterRow>& rows);
void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows);

std::string format_number(double v);

}  // namespace probe

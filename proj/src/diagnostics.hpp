#pragma once

#include <cstdio>
#include <string>
#include <utility>

#include "fields.hpp"

namespace vesicle {

// Per-step scalar observables, written to diagnostics.csv in this order.
struct DiagRecord {
  double t = 0.0;
  double volume = 0.0;
  double area = 0.0;
  double e_v = 0.0;        // instantaneous stretching
  double e_c = 0.0;        // accumulated stretching
  double angle_deg = 0.0;  // unwrapped inclination angle
  double lambda_global = 0.0;
  double lambda_volume = 0.0;
  double flow_residual = 0.0;
  double phi_residual = 0.0;
};

// E_v = int eps^-1 (1-phi^2)^2 |P : grad v|,
// E_c = int eps^-1 (1-phi^2)^2 |(c-1)/c|.
std::pair<double, double> stretching_errors(const ScalarField& phi, const VectorField& v,
                                            const ScalarField& c, double eps);

// Orientation of the major principal axis of the second-moment tensor of the
// indicator (phi+1)/2, in degrees from the +x axis, in (-90, 90].
double inclination_angle_raw(const ScalarField& phi, bool* degenerate = nullptr);

// Unwraps raw angles across steps (shifts by multiples of 180 degrees to stay
// within 90 of the previous angle) so tumbling shows as a monotone decrease.
// Holds the previous angle when the moment tensor is near-degenerate.
class AngleTracker {
 public:
  double update(const ScalarField& phi);
  double current() const { return angle_; }
  bool started() const { return started_; }
  void restore(double angle, bool started) {
    angle_ = angle;
    started_ = started;
  }

 private:
  double angle_ = 0.0;
  bool started_ = false;
};

class CsvWriter {
 public:
  CsvWriter() = default;
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(CsvWriter&& other) noexcept;
  CsvWriter& operator=(CsvWriter&& other) noexcept;

  void append(const DiagRecord& rec);  // flushes after every row

 private:
  std::FILE* file_ = nullptr;
};

std::string csv_row(const DiagRecord& rec);
extern const char* const kCsvHeader;

}  // namespace vesicle

#include "wit/training/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "wit/errors.hpp"

namespace wit::train {

std::vector<double> localization_errors(const num::Tensor& predicted, const num::Tensor& truth,
                                        const data::LabelBounds& b) {
  if (predicted.shape() != truth.shape() || predicted.rank() != 2 || predicted.cols() != 2) {
    throw DimensionError("localization_errors: expected matching [n, 2] tensors");
  }
  if (predicted.rows() == 0) throw UsageError("localization_errors: empty set");
  std::vector<double> err(predicted.rows());
  const double sx = b.xmax - b.xmin;
  const double sy = b.ymax - b.ymin;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double dx = (predicted.at(i, 0) - truth.at(i, 0)) * sx;
    const double dy = (predicted.at(i, 1) - truth.at(i, 1)) * sy;
    err[i] = std::hypot(dx, dy);
  }
  return err;
}

double mean_error(const std::vector<double>& errors) {
  if (errors.empty()) throw UsageError("mean of an empty error set");
  double s = 0.0;
  for (double e : errors) s += e;
  return s / static_cast<double>(errors.size());
}

double mae(const num::Tensor& predicted, const num::Tensor& truth, const data::LabelBounds& bounds) {
  return mean_error(localization_errors(predicted, truth, bounds));
}

double percentile95(std::vector<double> errors) {
  if (errors.empty()) throw UsageError("percentile of an empty error set");
  std::sort(errors.begin(), errors.end());
  // ceil(0.95 n) in integer arithmetic.
  const std::size_t rank = (95 * errors.size() + 99) / 100;
  return errors[rank - 1];
}

std::vector<std::pair<double, double>> ecdf(std::vector<double> errors) {
  if (errors.empty()) throw UsageError("ecdf of an empty error set");
  std::sort(errors.begin(), errors.end());
  std::vector<std::pair<double, double>> out(errors.size());
  const double n = static_cast<double>(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) out[i] = {errors[i], static_cast<double>(i + 1) / n};
  return out;
}

void write_ecdf(std::ostream& os, const std::vector<std::pair<double, double>>& curve) {
  os << "# error_m fraction\n" << std::setprecision(17);
  for (const auto& [e, f] : curve) os << e << ' ' << f << '\n';
}

}  // namespace wit::train

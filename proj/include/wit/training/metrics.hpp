#pragma once

#include <ostream>
#include <utility>
#include <vector>

#include "wit/dataset/dataset.hpp"
#include "wit/numcore/tensor.hpp"

namespace wit::train {

/// Euclidean error per sample in meters, after mapping both [n, 2] scaled
/// tensors back through the label bounds.
std::vector<double> localization_errors(const num::Tensor& predicted, const num::Tensor& truth,
                                        const data::LabelBounds& bounds);

/// Mean Euclidean error in meters.
double mae(const num::Tensor& predicted, const num::Tensor& truth, const data::LabelBounds& bounds);
double mean_error(const std::vector<double>& errors);

/// Nearest-rank 95th percentile: sorted[ceil(0.95 n) - 1].
double percentile95(std::vector<double> errors);

/// (error, i/n) for the sorted errors.
std::vector<std::pair<double, double>> ecdf(std::vector<double> errors);
void write_ecdf(std::ostream& os, const std::vector<std::pair<double, double>>& curve);

}  // namespace wit::train

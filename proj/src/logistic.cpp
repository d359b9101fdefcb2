#include "iag/logistic.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace iag {
namespace {

double log1p_exp(double t) {
  return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    size_t a = field.find_first_not_of(" \t\r");
    size_t b = field.find_last_not_of(" \t\r");
    fields.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  return fields;
}

}  // namespace

LogisticComponent::LogisticComponent(Matrix features, Vector labels,
                                     double ridge)
    : features_(std::move(features)), labels_(std::move(labels)), ridge_(ridge) {
  if (features_.rows() < 1)
    throw std::invalid_argument("empty sample block");
  if (features_.rows() != labels_.size())
    throw std::invalid_argument("feature/label row mismatch");
  if (ridge_ < 0) throw std::invalid_argument("ridge must be nonnegative");
  for (Index j = 0; j < labels_.size(); ++j)
    if (labels_[j] != 1.0 && labels_[j] != -1.0)
      throw std::invalid_argument("labels must be +1 or -1");
  lipschitz_ = features_.rowwise().squaredNorm().sum() / 4.0 + ridge_;
}

double LogisticComponent::value(const Vector& x) const {
  if (x.size() != features_.cols())
    throw std::invalid_argument("dimension mismatch");
  const Vector margins = features_ * x;
  double acc = 0.0;
  for (Index j = 0; j < margins.size(); ++j)
    acc += log1p_exp(-labels_[j] * margins[j]);
  return acc + 0.5 * ridge_ * x.squaredNorm();
}

Vector LogisticComponent::gradient(const Vector& x) const {
  if (x.size() != features_.cols())
    throw std::invalid_argument("dimension mismatch");
  const Vector margins = features_ * x;
  Vector g = ridge_ * x;
  for (Index j = 0; j < margins.size(); ++j) {
    const double w = -labels_[j] * sigmoid(-labels_[j] * margins[j]);
    g += w * features_.row(j).transpose();
  }
  return g;
}

LogisticData load_logistic_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path);

  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": missing header row");
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "label")
    throw std::runtime_error(path + ": header must start with `label`");
  const Index n = static_cast<Index>(header.size()) - 1;
  if (n < 1) throw std::runtime_error(path + ": no feature columns");

  std::vector<double> labels;
  std::vector<double> values;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<Index>(fields.size()) != n + 1)
      throw std::runtime_error(path + ": wrong field count at line " +
                               std::to_string(line_no));
    double parsed = 0;
    try {
      size_t pos = 0;
      parsed = std::stod(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::runtime_error(path + ": bad label at line " +
                               std::to_string(line_no));
    }
    if (parsed != 1.0 && parsed != -1.0)
      throw std::runtime_error(path + ": label must be +1 or -1 at line " +
                               std::to_string(line_no));
    labels.push_back(parsed);
    for (Index j = 1; j <= n; ++j) {
      try {
        size_t pos = 0;
        values.push_back(std::stod(fields[static_cast<size_t>(j)], &pos));
        if (pos != fields[static_cast<size_t>(j)].size())
          throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": bad value at line " +
                                 std::to_string(line_no));
      }
    }
  }
  const Index rows = static_cast<Index>(labels.size());
  if (rows < 1) throw std::runtime_error(path + ": no data rows");

  LogisticData data;
  data.features.resize(rows, n);
  data.labels.resize(rows);
  for (Index i = 0; i < rows; ++i) {
    data.labels[i] = labels[static_cast<size_t>(i)];
    for (Index j = 0; j < n; ++j)
      data.features(i, j) = values[static_cast<size_t>(i * n + j)];
  }
  return data;
}

Problem make_logistic_l2(const Matrix& features, const Vector& labels,
                         double lambda, int m) {
  const Index rows = features.rows();
  const Index n = features.cols();
  if (m < 1) throw std::invalid_argument("m must be positive");
  if (rows < m)
    throw std::invalid_argument("fewer samples than blocks: empty blocks");
  if (labels.size() != rows)
    throw std::invalid_argument("feature/label row mismatch");
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");

  std::vector<std::shared_ptr<const Component>> components;
  components.reserve(static_cast<size_t>(m));
  const double ridge = lambda / m;
  for (int i = 0; i < m; ++i) {
    const Index lo = rows * i / m;
    const Index hi = rows * (i + 1) / m;
    components.push_back(std::make_shared<LogisticComponent>(
        features.middleRows(lo, hi - lo), labels.segment(lo, hi - lo), ridge));
  }

  double lipschitz = 0.0;
  for (const auto& c : components) lipschitz += c->lipschitz();
  Vector x_star = reference_optimum(components, lambda, lipschitz, n);
  return Problem(std::move(components), lambda, std::move(x_star));
}

}  // namespace iag

#include "hyperspec/gaussdist.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "hyperspec/errors.hpp"
#include "hyperspec/mclab.hpp"
#include "hyperspec/version.hpp"

namespace hyperspec {

GaussianPanel panel_from_covariance(const Eigen::MatrixXd& covariance, Space space) {
  if (covariance.rows() != covariance.cols() || covariance.rows() == 0) {
    throw ValidationError("panel_from_covariance: covariance must be a non-empty square matrix");
  }
  if (!covariance.allFinite()) throw ValidationError("panel_from_covariance: covariance has non-finite entries");
  const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ValidationError("panel_from_covariance: covariance is not symmetric");
  }
  GaussianPanel panel;
  panel.space = space;
  panel.covariance = 0.5 * (covariance + covariance.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(panel.covariance);
  if (es.info() != Eigen::Success) throw ValidationError("panel_from_covariance: eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  const double floor = -1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < floor) {
      std::ostringstream msg;
      msg << "panel_from_covariance: covariance is indefinite (eigenvalue " << ev(i) << ")";
      throw ValidationError(msg.str());
    }
    ev(i) = std::max(ev(i), 0.0);
  }
  panel.factor = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  panel.covariance = panel.factor * panel.factor.transpose();
  return panel;
}

GaussianPanel gaussian_covariance(const SpectralMeasure& sigma, const std::vector<RadialFunction>& fs) {
  if (fs.empty()) throw ValidationError("gaussian_covariance: empty panel");
  const auto k = static_cast<Eigen::Index>(fs.size());
  const auto m = spectral_pairing_matrix(sigma, fs);
  Eigen::MatrixXd c(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) c(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  GaussianPanel panel = panel_from_covariance(c, sigma.space);
  panel.test_functions = fs;
  panel.sigma_kind = sigma.kind;
  return panel;
}

Eigen::MatrixXd sample_gaussian_statistics(const GaussianPanel& panel, int replicas, RngStream& rng) {
  if (replicas < 1) throw ValidationError("sample_gaussian_statistics: replicas must be >= 1");
  const Eigen::Index k = panel.factor.rows();
  Eigen::MatrixXd out(replicas, k);
  Eigen::VectorXd z(k);
  for (int r = 0; r < replicas; ++r) {
    for (Eigen::Index i = 0; i < k; ++i) z(i) = rng.normal();
    out.row(r) = (panel.factor * z).transpose();
  }
  return out;
}

double characteristic_residual(const GaussianPanel& panel, int f_index, const Eigen::MatrixXd& samples) {
  if (f_index < 0 || f_index >= panel.covariance.rows() || samples.cols() != panel.covariance.cols()) {
    throw ValidationError("characteristic_residual: index or sample shape does not match the panel");
  }
  if (samples.rows() == 0) throw ValidationError("characteristic_residual: no samples");
  std::vector<double> re, im;
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    re.push_back(std::cos(samples(r, f_index)));
    im.push_back(std::sin(samples(r, f_index)));
  }
  const double n = static_cast<double>(samples.rows());
  const std::complex<double> mean(sorted_pairwise_sum(re) / n, sorted_pairwise_sum(im) / n);
  return std::abs(mean - std::exp(-0.5 * panel.covariance(f_index, f_index)));
}

std::string samples_csv(const Eigen::MatrixXd& samples) {
  std::ostringstream o;
  o.imbue(std::locale::classic());
  o << std::setprecision(17);
  for (Eigen::Index j = 0; j < samples.cols(); ++j) o << (j ? "," : "") << 'f' << j;
  o << '\n';
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    for (Eigen::Index j = 0; j < samples.cols(); ++j) o << (j ? "," : "") << samples(r, j);
    o << '\n';
  }
  return o.str();
}

std::string panel_json(const GaussianPanel& panel) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["space"] = panel.space.name();
  j["sigma"] = panel.sigma_kind;
  j["test_functions"] = nlohmann::ordered_json::array();
  for (const auto& f : panel.test_functions) j["test_functions"].push_back(f.description);
  j["covariance"] = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < panel.covariance.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(panel.covariance.cols()));
    for (Eigen::Index c = 0; c < panel.covariance.cols(); ++c) row[static_cast<std::size_t>(c)] = panel.covariance(r, c);
    j["covariance"].push_back(row);
  }
  return j.dump(2);
}

}  // namespace hyperspec

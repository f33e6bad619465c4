#include "dsab/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dsab {

void BuildingParams::validate() const {
  if (n_floors < 2)
    throw std::invalid_argument("building: n_floors must be at least 2");
  if (!(storey_mass > 0.0) || !(storey_stiffness > 0.0) ||
      !(storey_height > 0.0) || !(building_gap > 0.0))
    throw std::invalid_argument("building: physical quantities must be positive");
  if (!(damping_ratio >= 0.0) || !(damping_ratio < 1.0))
    throw std::invalid_argument("building: damping_ratio must lie in [0, 1)");
}

void DamperParams::validate() const {
  if (!(k_d >= 0.0) || !(c_d >= 0.0))
    throw std::invalid_argument("damper: k_d and c_d must be nonnegative");
  if (dampers_per_link < 1)
    throw std::invalid_argument("damper: dampers_per_link must be at least 1");
}

bool is_valid_configuration(const DamperConfiguration& config,
                            int n_positions) {
  int prev = 0;
  for (const int d : config) {
    if (d <= prev || d > n_positions) return false;
    prev = d;
  }
  return true;
}

void require_valid_configuration(const DamperConfiguration& config,
                                 int n_positions) {
  if (!is_valid_configuration(config, n_positions))
    throw std::invalid_argument("configuration error: positions must be "
                                "strictly increasing indices in [1, " +
                                std::to_string(n_positions) + "]");
}

std::string configuration_label(const DamperConfiguration& config) {
  std::string label;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (i > 0) label += '-';
    label += std::to_string(config[i]);
  }
  return label;
}

DamperConfiguration configuration_from_label(const std::string& label) {
  DamperConfiguration config;
  std::size_t pos = 0;
  while (pos < label.size()) {
    std::size_t next = label.find('-', pos);
    if (next == std::string::npos) next = label.size();
    config.push_back(std::stoi(label.substr(pos, next - pos)));
    pos = next + 1;
  }
  return config;
}

int candidate_position_count(int n_floors) {
  if (n_floors < 2)
    throw std::invalid_argument("enumerate_positions: n_floors must be >= 2");
  return 3 * n_floors - 2;
}

std::vector<LinkTopology> enumerate_positions(int n_floors) {
  const int total = candidate_position_count(n_floors);
  std::vector<LinkTopology> links;
  links.reserve(static_cast<std::size_t>(total));
  int index = 1;
  for (int f = 1; f < n_floors; ++f) {
    links.push_back({index++, LinkKind::Straight, f, f});
    links.push_back({index++, LinkKind::DiagLeftUp, f, f + 1});
    links.push_back({index++, LinkKind::DiagRightUp, f + 1, f});
  }
  links.push_back({index++, LinkKind::Straight, n_floors, n_floors});
  return links;
}

DamperConfiguration mirror_configuration(
    const DamperConfiguration& config, const std::vector<LinkTopology>& links) {
  require_valid_configuration(config, static_cast<int>(links.size()));
  DamperConfiguration mirrored;
  mirrored.reserve(config.size());
  for (const int d : config) {
    switch (links[static_cast<std::size_t>(d - 1)].kind) {
      case LinkKind::Straight:
        mirrored.push_back(d);
        break;
      case LinkKind::DiagLeftUp:
        mirrored.push_back(d + 1);
        break;
      case LinkKind::DiagRightUp:
        mirrored.push_back(d - 1);
        break;
    }
  }
  std::sort(mirrored.begin(), mirrored.end());
  return mirrored;
}

std::vector<double> natural_frequencies(const Eigen::MatrixXd& M,
                                        const Eigen::MatrixXd& K) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(K, M);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("natural_frequencies: eigen solve failed");
  std::vector<double> omega(static_cast<std::size_t>(M.rows()));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    omega[static_cast<std::size_t>(i)] =
        std::sqrt(std::max(0.0, solver.eigenvalues()[i]));
  return omega;
}

std::pair<double, double> rayleigh_coefficients(double zeta, double w1,
                                                double w2) {
  const double a0 = 2.0 * zeta * w1 * w2 / (w1 + w2);
  const double a1 = 2.0 * zeta / (w1 + w2);
  return {a0, a1};
}

BuildingMatrices assemble_building(const BuildingParams& params) {
  params.validate();
  const int n = params.n_floors;
  const double m = params.storey_mass;
  const double k = params.storey_stiffness;

  BuildingMatrices out;
  out.M = m * Eigen::MatrixXd::Identity(n, n);
  out.K = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    out.K(i, i) = (i + 1 < n) ? 2.0 * k : k;
    if (i + 1 < n) {
      out.K(i, i + 1) = -k;
      out.K(i + 1, i) = -k;
    }
  }

  const auto omega = natural_frequencies(out.M, out.K);
  const auto [a0, a1] = rayleigh_coefficients(params.damping_ratio, omega[0],
                                              omega[1]);
  out.C = a0 * out.M + a1 * out.K;
  return out;
}

CouplingMatrices assemble_coupling(const DamperConfiguration& config,
                                   const std::vector<LinkTopology>& links,
                                   const DamperParams& dampers,
                                   const BuildingParams& geometry,
                                   DiagonalProjection projection) {
  dampers.validate();
  const int P = static_cast<int>(links.size());
  require_valid_configuration(config, P);
  const int n = (P + 2) / 3;
  const Eigen::Index dof = 2 * n;

  const double c_eff = dampers.dampers_per_link * dampers.c_d;
  const double k_eff = dampers.dampers_per_link * dampers.k_d;
  // tan(theta) = storey_height / building_gap for a diagonal link.
  const double h = geometry.storey_height;
  const double g = geometry.building_gap;
  const double cos2 = (g * g) / (g * g + h * h);

  CouplingMatrices out;
  out.C_D = Eigen::MatrixXd::Zero(dof, dof);
  out.K_D = Eigen::MatrixXd::Zero(dof, dof);
  for (const int d : config) {
    const LinkTopology& link = links[static_cast<std::size_t>(d - 1)];
    const double eta =
        (link.kind == LinkKind::Straight ||
         projection == DiagonalProjection::Unit)
            ? 1.0
            : cos2;
    const Eigen::Index i = link.left_floor - 1;
    const Eigen::Index j = n + link.right_floor - 1;
    const double c = eta * c_eff;
    const double k = eta * k_eff;
    out.C_D(i, i) += c;
    out.C_D(j, j) += c;
    out.C_D(i, j) -= c;
    out.C_D(j, i) -= c;
    out.K_D(i, i) += k;
    out.K_D(j, j) += k;
    out.K_D(i, j) -= k;
    out.K_D(j, i) -= k;
  }
  return out;
}

CoupledSystem assemble_system(const BuildingParams& building,
                              const DamperParams& dampers,
                              const DamperConfiguration& config,
                              const std::vector<LinkTopology>& links,
                              const ModelOptions& options) {
  const BuildingMatrices one = assemble_building(building);
  const int n = building.n_floors;
  const Eigen::Index dof = 2 * n;

  CoupledSystem sys;
  sys.n_dof = dof;
  sys.M = Eigen::MatrixXd::Zero(dof, dof);
  sys.C_struct = Eigen::MatrixXd::Zero(dof, dof);
  sys.K_struct = Eigen::MatrixXd::Zero(dof, dof);
  sys.M.topLeftCorner(n, n) = one.M;
  sys.M.bottomRightCorner(n, n) = one.M;
  sys.C_struct.topLeftCorner(n, n) = one.C;
  sys.C_struct.bottomRightCorner(n, n) = one.C;
  sys.K_struct.topLeftCorner(n, n) = one.K;
  sys.K_struct.bottomRightCorner(n, n) = one.K;

  CouplingMatrices coupling =
      assemble_coupling(config, links, dampers, building, options.projection);
  sys.C_D = std::move(coupling.C_D);
  sys.K_D = options.include_damper_stiffness
                ? std::move(coupling.K_D)
                : Eigen::MatrixXd::Zero(dof, dof);
  sys.influence = Eigen::VectorXd::Ones(dof);
  return sys;
}

}  // namespace dsab

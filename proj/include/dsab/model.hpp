#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace dsab {

// Two identical shear buildings standing side by side; one lateral DOF per
// floor, floors numbered 1..n_floors bottom-up.
struct BuildingParams {
  int n_floors = 6;
  double storey_mass = 64719.0;         // kg
  double storey_stiffness = 3.7774e8;   // N/m
  double damping_ratio = 0.05;          // modal ratio at the first two modes
  double storey_height = 3.0;           // m
  double building_gap = 2.0;            // m, horizontal clear distance

  void validate() const;
};

// Identical viscoelastic dampers: spring k_d and dashpot c_d in parallel,
// dampers_per_link devices acting at each occupied link.
struct DamperParams {
  double k_d = 1.0e6;        // N/m
  double c_d = 1.0e8;        // N*s/m
  int dampers_per_link = 2;

  void validate() const;
};

enum class LinkKind { Straight, DiagLeftUp, DiagRightUp };

// One candidate damper position connecting left-building floor left_floor to
// right-building floor right_floor. Indices 1..P are a bijection onto the
// P = 3*n_floors - 2 candidate links.
struct LinkTopology {
  int index = 0;  // 1-based
  LinkKind kind = LinkKind::Straight;
  int left_floor = 0;
  int right_floor = 0;
};

// Strictly increasing set of 1-based link indices.
using DamperConfiguration = std::vector<int>;

bool is_valid_configuration(const DamperConfiguration& config, int n_positions);
void require_valid_configuration(const DamperConfiguration& config,
                                 int n_positions);

// "d1-d2-...": the canonical text form used in CSV output.
std::string configuration_label(const DamperConfiguration& config);
DamperConfiguration configuration_from_label(const std::string& label);

int candidate_position_count(int n_floors);  // 3*n_floors - 2

// Canonical link ordering: for floor f = 1..n_floors-1 emit straight(f),
// diag with the right end one floor up, diag with the left end one floor up;
// then straight(n_floors) last. index equals the list position (1-based).
std::vector<LinkTopology> enumerate_positions(int n_floors);

// Mirror image of a configuration under swapping the two buildings.
DamperConfiguration mirror_configuration(const DamperConfiguration& config,
                                         const std::vector<LinkTopology>& links);

struct BuildingMatrices {
  Eigen::MatrixXd M;  // diagonal lumped mass
  Eigen::MatrixXd C;  // Rayleigh damping fitted at the first two modes
  Eigen::MatrixXd K;  // shear-building tridiagonal stiffness
};

BuildingMatrices assemble_building(const BuildingParams& params);

// Undamped natural circular frequencies of (K, M), ascending, rad/s.
std::vector<double> natural_frequencies(const Eigen::MatrixXd& M,
                                        const Eigen::MatrixXd& K);

// C = a0*M + a1*K matching the damping ratio zeta at circular frequencies
// w1 and w2.
std::pair<double, double> rayleigh_coefficients(double zeta, double w1,
                                                double w2);

// Axial-projection factor for diagonal links; straight links always get 1.
enum class DiagonalProjection { CosSquared, Unit };

struct ModelOptions {
  DiagonalProjection projection = DiagonalProjection::CosSquared;
  bool include_damper_stiffness = true;
};

struct CouplingMatrices {
  Eigen::MatrixXd C_D;
  Eigen::MatrixXd K_D;
};

// Damper contribution of an occupied link set. Left-building floor f maps to
// global DOF f-1, right-building floor f to n_floors + f - 1.
CouplingMatrices assemble_coupling(const DamperConfiguration& config,
                                   const std::vector<LinkTopology>& links,
                                   const DamperParams& dampers,
                                   const BuildingParams& geometry,
                                   DiagonalProjection projection);

// Assembled equation-of-motion operands for the coupled pair:
//   M x'' + (C_struct + C_D) x' + (K_struct + K_D) x = -M * influence * ag(t)
template <typename Scalar>
struct CoupledSystemT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Eigen::Index n_dof = 0;
  Matrix M;
  Matrix C_struct;
  Matrix K_struct;
  Matrix C_D;
  Matrix K_D;
  Vector influence;  // ones
};

using CoupledSystem = CoupledSystemT<double>;

CoupledSystem assemble_system(const BuildingParams& building,
                              const DamperParams& dampers,
                              const DamperConfiguration& config,
                              const std::vector<LinkTopology>& links,
                              const ModelOptions& options = {});

}  // namespace dsab

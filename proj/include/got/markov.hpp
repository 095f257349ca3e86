#pragma once

#include <Eigen/Dense>

namespace got::markov {

/// Maximum absolute deviation of any row sum from one.
double row_sum_error(const Eigen::MatrixXd& transition);

/// True iff every state reaches every other state through positive entries.
bool is_irreducible(const Eigen::MatrixXd& transition);

/// Period of an irreducible chain (gcd of cycle lengths through the
/// positive-entry graph). Returns 1 for aperiodic chains.
int period(const Eigen::MatrixXd& transition);

/// True iff the chain has exactly one closed communicating class; states
/// outside it are transient. Irreducible chains are trivially unichain.
bool is_unichain(const Eigen::MatrixXd& transition);

/// Solves pi P = pi, sum(pi) = 1 by a dense LU factorisation in which one
/// balance equation is replaced by the normalisation row. Valid for any
/// unichain matrix. Throws std::runtime_error if the system is singular.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition);

/// max over states of |(pi P - pi)_z|.
double stationary_residual(const Eigen::MatrixXd& transition, const Eigen::VectorXd& pi);

}  // namespace got::markov

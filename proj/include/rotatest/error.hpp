#pragma once

#include <stdexcept>
#include <string>

namespace rotatest {

// A model returned a non-finite probability or derivative.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The optimizer hit its iteration cap. Carries the best point seen so far.
class EstimationError : public std::runtime_error {
 public:
  EstimationError(const std::string& what, double best_theta, double best_loglik)
      : std::runtime_error(what), best_theta_(best_theta), best_loglik_(best_loglik) {}
  double best_theta() const noexcept { return best_theta_; }
  double best_loglik() const noexcept { return best_loglik_; }

 private:
  double best_theta_;
  double best_loglik_;
};

// Per-subgroup information matrix has an eigenvalue below the floor.
class SingularInformationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// K + 1 > 2^m: the subgroup is too small to carry K constraints.
class IdentifiabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too many replications of one experiment cell failed.
class ReplicationFailureError : public std::runtime_error {
 public:
  ReplicationFailureError(const std::string& what, std::size_t failures, std::size_t replications)
      : std::runtime_error(what), failures_(failures), replications_(replications) {}
  std::size_t failures() const noexcept { return failures_; }
  std::size_t replications() const noexcept { return replications_; }

 private:
  std::size_t failures_;
  std::size_t replications_;
};

}  // namespace rotatest

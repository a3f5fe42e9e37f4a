#pragma once

#include <cstdint>
#include <ostream>

namespace kcert {

enum class Role { Prover, Verifier };

struct RoleCost {
  std::uint64_t field_ops = 0;     ///< multiplications + additions
  std::uint64_t matvecs = 0;       ///< op * v
  std::uint64_t row_products = 0;  ///< v^T * op

  /// Every application of the operator, whichever side.
  std::uint64_t applications() const { return matvecs + row_products; }

  friend bool operator==(const RoleCost&, const RoleCost&) = default;
};

/// Per-session operation counts. Counters only ever grow.
struct CostLedger {
  RoleCost prover;
  RoleCost verifier;
  std::uint64_t comm_field_elements = 0;
  std::uint64_t rounds = 0;
  /// Weighted count of probabilistic tests the Verifier ran; each test can be
  /// fooled with probability at most weight / |S|.
  std::uint64_t tests = 0;
  /// Tests that failed. At most 1 in a normal run, which stops at the first
  /// failure; an audit run keeps going and counts them all.
  std::uint64_t failed_tests = 0;

  RoleCost& role(Role r) { return r == Role::Prover ? prover : verifier; }
  const RoleCost& role(Role r) const { return r == Role::Prover ? prover : verifier; }

  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const CostLedger& l) {
  return os << "prover: field_ops=" << l.prover.field_ops << " matvecs=" << l.prover.matvecs
            << " row_products=" << l.prover.row_products << "\nverifier: field_ops=" << l.verifier.field_ops
            << " matvecs=" << l.verifier.matvecs << " row_products=" << l.verifier.row_products
            << "\ncommunication: " << l.comm_field_elements << " field elements, " << l.rounds
            << " rounds\ntests: " << l.tests << " (failed " << l.failed_tests << ")";
}

/// Handle charging work to one role of a ledger. A default-constructed counter
/// discards everything, which is what oracle and bookkeeping code uses.
class OpCounter {
 public:
  OpCounter() = default;
  OpCounter(CostLedger& ledger, Role role) : cost_(&ledger.role(role)) {}

  void ops(std::uint64_t k) const {
    if (cost_) cost_->field_ops += k;
  }
  void matvec(std::uint64_t mu) const {
    if (cost_) {
      cost_->field_ops += mu;
      ++cost_->matvecs;
    }
  }
  void row_product(std::uint64_t mu) const {
    if (cost_) {
      cost_->field_ops += mu;
      ++cost_->row_products;
    }
  }

 private:
  RoleCost* cost_ = nullptr;
};

}  // namespace kcert

#pragma once

#include <exception>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kcert/field.hpp"

namespace kcert {

/// Nonnegative fraction in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(u64 num, u64 den) : num_(num), den_(den) {
    if (den == 0) throw DivisionByZero();
    const u64 g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  u64 numerator() const { return num_; }
  u64 denominator() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  u64 num_ = 0;
  u64 den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.numerator() << '/' << r.denominator();
}

/// Union bound over weighted probabilistic tests: min(1, tests / |S|).
inline Rational soundness_bound(u64 tests, const PrimeField& field) {
  const u64 s = field.sample_set_size();
  return tests >= s ? Rational(1, 1) : Rational(tests, s);
}

struct Accept {
  Rational soundness_error_bound;
};

struct Reject {
  std::string check_id;
  std::vector<u64> location;
};

class VerifierOutcome {
 public:
  VerifierOutcome(Accept a) : v_(std::move(a)) {}
  VerifierOutcome(Reject r) : v_(std::move(r)) {}

  bool accepted() const { return std::holds_alternative<Accept>(v_); }
  const Accept& accept() const { return std::get<Accept>(v_); }
  const Reject& reject() const { return std::get<Reject>(v_); }

 private:
  std::variant<Accept, Reject> v_;
};

inline std::string describe(const Reject& r) {
  std::ostringstream os;
  os << r.check_id;
  if (!r.location.empty()) {
    os << " at (";
    for (std::size_t i = 0; i < r.location.size(); ++i) os << (i ? ", " : "") << r.location[i];
    os << ')';
  }
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const VerifierOutcome& o) {
  if (o.accepted()) return os << "ACCEPT (soundness error <= " << o.accept().soundness_error_bound << ")";
  return os << "REJECT " << describe(o.reject());
}

/// Thrown by a failed Verifier check and turned into a Reject outcome at the
/// protocol boundary.
class CheckFailed : public std::exception {
 public:
  explicit CheckFailed(Reject r) : reject_(std::move(r)), what_("check failed: " + describe(reject_)) {}
  const Reject& reject() const { return reject_; }
  const char* what() const noexcept override { return what_.c_str(); }

 private:
  Reject reject_;
  std::string what_;
};

}  // namespace kcert

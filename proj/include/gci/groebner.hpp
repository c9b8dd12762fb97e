#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gci/minors.hpp"
#include "gci/polynomial.hpp"

namespace gci {

struct GroebnerBudget {
  std::size_t max_basis_size = 256;
  std::size_t max_pairs = 20000;
};

// Reduced Groebner basis together with exact cofactors expressing every basis
// element over the input generators:
//   elements()[b] == sum_p cofactors()[b][p] * generators()[p].
class GroebnerBasis {
 public:
  const std::vector<Polynomial>& generators() const noexcept { return generators_; }
  const std::vector<Polynomial>& elements() const noexcept { return elements_; }
  const std::vector<std::vector<Polynomial>>& cofactors() const noexcept { return cofactors_; }
  const MonomialOrder& order() const noexcept { return order_; }
  std::size_t pairs_considered() const noexcept { return pairs_considered_; }
  std::size_t pairs_reduced() const noexcept { return pairs_reduced_; }

  // Re-checks the cofactor identity of every element by expansion.
  bool verify_cofactors() const;

 private:
  friend GroebnerBasis buchberger(std::vector<Polynomial>, const MonomialOrder&, const GroebnerBudget&);

  std::vector<Polynomial> generators_;
  std::vector<Polynomial> elements_;
  std::vector<std::vector<Polynomial>> cofactors_;
  MonomialOrder order_;
  std::size_t pairs_considered_ = 0;
  std::size_t pairs_reduced_ = 0;
};

// Buchberger's algorithm with the coprime and chain criteria, normal pair
// selection, followed by full interreduction. Throws BudgetExceeded.
GroebnerBasis buchberger(std::vector<Polynomial> generators, const MonomialOrder& order = {},
                         const GroebnerBudget& budget = {});

struct NormalForm {
  Polynomial remainder;
  std::vector<Polynomial> cofactors;  // one per basis element
};

// f == sum_b cofactors[b] * elements[b] + remainder, and no term of the
// remainder is divisible by a leading monomial of the basis.
NormalForm normal_form(const Polynomial& f, const GroebnerBasis& basis);

struct IdealCertificate {
  std::vector<Polynomial> cofactors;  // one per generator
};

bool verify_ideal_certificate(const Polynomial& f, const std::vector<Polynomial>& generators,
                              const IdealCertificate& cert);

enum class Membership { member, non_member, indeterminate };

struct MembershipResult {
  Membership status = Membership::indeterminate;
  std::optional<IdealCertificate> certificate;
  std::string diagnostic;
};

// A returned certificate has already been re-verified by expansion.
MembershipResult ideal_membership(const Polynomial& f, const std::vector<Polynomial>& generators,
                                  const MonomialOrder& order = {}, const GroebnerBudget& budget = {});

// Degrevlex with the covariance variables s_a_b ranked in ground-set order.
MonomialOrder sigma_order(const GroundSet& ground, MonomialOrder::Kind kind = MonomialOrder::Kind::degrevlex);

}  // namespace gci

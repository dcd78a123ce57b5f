#include <gtest/gtest.h>

#include "invariants.hpp"

namespace slidesvm::prop {
namespace {

constexpr std::size_t kCases = 1000;

void expect_holds(const Outcome& o) {
  EXPECT_FALSE(o.failure.has_value()) << o.failure.value_or("");
  EXPECT_GE(o.cases, kCases);
}

TEST(Property, LipschitzBound) { expect_holds(lipschitz_bound(kCases, 1)); }
TEST(Property, LossRangeAndMonotone) { expect_holds(loss_range_and_monotone(kCases, 2)); }
TEST(Property, ProxMatchesOracle) { expect_holds(prox_matches_oracle(kCases, 3)); }
TEST(Property, LambdaZeroOffWorkingSet) { expect_holds(lambda_zero_off_working_set(kCases, 4)); }
TEST(Property, BUpdateZeroesGradient) { expect_holds(b_update_zeroes_gradient(kCases, 5)); }
TEST(Property, UUpdateMatchesProx) { expect_holds(u_update_matches_prox(kCases, 6)); }
TEST(Property, UUpdateMatchesProxAtThresholds) {
  expect_holds(u_update_matches_prox_at_thresholds(kCases, 7));
}
TEST(Property, WBranchesAgree) { expect_holds(w_branches_agree(kCases, 8)); }
TEST(Property, WUpdateNormalEquation) { expect_holds(w_update_normal_equation(kCases, 9)); }

}  // namespace
}  // namespace slidesvm::prop

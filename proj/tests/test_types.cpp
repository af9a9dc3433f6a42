#include "debias/types.hpp"

#include <doctest.h>

using namespace debias;

namespace {

Dataset small_dataset() {
  Vector y(4);
  y << 1.0, 0.0, 3.0, -2.0;
  IntVector r(4);
  r << 1, 0, 1, 1;
  Matrix X(4, 2);
  X << 1, 2, 3, 4, 5, 6, 7, 8;
  return Dataset(std::move(y), std::move(r), std::move(X));
}

}  // namespace

TEST_CASE("dataset validates shapes and mask entries") {
  const Dataset data = small_dataset();
  CHECK(data.n() == 4);
  CHECK(data.dim() == 2);
  CHECK(data.n_complete() == 3);

  Vector y(2);
  y << 1.0, 2.0;
  IntVector r(2);
  r << 1, 1;
  Matrix X(2, 2);
  X << 1, 2, 3, 4;

  IntVector bad_mask(2);
  bad_mask << 1, 2;
  CHECK_THROWS_AS(Dataset(y, bad_mask, X), ValidationError);

  IntVector none(2);
  none << 0, 0;
  CHECK_THROWS_AS(Dataset(y, none, X), ValidationError);

  Vector short_y(1);
  short_y << 1.0;
  CHECK_THROWS_AS(Dataset(short_y, r, X), ValidationError);

  Matrix bad_X = X;
  bad_X(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Dataset(y, r, bad_X), ValidationError);

  Vector bad_y = y;
  bad_y[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Dataset(bad_y, r, X), ValidationError);
}

TEST_CASE("complete-case view keeps order and row identity") {
  const Dataset data = small_dataset();
  const CompleteCases cc = complete_case_view(data);
  REQUIRE(cc.rows.size() == 3);
  CHECK(cc.rows[0] == 0);
  CHECK(cc.rows[1] == 2);
  CHECK(cc.rows[2] == 3);
  CHECK(cc.outcomes[0] == 1.0);
  CHECK(cc.outcomes[1] == 3.0);
  CHECK(cc.outcomes[2] == -2.0);
  CHECK(cc.covariates(1, 0) == 5.0);
  CHECK(cc.covariates(2, 1) == 8.0);
}

TEST_CASE("query point validation and regression value") {
  Vector x(2);
  x << 2.0, -1.0;
  const QueryPoint q(x);
  Vector beta(2);
  beta << 0.5, 4.0;
  CHECK(regression_value(q, beta) == doctest::Approx(-3.0));

  Vector beta3(3);
  beta3 << 1, 2, 3;
  CHECK_THROWS_AS(regression_value(q, beta3), ValidationError);
  CHECK_THROWS_AS(QueryPoint(Vector{}), ValidationError);
  Vector bad(1);
  bad << std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(QueryPoint{bad}, ValidationError);
}

TEST_CASE("pipeline error carries the stage name") {
  const PipelineError err("tuning", "boom");
  CHECK(err.stage == "tuning");
  CHECK(std::string(err.what()).find("tuning") != std::string::npos);
  CHECK(std::string(err.what()).find("boom") != std::string::npos);
}

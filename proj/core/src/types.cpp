#include "debias/types.hpp"

#include <cmath>

namespace debias {
namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

Dataset::Dataset(Vector outcomes, IntVector missing_mask, Matrix covariates)
    : outcomes_(std::move(outcomes)),
      mask_(std::move(missing_mask)),
      covariates_(std::move(covariates)) {
  const Index n = covariates_.rows();
  const Index d = covariates_.cols();
  if (n < 1) throw ValidationError("dataset needs at least one row");
  if (d < 1) throw ValidationError("dataset needs at least one covariate");
  if (outcomes_.size() != n)
    throw ValidationError("outcome length " + std::to_string(outcomes_.size()) +
                          " does not match row count " + std::to_string(n));
  if (mask_.size() != n)
    throw ValidationError("mask length " + std::to_string(mask_.size()) +
                          " does not match row count " + std::to_string(n));
  if (!covariates_.allFinite()) throw ValidationError("covariates contain non-finite values");
  if (!all_finite(outcomes_)) throw ValidationError("outcomes contain non-finite values");
  for (Index i = 0; i < n; ++i) {
    const int r = mask_[i];
    if (r != 0 && r != 1)
      throw ValidationError("mask entry " + std::to_string(i) + " is " + std::to_string(r) +
                            "; must be 0 or 1");
    n_complete_ += r;
  }
  if (n_complete_ == 0) throw ValidationError("all outcomes are missing");
}

QueryPoint::QueryPoint(Vector x) : x_(std::move(x)) {
  if (x_.size() < 1) throw ValidationError("query point must have dimension >= 1");
  if (!x_.allFinite()) throw ValidationError("query point contains non-finite values");
}

CompleteCases complete_case_view(const Dataset& data) {
  CompleteCases cc;
  cc.rows.reserve(static_cast<size_t>(data.n_complete()));
  for (Index i = 0; i < data.n(); ++i)
    if (data.mask()[i] == 1) cc.rows.push_back(i);
  const Index m = static_cast<Index>(cc.rows.size());
  cc.covariates.resize(m, data.dim());
  cc.outcomes.resize(m);
  for (Index k = 0; k < m; ++k) {
    cc.covariates.row(k) = data.covariates().row(cc.rows[static_cast<size_t>(k)]);
    cc.outcomes[k] = data.outcomes()[cc.rows[static_cast<size_t>(k)]];
  }
  return cc;
}

double regression_value(const QueryPoint& x, const Vector& beta) {
  if (x.dim() != beta.size())
    throw ValidationError("query dimension " + std::to_string(x.dim()) +
                          " does not match coefficient length " + std::to_string(beta.size()));
  return x.coords().dot(beta);
}

}  // namespace debias
